#pragma once

#include "tempfrac/params.hpp"
#include "tempfrac/quadrature.hpp"

namespace tempfrac {

/// Second-kind kernel h(t; y). Requires p.kind == Kind::II.
///
/// When H < 1/alpha the kernel is singular at y = t and y = 0; the values
/// there are returned as +inf and -inf respectively (see is_singular).
double kernel_h(const ProcessParams& p, double t, double y);

/// First-kind kernel g(t; y) = (t-y)_+^k e^{-lambda (t-y)_+} - (-y)_+^k e^{-lambda (-y)_+},
/// k = H - 1/alpha. Requires p.kind == Kind::I. Same singular markers as kernel_h.
double kernel_g(const ProcessParams& p, double t, double y);

/// Kernel of either kind in offset form: u1 = t - y and u0 = -y are passed
/// separately so points close to a singularity keep full relative precision.
double kernel_offsets(const ProcessParams& p, double t, double u1, double u0);

/// True for the infinite markers returned at singular points.
inline bool is_singular(double v) { return v == v && (v - v) != 0.0; }

enum class FracMode { integral, derivative };

/// Tempered fractional integral (kappa > 0) or derivative (0 < kappa < 1) of
/// the indicator 1_[0,t], evaluated at y. lambda > 0.
double tempered_frac_indicator(double kappa, double lambda, FracMode mode, double t, double y);

/// Integral over the real line of |k(t; y)|^alpha, k = h or g by p.kind.
/// The error field includes the analytic bound for the truncated left tail.
/// Requires 0 <= t <= 1e10.
quad::Estimate kernel_alpha_norm(const ProcessParams& p, double t, const QuadratureConfig& q = {});

}  // namespace tempfrac
