#pragma once

#include <array>

namespace tempfrac::specfun {

/// Stopping rule for hypergeometric series.
struct SeriesControl {
  double rel_tol = 1e-17;
  int max_terms = 2000;

  // rel_tol in (0, 1e-3], max_terms >= 50; throws domain_error otherwise.
  void validate() const;
};

/// Gamma function (std::tgamma, with the reflection formula below 0.5).
/// Throws pole_error at 0, -1, -2, ...
double gamma_fn(double x);

/// 1/Gamma(x), returning exactly 0 at the poles.
double rgamma(double x);

/// Modified Bessel function of the second kind K_nu(x), x > 0. K_{-nu} = K_nu.
///
/// Temme's series is used for x <= 2 and Steed's continued fraction above,
/// followed by upward recurrence in the order. See kBesselSeam.
double bessel_k(double nu, double x);

/// Crossover between the small-x series and the continued fraction in bessel_k.
inline constexpr double kBesselSeam = 2.0;

/// Generalized hypergeometric 2F3(a1, a2; b1, b2, b3; z) by direct summation.
///
/// Terms are accumulated in extended precision with compensated summation and
/// the loop stops once the geometric bound on the remaining tail drops below
/// ctl.rel_tol times the running sum. Throws pole_error if some b is a
/// nonpositive integer, convergence_error if max_terms is exhausted.
double hyp2f3(const std::array<double, 2>& a, const std::array<double, 3>& b, double z,
              const SeriesControl& ctl = {});

// Incomplete gamma family. These are used by the kernel layer.

/// Lower incomplete gamma gamma(a, x) for a > 0, x >= 0.
double lower_gamma(double a, double x);

/// Upper incomplete gamma Gamma(a, x) for x > 0 and any real a that is not a
/// nonpositive integer (x = 0 is allowed when a > 0).
double upper_gamma(double a, double x);

/// Integral of u^(a-1) e^(-u) over [x1, x2], 0 <= x1 <= x2, choosing the
/// evaluation route that avoids cancellation. x1 must be > 0 when a <= 0.
double gamma_integral(double a, double x1, double x2);

/// Hurwitz zeta(s, q) = sum_{n>=0} (q+n)^(-s), s > 1, q > 0.
struct HurwitzResult {
  double value;
  double error;
};
HurwitzResult hurwitz_zeta(double s, double q);

/// Generalized binomial coefficient C(r, k).
double binomial(double r, int k);

}  // namespace tempfrac::specfun
