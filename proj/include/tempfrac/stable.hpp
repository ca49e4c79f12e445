#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "tempfrac/gaussian.hpp"
#include "tempfrac/params.hpp"

namespace tempfrac {

/// One alpha-stable variate with characteristic function
/// exp{-sigma^alpha |theta|^alpha (1 - i beta tan(pi alpha / 2) sign(theta))},
/// from two uniforms in (0, 1) (Chambers-Mallows-Stuck). alpha = 2 gives
/// sqrt(2) sigma times a standard normal.
double sample_stable(double alpha, double beta, double sigma, double u1, double u2);

/// Scale/skew functionals of a stochastic integral of f:
/// scale_alpha = sigma^alpha * int |f|^alpha, skew_weight = int |f|^alpha sign(f) / int |f|^alpha.
struct StableScaleSkew {
  double scale_alpha = 0.0;
  double skew_weight = 0.0;
};

/// Riemann-sum discretization of the moving-average integral over y.
/// Cells are [edges[c], edges[c+1]]; the grid times and 0 are always edges,
/// with geometric refinement (refine_depth levels) on their left.
struct DiscretizationPlan {
  double y_min = 0.0;
  double dy = 0.0;
  std::size_t n_nodes = 0;  // number of cells
  int refine_depth = 0;
  std::vector<double> edges;

  void validate(const SampleGrid& grid) const;
  double midpoint(std::size_t c) const { return 0.5 * (edges[c] + edges[c + 1]); }
  double width(std::size_t c) const { return edges[c + 1] - edges[c]; }
};

/// Builds cells of width dy near the sampling window, growing proportionally
/// to |y| further left, down to y_min = min(times, 0) - left_cutoff.
/// left_cutoff <= 0 picks max(50/lambda, 50) (lambda > 0) or 1e4 (lambda = 0).
DiscretizationPlan make_plan(const ProcessParams& p, const SampleGrid& grid, double dy, int refine_depth = 12,
                             double left_cutoff = 0.0);

/// Kernel values at the cell midpoints for time t (k = h or g by p.kind).
std::vector<double> kernel_nodes(const ProcessParams& p, const DiscretizationPlan& plan, double t);

StableScaleSkew scale_skew(std::span<const double> f_nodes, const DiscretizationPlan& plan, const ProcessParams& p);

/// Characteristic function of sum_c f_c dM_c over the plan's cells, i.e. of
/// the stochastic integral of the piecewise-constant kernel.
std::complex<double> integral_char_fn(std::span<const double> f_nodes, const DiscretizationPlan& plan,
                                      const ProcessParams& p, double theta);

/// Characteristic function of a stochastic integral with the given alpha-norm
/// of its integrand (beta = 0 part only when skew_weight is 0).
std::complex<double> char_fn_from_norm(const ProcessParams& p, const StableScaleSkew& s, double theta);

/// alpha-norm of (-y)_+^{H-1/alpha} e^{-lambda (-y)_+}: Gamma(alpha H) / (alpha lambda)^{alpha H}.
double c0_scale(const ProcessParams& p);

/// Cell increments dM_c of one path (stream shared by both kinds).
std::vector<double> stable_increments(const ProcessParams& p, const DiscretizationPlan& plan, std::uint64_t path,
                                      std::uint64_t seed);

/// Paths Z(t_i) = sum_c k(t_i; y_c) dM_c with iid stable cell increments of
/// scale sigma * width^{1/alpha}. Kind I and II runs with the same seed and
/// plan share the noise. alpha = 2 is handled by the Gaussian simulator.
PathEnsemble simulate_tfsm_paths(const ProcessParams& p, const SampleGrid& grid, const DiscretizationPlan& plan,
                                 std::size_t n_paths, std::uint64_t seed);

}  // namespace tempfrac
