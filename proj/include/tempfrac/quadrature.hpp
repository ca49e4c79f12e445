#pragma once

#include <functional>
#include <vector>

namespace tempfrac::quad {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

struct Options {
  double abs_tol = 1e-14;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
};

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (cached, thread-safe).
const GaussRule& gauss_legendre(int n);

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// Throws quadrature_error if the tolerance is not met within
/// opt.max_subdivisions bisections.
Estimate integrate(const Integrand& f, double a, double b, const Options& opt);

/// Integral over d in [0, len] of f(d), where f behaves like d^beta near
/// d = 0 (beta > -1). The substitution d = len * v^m (m = 1/(1+beta) for
/// beta < 0) removes the leading singularity; for 0 < beta < 1 a larger m
/// smooths the d^beta kink. f receives the distance d itself so callers can
/// evaluate near the endpoint without cancellation.
Estimate integrate_endpoint(const Integrand& f, double len, double beta, const Options& opt);

/// Mapping exponent used by integrate_endpoint.
double endpoint_exponent(double beta);

}  // namespace tempfrac::quad
