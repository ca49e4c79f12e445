#pragma once

#include <string>

namespace tempfrac {

enum class Kind { I, II };

std::string to_string(Kind k);
Kind parse_kind(const std::string& s);

/// Law of one process: Hurst-type exponent H, stability index alpha in (1, 2],
/// tempering rate lambda >= 0, scale sigma > 0, skewness beta in [-1, 1].
struct ProcessParams {
  double H = 0.7;
  double alpha = 2.0;
  double lambda = 0.15;
  double sigma = 1.0;
  double beta = 0.0;
  Kind kind = Kind::II;

  // Throws domain_error naming the violated constraint.
  void validate() const;

  // Kernel exponent H - 1/alpha.
  double kappa() const { return H - 1.0 / alpha; }

  // H == 1/alpha: the second-kind kernel is an indicator.
  bool levy_case() const { return kappa() == 0.0; }
};

// Validated copy; beta is reset to 0 when alpha == 2 (it has no effect there).
ProcessParams make_params(double H, double alpha, double lambda, double sigma = 1.0, double beta = 0.0,
                          Kind kind = Kind::II);

struct QuadratureConfig {
  double abs_tol = 1e-14;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
  double left_cutoff = 0.0;  // <= 0: max(50/lambda, 50)

  void validate() const;

  // Effective cutoff a for integrals over (-inf, -a].
  double cutoff(double lambda) const;
};

}  // namespace tempfrac
