#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "tempfrac/params.hpp"
#include "tempfrac/quadrature.hpp"

namespace tempfrac {

/// Strictly increasing sampling times.
struct SampleGrid {
  std::vector<double> times;
  bool uniform = false;
  double spacing = 0.0;

  static SampleGrid from_times(std::vector<double> times);
  // n points t_max * i / (n - 1), i = 0..n-1 (n = 1 gives {t_max}).
  static SampleGrid linspace(double t_max, int n);

  std::size_t size() const { return times.size(); }
  void validate() const;
};

struct CovarianceMatrix {
  SampleGrid grid;
  Eigen::MatrixXd values;
  // Lower factor with L L^T = values + jitter * I on rows with nonzero
  // variance; rows of zero-variance points (t = 0) are identically zero.
  std::optional<Eigen::MatrixXd> chol;
  double jitter = 0.0;
};

/// Simulated paths, row-major n_paths x grid.size().
struct PathEnsemble {
  ProcessParams params;
  SampleGrid grid;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
  std::vector<double> paths;

  double at(std::size_t path, std::size_t i) const { return paths[path * grid.size() + i]; }
};

struct SpectralValue {
  double value;
  double err_bound;
};

struct SpectralTable {
  struct Row {
    double omega;
    double value;
    double err_bound;
  };
  std::vector<Row> rows;
};

/// Variance C_t^2 of the second-kind tempered fractional Brownian motion,
/// from the two-term 2F3 closed form (spectral quadrature at integer H and
/// for lambda |t| > 12, where the two series cancel too strongly).
double variance_tfbm2(double H, double lambda, double t);

/// Variance of the lambda = 0 limit: t^{2H} Gamma(1-H) / (sqrt(pi) H 2^{2H} Gamma(H+1/2)).
double variance_fbm_limit(double H, double t);

/// (C_t^2 + C_s^2 - C_{t-s}^2) / 2.
double covariance_tfbm2(double H, double lambda, double s, double t);

/// Covariance via the Matern-type double integral (H > 1/2).
double matern_cov_integral(double H, double lambda, double s, double t, const QuadratureConfig& q = {});

/// (1/pi) * integral over (0, inf) of omega^{-2} (lambda^2 + omega^2)^{1/2-H} sum_m c_m cos(m omega),
/// for coefficients with sum_m c_m = 0 (m >= 0). Integration is done panel by
/// panel on [0, Omega] with an integration-by-parts tail; Omega grows until the
/// tail bound is below rel_tol times the result, or below the rounding level of
/// the panel sum when the result cancels far below its terms (large lags).
quad::Estimate spectral_cosine_integral(double H, double lambda, const std::vector<std::pair<double, double>>& terms,
                                        double rel_tol = 1e-11);

/// C_t^2 from the defining spectral integral.
quad::Estimate spectral_variance(double H, double lambda, double t, double rel_tol = 1e-11);

/// Autocovariance r(j) of the unit-lag increment noise, via spectral quadrature.
double tfgn2_acvf(double H, double lambda, long j, double rel_tol = 1e-11);

/// Spectral density of the second-kind increment noise at |omega| <= pi.
SpectralValue tfgn2_spectral_density(double H, double lambda, double omega, double tol = 1e-13);

/// Spectral density of the first-kind increment noise at |omega| <= pi.
SpectralValue tfgn1_spectral_density(double H, double lambda, double omega, double tol = 1e-13);

/// Covariance matrix of B^II over the grid, with Cholesky factor.
CovarianceMatrix build_cov_matrix(double H, double lambda, const SampleGrid& grid);

/// Cholesky factor with escalating diagonal jitter (1e-14 .. 1e-10 of the mean
/// variance); throws factorization_error beyond that.
void factorize(CovarianceMatrix& cov);

/// Paths L Z for the factorized covariance; Z from the counter-based generator.
PathEnsemble sample_gaussian(const CovarianceMatrix& cov, std::size_t n_paths, std::uint64_t seed,
                             double scale = 1.0);

PathEnsemble simulate_gaussian_paths(double H, double lambda, const SampleGrid& grid, std::size_t n_paths,
                                     std::uint64_t seed);

}  // namespace tempfrac
