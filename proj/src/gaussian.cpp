#include "tempfrac/gaussian.hpp"

#include <cmath>
#include <numbers>

#include "tempfrac/errors.hpp"
#include "tempfrac/parallel.hpp"
#include "tempfrac/rng.hpp"
#include "tempfrac/specfun.hpp"

namespace tempfrac {

namespace sf = specfun;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

bool is_integer(double x) { return x == std::floor(x); }

}  // namespace

SampleGrid SampleGrid::from_times(std::vector<double> times) {
  SampleGrid g;
  g.times = std::move(times);
  g.validate();
  if (g.times.size() >= 2) {
    const double d = g.times[1] - g.times[0];
    bool uni = true;
    for (std::size_t i = 1; i + 1 < g.times.size(); ++i) {
      if (std::abs((g.times[i + 1] - g.times[i]) - d) > 1e-12) uni = false;
    }
    g.uniform = uni;
    g.spacing = uni ? d : 0.0;
  }
  return g;
}

SampleGrid SampleGrid::linspace(double t_max, int n) {
  if (n < 1) throw domain_error("grid: n must be >= 1");
  if (!(t_max > 0.0)) throw domain_error("grid: t_max must be > 0");
  std::vector<double> t(n);
  if (n == 1) {
    t[0] = t_max;
  } else {
    for (int i = 0; i < n; ++i) t[i] = t_max * i / (n - 1);
  }
  return from_times(std::move(t));
}

void SampleGrid::validate() const {
  if (times.empty()) throw domain_error("grid: need at least one time");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw domain_error("grid: times must be finite");
    if (i > 0 && !(times[i] > times[i - 1])) throw domain_error("grid: times must be strictly increasing");
  }
}

double variance_fbm_limit(double H, double t) {
  if (!(H > 0.0 && H < 1.0)) throw domain_error("variance_fbm_limit: H must lie in (0, 1)");
  t = std::abs(t);
  if (t == 0.0) return 0.0;
  return std::pow(t, 2.0 * H) * sf::gamma_fn(1.0 - H) /
         (kSqrtPi * H * std::pow(2.0, 2.0 * H) * sf::gamma_fn(H + 0.5));
}

constexpr double kSeriesMaxLambdaT = 12.0;

double variance_tfbm2(double H, double lambda, double t) {
  if (!(H > 0.0)) throw domain_error("variance_tfbm2: H must be > 0");
  if (!(lambda > 0.0)) throw domain_error("variance_tfbm2: lambda must be > 0");
  t = std::abs(t);
  if (t == 0.0) return 0.0;
  if (H == 0.5) return t;  // indicator kernel: Brownian motion
  // Gamma(1-H) and the parameter 1-H hit poles at integer H >= 1.
  if (H >= 1.0 && is_integer(H)) return spectral_variance(H, lambda, t).value;
  // The two series grow like e^{lambda t} while their combination grows like
  // t: beyond lambda t ~ 12 the cancellation costs more than 1e-11.
  if (lambda * t > kSeriesMaxLambdaT) return spectral_variance(H, lambda, t).value;

  const double z = 0.25 * lambda * lambda * t * t;
  const double a1 = -2.0 * sf::gamma_fn(H) * std::pow(lambda, -2.0 * H) * sf::rgamma(H - 0.5) / kSqrtPi;
  const double f1 = sf::hyp2f3({1.0, -0.5}, {1.0 - H, 0.5, 1.0}, z);
  const double a2 = std::pow(t, 2.0 * H) * sf::gamma_fn(1.0 - H) /
                    (kSqrtPi * H * std::pow(2.0, 2.0 * H) * sf::gamma_fn(H + 0.5));
  const double f2 = sf::hyp2f3({1.0, H - 0.5}, {1.0, H + 1.0, H + 0.5}, z);
  return a1 * (1.0 - f1) + a2 * f2;
}

double covariance_tfbm2(double H, double lambda, double s, double t) {
  if (s == t) return variance_tfbm2(H, lambda, t);
  return 0.5 * (variance_tfbm2(H, lambda, t) + variance_tfbm2(H, lambda, s) - variance_tfbm2(H, lambda, t - s));
}

double matern_cov_integral(double H, double lambda, double s, double t, const QuadratureConfig& q) {
  if (!(H > 0.5)) throw domain_error("matern_cov_integral: H must be > 1/2 (the integral diverges otherwise)");
  if (!(lambda > 0.0)) throw domain_error("matern_cov_integral: lambda must be > 0");
  if (s < 0.0 || t < 0.0) throw domain_error("matern_cov_integral: s, t must be >= 0");
  q.validate();
  if (s == 0.0 || t == 0.0) return 0.0;
  const double nu = H - 1.0;
  auto kern = [&](double w) { return std::pow(w, nu) * sf::bessel_k(nu, lambda * w); };
  // Measure of {(u, v) in [0,t]x[0,s] : u - v = w}.
  auto len = [&](double w) { return std::max(0.0, std::min(s, t - w) - std::max(0.0, -w)); };
  // w^{H-1} K_{H-1}(lambda w) ~ w^{2H-2} at 0 when H < 1, log-singular at H = 1.
  const double beta = H < 1.0 ? 2.0 * H - 2.0 : (H == 1.0 ? -0.5 : 0.0);
  const quad::Options opt{q.abs_tol, q.rel_tol, q.max_subdivisions};

  auto one_side = [&](double end, double kink, auto&& weight) {
    const double first = (kink > 0.0 && kink < end) ? kink : end;
    double v = quad::integrate_endpoint([&](double w) { return kern(w) * weight(w); }, first, beta, opt).value;
    if (first < end) v += quad::integrate([&](double w) { return kern(w) * weight(w); }, first, end, opt).value;
    return v;
  };
  const double pos = one_side(t, t - s, [&](double w) { return len(w); });
  const double neg = one_side(s, s - t, [&](double w) { return len(-w); });
  const double c = sf::rgamma(H - 0.5) / (kSqrtPi * std::pow(2.0 * lambda, nu));
  return c * (pos + neg);
}

void factorize(CovarianceMatrix& cov) {
  const Eigen::Index n = cov.values.rows();
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (cov.values(i, i) != 0.0) active.push_back(i);
  }
  const Eigen::Index m = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd sub(m, m);
  double trace = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) sub(i, j) = cov.values(active[i], active[j]);
    trace += sub(i, i);
  }
  const double mean_var = m > 0 ? trace / m : 0.0;
  for (double eps : {0.0, 1e-14, 1e-13, 1e-12, 1e-11, 1e-10}) {
    Eigen::MatrixXd a = sub;
    a.diagonal().array() += eps * mean_var;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) continue;
    Eigen::MatrixXd lsub = llt.matrixL();
    if (!lsub.allFinite() || (m > 0 && !(lsub.diagonal().minCoeff() > 0.0))) continue;
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) full(active[i], active[j]) = lsub(i, j);
    }
    cov.chol = std::move(full);
    cov.jitter = eps * mean_var;
    return;
  }
  throw factorization_error("covariance matrix is not positive definite within the jitter budget (1e-10 * trace/n)");
}

CovarianceMatrix build_cov_matrix(double H, double lambda, const SampleGrid& grid) {
  grid.validate();
  const std::size_t n = grid.size();
  CovarianceMatrix cov;
  cov.grid = grid;
  cov.values.resize(n, n);
  std::vector<double> var(n);
  for (std::size_t i = 0; i < n; ++i) var[i] = variance_tfbm2(H, lambda, grid.times[i]);
  // Increment variances C_{|t_i - t_j|}^2, symmetric.
  parallel_for(n, [&](std::size_t i) {
    cov.values(i, i) = var[i];
    for (std::size_t j = 0; j < i; ++j) {
      const double d = variance_tfbm2(H, lambda, grid.times[i] - grid.times[j]);
      cov.values(i, j) = 0.5 * (var[i] + var[j] - d);
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) cov.values(j, i) = cov.values(i, j);
  }
  factorize(cov);
  return cov;
}

PathEnsemble sample_gaussian(const CovarianceMatrix& cov, std::size_t n_paths, std::uint64_t seed, double scale) {
  if (n_paths < 1) throw domain_error("n_paths must be >= 1");
  if (!cov.chol) throw domain_error("sample_gaussian: covariance matrix is not factorized");
  const Eigen::MatrixXd& l = *cov.chol;
  const std::size_t n = cov.grid.size();
  PathEnsemble out;
  out.grid = cov.grid;
  out.n_paths = n_paths;
  out.seed = seed;
  out.paths.assign(n_paths * n, 0.0);
  const rng::CounterRng gen(seed);
  parallel_for(n_paths, [&](std::size_t p) {
    Eigen::VectorXd z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = gen.normal(p, 0, static_cast<std::uint32_t>(i));
    const Eigen::VectorXd x = l.triangularView<Eigen::Lower>() * z;
    for (std::size_t i = 0; i < n; ++i) out.paths[p * n + i] = scale * x[i];
  });
  return out;
}

PathEnsemble simulate_gaussian_paths(double H, double lambda, const SampleGrid& grid, std::size_t n_paths,
                                     std::uint64_t seed) {
  const CovarianceMatrix cov = build_cov_matrix(H, lambda, grid);
  PathEnsemble out = sample_gaussian(cov, n_paths, seed);
  out.params = ProcessParams{H, 2.0, lambda, 1.0, 0.0, Kind::II};
  return out;
}

}  // namespace tempfrac
