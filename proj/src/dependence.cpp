#include "tempfrac/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tempfrac/errors.hpp"
#include "tempfrac/kernels.hpp"
#include "tempfrac/parallel.hpp"
#include "tempfrac/specfun.hpp"

namespace tempfrac {

namespace {

// |a + b|^alpha - |a|^alpha - |b|^alpha without cancellation when |b| << |a|.
double alpha_defect(double a, double b, double alpha) {
  if (std::abs(a) < std::abs(b)) std::swap(a, b);
  if (a == 0.0) return 0.0;
  const double r = b / a;  // |r| <= 1
  return std::pow(std::abs(a), alpha) * std::expm1(alpha * std::log1p(r)) - std::pow(std::abs(b), alpha);
}

}  // namespace

quad::Estimate codifference(const ProcessParams& p, double t, double theta1, double theta2, const QuadratureConfig& q) {
  p.validate();
  q.validate();
  if (!(t >= 1.0)) throw domain_error("codifference: t must be >= 1");
  if (!(p.lambda > 0.0)) throw domain_error("codifference: lambda must be > 0");
  if (theta1 == 0.0 || theta2 == 0.0) return {0.0, 0.0};
  const double al = p.alpha;
  const double kappa = p.kappa();
  const double sa = std::pow(p.sigma, al);
  // A = theta1 k(1; x - t), B = theta2 k(1; x), written through offsets of x.
  auto integrand = [&](double u1b, double u0b) {
    const double b = theta2 * kernel_offsets(p, 1.0, u1b, u0b);
    const double a = theta1 * kernel_offsets(p, 1.0, u1b + t, u0b + t);
    return alpha_defect(a, b, al);
  };
  const quad::Options opt{q.abs_tol, q.rel_tol, q.max_subdivisions};
  double beta1;
  double beta0;
  if (kappa < 0.0) {
    beta1 = t == 1.0 ? al * kappa : kappa * (al - 1.0);
    beta0 = kappa * (al - 1.0);
  } else {
    beta1 = beta0 = kappa;
  }
  quad::Estimate total;
  auto add = [&](const quad::Estimate& e) {
    total.value += e.value;
    total.error += e.error;
  };
  // x in (1/2, 1): distance d = 1 - x.
  add(quad::integrate_endpoint([&](double d) { return integrand(d, d - 1.0); }, 0.5, beta1, opt));
  add(quad::integrate([&](double x) { return integrand(1.0 - x, -x); }, 0.0, 0.5, opt));
  // x < 0: distance d = -x.
  const double a = std::max(q.cutoff(p.lambda), 2.0);
  add(quad::integrate_endpoint([&](double d) { return integrand(1.0 + d, d); }, 1.0, beta0, opt));
  for (double lo = 1.0; lo < a; lo *= 2.0) {
    const double hi = std::min(2.0 * lo, a);
    add(quad::integrate([&](double d) { return integrand(1.0 + d, d); }, lo, hi, opt));
  }
  // Beyond -a both kernels carry e^{-lambda |x|}; the defect decays like
  // e^{-alpha lambda |x|}, bounded by its value at -a over alpha lambda.
  total.error += std::abs(integrand(1.0 + a, a)) / (al * p.lambda);
  total.value *= sa;
  total.error *= sa;
  return total;
}

double r_fn(const ProcessParams& p, double t, double theta1, double theta2, const QuadratureConfig& q) {
  if (p.beta != 0.0) throw domain_error("r_fn: only symmetric laws (beta = 0) are supported");
  if (theta1 == 0.0 || theta2 == 0.0) return 0.0;
  const double I = codifference(p, t, theta1, theta2, q).value;
  const double norm0 = kernel_alpha_norm(p, 1.0, q).value;
  const double sa = std::pow(p.sigma, p.alpha);
  const double k = std::exp(-sa * (std::pow(std::abs(theta1), p.alpha) + std::pow(std::abs(theta2), p.alpha)) * norm0);
  return k * std::expm1(-I);
}

double decay_exponent(const ProcessParams& p) { return p.kind == Kind::II ? p.kappa() - 1.0 : p.kappa(); }

DecayDiagnostic decay_diagnostic(const ProcessParams& p, const std::vector<double>& t_values, double theta1,
                                 double theta2, const DecayOptions& opt, const QuadratureConfig& q) {
  p.validate();
  if (!(p.lambda > 0.0)) throw domain_error("decay_diagnostic: lambda must be > 0");
  if (!(theta1 * theta2 > 0.0)) throw domain_error("decay_diagnostic: theta1 * theta2 must be > 0");
  if (t_values.size() < 2) throw domain_error("decay_diagnostic: need at least two t values");
  for (std::size_t i = 0; i < t_values.size(); ++i) {
    if (!(t_values[i] >= 1.0)) throw domain_error("decay_diagnostic: t values must be >= 1");
    if (i > 0 && !(t_values[i] > t_values[i - 1])) throw domain_error("decay_diagnostic: t values must increase");
  }
  if (!(opt.band > 1.0) || !(opt.slope_tol > 0.0)) throw domain_error("decay_diagnostic: band > 1, slope_tol > 0");

  DecayDiagnostic d;
  d.t_values = t_values;
  d.p_used = decay_exponent(p);
  const std::size_t n = t_values.size();
  d.I_values.assign(n, 0.0);
  parallel_for(n, [&](std::size_t i) { d.I_values[i] = codifference(p, t_values[i], theta1, theta2, q).value; });

  std::vector<double> lx(n);
  std::vector<double> ly(n);
  d.ratio.resize(n);
  d.sign.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t_values[i];
    const double I = d.I_values[i];
    d.sign[i] = (I > 0.0) - (I < 0.0);
    lx[i] = std::log(t);
    ly[i] = std::log(std::abs(I)) + p.lambda * t;  // log(|I| e^{lambda t})
    d.ratio[i] = std::exp(ly[i] - d.p_used * lx[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  d.slope = sxy / sxx;
  const auto first = d.ratio.begin() + static_cast<std::ptrdiff_t>(n / 2);
  const auto [lo, hi] = std::minmax_element(first, d.ratio.end());
  d.band_ratio = *hi / *lo;
  d.within_band = d.band_ratio <= opt.band;
  d.slope_ok = std::abs(d.slope - d.p_used) <= opt.slope_tol;
  return d;
}

namespace {

// Non-increasing up to the quadrature error of the two rows: once a gap has
// converged to ~0 the remaining differences are noise.
bool gaps_monotone(const std::vector<LimitRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double slack = (rows[i].error + rows[i - 1].error) / std::abs(rows[i].limit) + 1e-12;
    if (!(rows[i].gap <= rows[i - 1].gap + slack)) return false;
  }
  return true;
}

}  // namespace

LimitTable global_limit_check(const ProcessParams& p, const std::vector<double>& b_values, const QuadratureConfig& q) {
  p.validate();
  if (!(p.lambda > 0.0)) throw domain_error("global_limit_check: lambda must be > 0");
  for (std::size_t i = 0; i < b_values.size(); ++i) {
    if (!(b_values[i] > 0.0) || (i > 0 && !(b_values[i] > b_values[i - 1]))) {
      throw domain_error("global_limit_check: b values must be positive and increasing");
    }
  }
  LimitTable tab;
  tab.kind = p.kind;
  tab.outside_proven_range = !(p.H < 1.0);
  const double al = p.alpha;
  const double kappa = p.kappa();
  double limit;
  if (p.kind == Kind::II) {
    limit = std::pow(std::pow(p.lambda, -kappa) * specfun::gamma_fn(1.0 + kappa), al);
  } else {
    limit = 2.0 * specfun::gamma_fn(al * p.H) / std::pow(al * p.lambda, al * p.H);
  }
  tab.rows.resize(b_values.size());
  parallel_for(b_values.size(), [&](std::size_t i) {
    const double b = b_values[i];
    const quad::Estimate e = kernel_alpha_norm(p, b, q);
    const double scale = p.kind == Kind::II ? 1.0 / b : 1.0;
    const double v = e.value * scale;
    tab.rows[i] = {b, v, limit, std::abs(v / limit - 1.0), e.error * scale};
  });
  tab.monotone = gaps_monotone(tab.rows);
  return tab;
}

LimitTable local_limit_check(const ProcessParams& p, const std::vector<double>& b_values, const QuadratureConfig& q) {
  p.validate();
  for (std::size_t i = 0; i < b_values.size(); ++i) {
    if (!(b_values[i] > 0.0) || (i > 0 && !(b_values[i] < b_values[i - 1]))) {
      throw domain_error("local_limit_check: b values must be positive and decreasing");
    }
  }
  LimitTable tab;
  tab.kind = p.kind;
  tab.outside_proven_range = !(p.H < 1.0);
  double limit = std::numeric_limits<double>::quiet_NaN();
  if (!tab.outside_proven_range) {
    ProcessParams p0 = p;
    p0.lambda = 0.0;
    limit = kernel_alpha_norm(p0, 1.0, q).value;
  }
  const double al = p.alpha;
  tab.rows.resize(b_values.size());
  parallel_for(b_values.size(), [&](std::size_t i) {
    const double b = b_values[i];
    const quad::Estimate e = kernel_alpha_norm(p, b, q);
    const double scale = std::pow(b, -al * p.H);
    const double v = e.value * scale;
    tab.rows[i] = {b, v, limit, std::abs(v / limit - 1.0), e.error * scale};
  });
  tab.monotone = !tab.outside_proven_range && gaps_monotone(tab.rows);
  return tab;
}

}  // namespace tempfrac
