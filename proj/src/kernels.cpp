#include "tempfrac/kernels.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "tempfrac/errors.hpp"
#include "tempfrac/specfun.hpp"

namespace tempfrac {

namespace sf = specfun;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// u^k e^{-lambda u} for u > 0.
inline double power_exp(double kappa, double lambda, double u) {
  return std::exp(kappa * std::log(u) - lambda * u);
}

quad::Options options_of(const QuadratureConfig& q) { return {q.abs_tol, q.rel_tol, q.max_subdivisions}; }

void add(quad::Estimate& acc, const quad::Estimate& e) {
  acc.value += e.value;
  acc.error += e.error;
}

}  // namespace

std::string to_string(Kind k) { return k == Kind::I ? "I" : "II"; }

Kind parse_kind(const std::string& s) {
  if (s == "I" || s == "i" || s == "1") return Kind::I;
  if (s == "II" || s == "ii" || s == "2") return Kind::II;
  throw domain_error("kind must be I or II, got '" + s + "'");
}

void ProcessParams::validate() const {
  if (!(alpha > 1.0 && alpha <= 2.0)) throw domain_error("alpha must lie in (1, 2]");
  if (!(H > 0.0) || !std::isfinite(H)) throw domain_error("H must be > 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw domain_error("lambda must be >= 0");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw domain_error("sigma must be > 0");
  if (!(beta >= -1.0 && beta <= 1.0)) throw domain_error("beta must lie in [-1, 1]");
  if (alpha == 2.0 && beta != 0.0) throw domain_error("beta must be 0 when alpha = 2");
  // Without tempering the kernels are not in L^alpha unless H < 1.
  if (lambda == 0.0 && !(H < 1.0)) throw domain_error("lambda = 0 requires H in (0, 1)");
}

ProcessParams make_params(double H, double alpha, double lambda, double sigma, double beta, Kind kind) {
  ProcessParams p{H, alpha, lambda, sigma, alpha == 2.0 ? 0.0 : beta, kind};
  p.validate();
  return p;
}

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0 && abs_tol <= 1e-2)) throw domain_error("abs_tol must lie in (0, 1e-2]");
  if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) throw domain_error("rel_tol must lie in (0, 1e-2]");
  if (max_subdivisions < 1) throw domain_error("max_subdivisions must be positive");
}

double QuadratureConfig::cutoff(double lambda) const {
  if (left_cutoff > 0.0) return left_cutoff;
  return lambda > 0.0 ? std::max(50.0 / lambda, 50.0) : 50.0;
}

double kernel_offsets(const ProcessParams& p, double t, double u1, double u0) {
  if (t < 0.0) throw domain_error("kernel: t must be >= 0");
  if (t == 0.0 || u1 < 0.0) return 0.0;
  const double kappa = p.kappa();
  const double lambda = p.lambda;
  if (p.kind == Kind::II && kappa == 0.0) return (u1 > 0.0 && u0 <= 0.0) ? 1.0 : 0.0;
  if (u1 == 0.0) return kappa < 0.0 ? kInf : 0.0;
  if (u0 == 0.0 && kappa < 0.0) return -kInf;

  if (u0 <= 0.0) {
    // 0 <= y < t: only the first power term is present.
    double v = power_exp(kappa, lambda, u1);
    if (p.kind == Kind::II && lambda > 0.0) {
      v += std::pow(lambda, -kappa) * sf::lower_gamma(kappa + 1.0, lambda * u1);
    }
    return v;
  }
  if (p.kind == Kind::II && lambda > 0.0) {
    // y < 0: h = k * integral_{u0}^{u1} v^{k-1} e^{-lambda v} dv.
    if (kappa == 0.0) return 0.0;
    return kappa * std::pow(lambda, -kappa) * sf::gamma_integral(kappa, lambda * u0, lambda * u1);
  }
  // Difference of the two power terms, written relative to the second one.
  return power_exp(kappa, lambda, u0) * std::expm1(kappa * std::log1p(t / u0) - lambda * t);
}

double kernel_h(const ProcessParams& p, double t, double y) {
  if (p.kind != Kind::II) throw domain_error("kernel_h requires kind II");
  return kernel_offsets(p, t, t - y, -y);
}

double kernel_g(const ProcessParams& p, double t, double y) {
  if (p.kind != Kind::I) throw domain_error("kernel_g requires kind I");
  return kernel_offsets(p, t, t - y, -y);
}

double tempered_frac_indicator(double kappa, double lambda, FracMode mode, double t, double y) {
  if (!(lambda > 0.0)) throw domain_error("tempered_frac_indicator: lambda must be > 0");
  if (t < 0.0) throw domain_error("tempered_frac_indicator: t must be >= 0");
  if (mode == FracMode::integral) {
    if (!(kappa > 0.0)) throw domain_error("tempered_frac_indicator: integral mode needs kappa > 0");
    if (t == 0.0 || y >= t) return 0.0;
    const double lo = lambda * std::max(-y, 0.0);
    return std::pow(lambda, -kappa) * sf::rgamma(kappa) * sf::gamma_integral(kappa, lo, lambda * (t - y));
  }
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw domain_error("tempered_frac_indicator: derivative mode needs 0 < kappa < 1");
  }
  if (t == 0.0 || y > t) return 0.0;
  if (y == t) return kInf;
  if (y == 0.0) return -kInf;
  const double c = kappa * sf::rgamma(1.0 - kappa) * std::pow(lambda, kappa);
  if (y > 0.0) return std::pow(lambda, kappa) + c * sf::upper_gamma(-kappa, lambda * (t - y));
  return -c * sf::gamma_integral(-kappa, -lambda * y, lambda * (t - y));
}

namespace {

// Bound on the integral of |k|^alpha over y < -a.
double tail_bound(const ProcessParams& p, double t, double a) {
  const double al = p.alpha;
  const double kappa = p.kappa();
  const double lam = p.lambda;
  if (p.kind == Kind::I) {
    const double s = al * kappa + 1.0;
    return std::pow(2.0, al - 1.0) * std::pow(al * lam, -s) *
           (sf::upper_gamma(s, al * lam * a) + sf::upper_gamma(s, al * lam * (a + t)));
  }
  if (kappa < 1.0) {
    return std::pow(std::abs(kappa) * t, al) * std::pow(a, al * (kappa - 1.0)) * std::exp(-al * lam * a) /
           (al * lam);
  }
  const double s = al * (kappa - 1.0) + 1.0;
  return std::pow(kappa * t, al) * std::pow(1.0 + t / a, al * (kappa - 1.0)) * std::pow(al * lam, -s) *
         sf::upper_gamma(s, al * lam * a);
}

}  // namespace

constexpr double kMaxNormT = 1e10;

quad::Estimate kernel_alpha_norm(const ProcessParams& p, double t, const QuadratureConfig& q) {
  p.validate();
  q.validate();
  if (t < 0.0) throw domain_error("kernel_alpha_norm: t must be >= 0");
  // Panel placement loses the kernel's support well before overflow.
  if (!(t <= kMaxNormT)) throw domain_error("kernel_alpha_norm: t must be <= 1e10");
  if (t == 0.0) return {0.0, 0.0};
  const double kappa = p.kappa();
  if (p.kind == Kind::II && kappa == 0.0) return {t, 0.0};
  if (p.lambda == 0.0 && kappa == 0.0) return {t, 0.0};  // kind I reduces to the indicator too

  const double al = p.alpha;
  const quad::Options opt = options_of(q);
  auto mag = [&](double u1, double u0) { return std::pow(std::abs(kernel_offsets(p, t, u1, u0)), al); };
  const double beta_t = al * kappa;                  // |k|^alpha ~ d^beta_t near y = t
  const double beta_0 = kappa < 0.0 ? al * kappa : kappa;  // left of y = 0

  quad::Estimate total;
  // (t/2, t): singular end at y = t, parametrized by d = t - y.
  add(total, quad::integrate_endpoint([&](double d) { return mag(d, d - t); }, 0.5 * t, beta_t, opt));
  // [0, t/2]: smooth.
  add(total, quad::integrate([&](double y) { return mag(t - y, -y); }, 0.0, 0.5 * t, opt));

  if (p.lambda > 0.0) {
    const double a = std::max(q.cutoff(p.lambda), t);
    const double l0 = std::min(t, a);
    add(total, quad::integrate_endpoint([&](double d) { return mag(t + d, d); }, l0, beta_0, opt));
    for (double lo = l0; lo < a; lo *= 2.0) {
      const double hi = std::min(2.0 * lo, a);
      add(total, quad::integrate([&](double d) { return mag(t + d, d); }, lo, hi, opt));
    }
    const double tb = tail_bound(p, t, a);
    total.error += tb;
    return total;
  }

  // No tempering: geometric panels, then the algebraic tail via d = 1/v.
  const double a = std::max(8.0 * t, 1.0);
  const double l0 = std::min(t, a);
  add(total, quad::integrate_endpoint([&](double d) { return mag(t + d, d); }, l0, beta_0, opt));
  for (double lo = l0; lo < a; lo *= 2.0) {
    const double hi = std::min(2.0 * lo, a);
    add(total, quad::integrate([&](double d) { return mag(t + d, d); }, lo, hi, opt));
  }
  const double beta_inf = al * (1.0 - p.H) - 1.0;
  add(total, quad::integrate_endpoint(
                 [&](double v) {
                   const double d = 1.0 / v;
                   return mag(t + d, d) / (v * v);
                 },
                 1.0 / a, beta_inf, opt));
  return total;
}

}  // namespace tempfrac
