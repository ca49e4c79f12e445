#include <cmath>
#include <limits>
#include <numbers>

#include "tempfrac/errors.hpp"
#include "tempfrac/gaussian.hpp"
#include "tempfrac/specfun.hpp"

namespace tempfrac {

namespace sf = specfun;

namespace {

constexpr double kPi = std::numbers::pi;

void check_h_lambda(double H, double lambda) {
  if (!(H > 0.0)) throw domain_error("H must be > 0");
  if (!(lambda > 0.0)) throw domain_error("lambda must be > 0");
}

// Sum over l >= L+1 of |omega + 2 pi l|^{-s} + |omega - 2 pi l|^{-s}.
struct ZetaPair {
  double value;
  double error;
};

ZetaPair lattice_zeta(double s, int L, double omega) {
  const double w = omega / (2.0 * kPi);
  const auto a = sf::hurwitz_zeta(s, L + 1 + w);
  const auto b = sf::hurwitz_zeta(s, L + 1 - w);
  const double scale = std::pow(2.0 * kPi, -s);
  return {scale * (a.value + b.value), scale * (a.error + b.error)};
}

// Sum over the lattice x = omega + 2 pi l of term(x), l != 0, where
// term(x) = |x|^{-1-2H} (1 + lambda^2 / x^2)^e. Returns value and error bound.
SpectralValue lattice_sum(double H, double lambda, double e, double omega, double tol) {
  const int L = std::max(2, static_cast<int>(std::ceil((2.0 * lambda / kPi - 1.0) / 2.0)));
  SpectralValue out{0.0, 0.0};
  auto term = [&](double x) {
    const double ax = std::abs(x);
    return std::pow(ax, -1.0 - 2.0 * H) * std::pow(1.0 + (lambda / ax) * (lambda / ax), e);
  };
  for (int l = 1; l <= L; ++l) {
    out.value += term(omega + 2.0 * kPi * l) + term(omega - 2.0 * kPi * l);
  }
  // Beyond L expand (1 + lambda^2/x^2)^e binomially; each power sums to a
  // Hurwitz zeta value.
  const double xmin = 2.0 * kPi * (L + 1) - std::abs(omega);
  const double rho = (lambda / xmin) * (lambda / xmin);
  double lam2k = 1.0;
  for (int k = 0; k < 400; ++k) {
    const double s = 1.0 + 2.0 * H + 2.0 * k;
    const ZetaPair z = lattice_zeta(s, L, omega);
    const double c = sf::binomial(e, k);
    const double r = std::max(1.0, (k - e) / (k + 1.0));
    if (k > 0 && r * rho < 0.5) {
      // |C(e, k+j)| <= |C(e, k)| r^j and lambda^{2j} |x|^{-2j} <= rho^j.
      const double rem = std::abs(c) * lam2k * z.value / (1.0 - r * rho);
      if (rem <= 0.25 * tol || c == 0.0) {
        out.err_bound += rem;
        return out;
      }
    }
    out.value += c * lam2k * z.value;
    out.err_bound += std::abs(c) * lam2k * z.error;
    lam2k *= lambda * lambda;
  }
  throw convergence_error("spectral density: lattice tail expansion did not converge");
}

}  // namespace

quad::Estimate spectral_cosine_integral(double H, double lambda, const std::vector<std::pair<double, double>>& terms,
                                        double rel_tol) {
  check_h_lambda(H, lambda);
  double mmax = 0.0;
  double csum = 0.0;
  double c0 = 0.0;
  for (auto [m, c] : terms) {
    if (m < 0.0) throw domain_error("spectral_cosine_integral: frequencies must be >= 0");
    mmax = std::max(mmax, m);
    csum += c;
    if (m == 0.0) c0 += c;
  }
  double cabs = 0.0;
  for (auto [m, c] : terms) cabs += std::abs(c);
  if (std::abs(csum) > 1e-12 * cabs) throw domain_error("spectral_cosine_integral: coefficients must sum to 0");
  if (mmax == 0.0) return {0.0, 0.0};

  const double p = 0.5 - H;
  auto phi = [&](double w) { return std::pow(lambda * lambda + w * w, p) / (w * w); };
  auto dphi = [&](double w) { return phi(w) * (-2.0 / w + 2.0 * p * w / (lambda * lambda + w * w)); };
  // sum c_m cos(m w) = -2 sum c_m sin^2(m w / 2) avoids cancellation near 0.
  auto body = [&](double w) {
    double s = 0.0;
    for (auto [m, c] : terms) {
      const double sn = std::sin(0.5 * m * w);
      s += c * sn * sn;
    }
    return -2.0 * s * phi(w);
  };

  const double period = 2.0 * kPi / mmax;
  const quad::Options first_opt{1e-300, 0.01 * rel_tol, 4000};
  quad::Estimate acc = quad::integrate(body, 0.0, period, first_opt);
  const double scale = std::abs(acc.value);
  double acc_abs = scale;  // sum of |panel values|: rounding level of acc
  const quad::Options opt{std::max(1e-300, 1e-3 * rel_tol * scale), 0.01 * rel_tol, 4000};
  double omega = period;
  const double omega_min = std::max(4.0 * lambda, 8.0 * period);

  auto tail = [&](double W) {
    quad::Estimate t{0.0, 0.0};
    // m = 0 piece: binomial series of (lambda^2 + w^2)^p in lambda^2 / w^2.
    if (c0 != 0.0) {
      double s = 0.0;
      double lam2k = 1.0;
      for (int k = 0; k < 200; ++k) {
        const double term = sf::binomial(p, k) * lam2k * std::pow(W, -2.0 * H - 2.0 * k) / (2.0 * H + 2.0 * k);
        s += term;
        if (std::abs(term) <= 1e-18 * std::abs(s)) break;
        lam2k *= lambda * lambda;
      }
      t.value += c0 * s;
    }
    const double f = phi(W);
    const double df = dphi(W);
    for (auto [m, c] : terms) {
      if (m == 0.0) continue;
      t.value += c * (-std::sin(m * W) * f / m - std::cos(m * W) * df / (m * m));
      t.error += std::abs(c) * std::abs(df) / (m * m);
    }
    t.value /= kPi;
    t.error /= kPi;
    return t;
  };

  for (int guard = 0;; ++guard) {
    if (omega >= omega_min) {
      const quad::Estimate t = tail(omega);
      // Relative target, or the rounding level of the panel sum when the
      // result cancels far below its terms (large lags).
      const double floor = 64.0 * std::numeric_limits<double>::epsilon() * acc_abs / kPi;
      if (t.error <= std::max(0.1 * rel_tol * std::abs(acc.value / kPi + t.value), floor)) {
        return {acc.value / kPi + t.value, acc.error / kPi + t.error};
      }
    }
    if (guard > 60) throw convergence_error("spectral_cosine_integral: tail bound not reached");
    // Double the body range, one period per panel.
    const double target = 2.0 * omega;
    const long panels = std::lround((target - omega) / period);
    for (long k = 0; k < panels; ++k) {
      const double a = omega + k * period;
      const quad::Estimate e = quad::integrate(body, a, a + period, opt);
      acc.value += e.value;
      acc.error += e.error;
      acc_abs += std::abs(e.value);
    }
    omega += panels * period;
  }
}

quad::Estimate spectral_variance(double H, double lambda, double t, double rel_tol) {
  t = std::abs(t);
  if (t == 0.0) return {0.0, 0.0};
  return spectral_cosine_integral(H, lambda, {{0.0, 2.0}, {t, -2.0}}, rel_tol);
}

double tfgn2_acvf(double H, double lambda, long j, double rel_tol) {
  check_h_lambda(H, lambda);
  const double a = static_cast<double>(std::labs(j));
  // 4 sin^2(w/2) cos(j w) = 2 cos(j w) - cos((j+1) w) - cos((j-1) w)
  std::vector<std::pair<double, double>> terms;
  if (a == 0.0) {
    terms = {{0.0, 2.0}, {1.0, -2.0}};
  } else {
    terms = {{a, 2.0}, {a + 1.0, -1.0}, {a - 1.0, -1.0}};
  }
  return spectral_cosine_integral(H, lambda, terms, rel_tol).value;
}

SpectralValue tfgn2_spectral_density(double H, double lambda, double omega, double tol) {
  check_h_lambda(H, lambda);
  if (!(std::abs(omega) <= kPi)) throw domain_error("spectral density: |omega| must be <= pi");
  if (!(tol > 0.0)) throw domain_error("spectral density: tol must be > 0");
  omega = std::abs(omega);
  const double p = 0.5 - H;
  if (omega == 0.0) return {std::pow(lambda, 2.0 * p) / (2.0 * kPi), 0.0};
  const double s2 = 4.0 * std::sin(0.5 * omega) * std::sin(0.5 * omega);
  const double l0 = s2 / (omega * omega) * std::pow(lambda * lambda + omega * omega, p);
  const double pref = 1.0 / (2.0 * kPi);
  const SpectralValue rest = lattice_sum(H, lambda, p, omega, tol / (pref * s2));
  return {pref * (l0 + s2 * rest.value), pref * s2 * rest.err_bound + 4e-16 * pref * l0};
}

SpectralValue tfgn1_spectral_density(double H, double lambda, double omega, double tol) {
  check_h_lambda(H, lambda);
  if (!(std::abs(omega) <= kPi)) throw domain_error("spectral density: |omega| must be <= pi");
  if (!(tol > 0.0)) throw domain_error("spectral density: tol must be > 0");
  omega = std::abs(omega);
  if (omega == 0.0) return {0.0, 0.0};
  const double q = -0.5 - H;
  const double s2 = 4.0 * std::sin(0.5 * omega) * std::sin(0.5 * omega);
  const double g = sf::gamma_fn(H + 0.5);
  const double pref = g * g * s2 / (2.0 * kPi);
  const double l0 = std::pow(lambda * lambda + omega * omega, q);
  const SpectralValue rest = lattice_sum(H, lambda, q, omega, tol / pref);
  return {pref * (l0 + rest.value), pref * rest.err_bound + 4e-16 * pref * l0};
}

}  // namespace tempfrac
