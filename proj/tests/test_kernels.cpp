#include <doctest.h>

#include <cmath>
#include <limits>

#include "tempfrac/errors.hpp"
#include "tempfrac/gaussian.hpp"
#include "tempfrac/kernels.hpp"
#include "tempfrac/specfun.hpp"

using namespace tempfrac;

namespace {

const quad::Options kTight{1e-300, 1e-13, 4000};

double f_pow(double kappa, double lambda, double u) { return u > 0.0 ? std::pow(u, kappa) * std::exp(-lambda * u) : 0.0; }

// lambda * int_0^t (s - y)_+^kappa e^{-lambda (s - y)} ds, split at s = y.
double tempering_term(double kappa, double lambda, double t, double y) {
  if (y >= t) return 0.0;
  const double lo = std::max(y, 0.0);
  auto f = [&](double d) { return f_pow(kappa, lambda, d); };
  const double skip = lo - y;  // integration variable d = s - y over [skip, t - y]
  double v = 0.0;
  if (skip == 0.0) {
    v = quad::integrate_endpoint(f, t - y, kappa, kTight).value;
  } else {
    v = quad::integrate(f, skip, t - y, kTight).value;
  }
  return lambda * v;
}

// h(t; y) from its defining expression with the time integral done by quadrature.
double h_direct(double H, double alpha, double lambda, double t, double y) {
  const double k = H - 1.0 / alpha;
  return f_pow(k, lambda, t - y) - f_pow(k, lambda, -y) + tempering_term(k, lambda, t, y);
}

}  // namespace

TEST_CASE("params: validation names the violated constraint") {
  CHECK_THROWS_WITH_AS(make_params(0.7, 1.0, 0.1), doctest::Contains("alpha"), domain_error);
  CHECK_THROWS_WITH_AS(make_params(0.7, 1.5, -0.1), doctest::Contains("lambda"), domain_error);
  CHECK_THROWS_WITH_AS(make_params(1.2, 1.5, 0.0, 1.0, 0.0, Kind::I), doctest::Contains("H in (0, 1)"),
                       domain_error);
  CHECK_THROWS_AS(make_params(0.0, 1.5, 0.1), domain_error);
  CHECK_THROWS_AS(make_params(0.7, 1.5, 0.1, 0.0), domain_error);
  CHECK_THROWS_AS(make_params(0.7, 1.5, 0.1, 1.0, 1.5), domain_error);
  CHECK(make_params(0.7, 2.0, 0.1, 1.0, 0.5).beta == 0.0);
  CHECK(parse_kind("I") == Kind::I);
  CHECK_THROWS_AS(parse_kind("III"), domain_error);
  CHECK_THROWS_AS((QuadratureConfig{1e-14, 0.5}).validate(), domain_error);
}

TEST_CASE("kernel_h: indicator case is exact") {
  const auto p = make_params(0.5, 2.0, 0.3);
  CHECK(kernel_h(p, 2.0, 1.0) == 1.0);
  CHECK(kernel_h(p, 2.0, -1.0) == 0.0);
  CHECK(kernel_h(p, 2.0, 0.0) == 1.0);
  CHECK(kernel_h(p, 2.0, 2.0) == 0.0);
  CHECK_THROWS_AS(kernel_h(p, -1.0, 0.0), domain_error);
  CHECK_THROWS_AS(kernel_g(p, 1.0, 0.0), domain_error);
}

TEST_CASE("kernel_h: agrees with direct evaluation of its definition") {
  struct P {
    double H, alpha, lambda;
  };
  for (const P& q : {P{0.7, 2.0, 0.15}, P{0.4, 1.5, 0.5}, P{1.3, 1.2, 1.0}, P{0.55, 1.7, 0.05}}) {
    const auto p = make_params(q.H, q.alpha, q.lambda);
    for (double t : {0.5, 1.0, 3.0}) {
      for (double y : {-7.0, -0.5, -1e-3, 0.2 * t, 0.9 * t}) {
        const double ref = h_direct(q.H, q.alpha, q.lambda, t, y);
        CHECK(kernel_h(p, t, y) == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
      }
    }
  }
  const auto p = make_params(0.7, 2.0, 0.15);
  CHECK(kernel_h(p, 1.0, -0.5) == doctest::Approx(h_direct(0.7, 2.0, 0.15, 1.0, -0.5)).epsilon(1e-12));
}

TEST_CASE("kernel_h: vanishes continuously at y = t when H > 1/alpha, singular markers otherwise") {
  const auto p = make_params(0.9, 1.5, 0.4);
  CHECK(kernel_h(p, 2.0, 2.0) == 0.0);
  const double eps = 1e-9;
  CHECK(std::abs(kernel_h(p, 2.0, 2.0 - eps) - std::pow(eps, p.kappa())) < 1e-8);  // h ~ eps^kappa
  const auto s = make_params(0.4, 1.5, 0.4);
  CHECK(kernel_h(s, 2.0, 2.0) == std::numeric_limits<double>::infinity());
  CHECK(kernel_h(s, 2.0, 0.0) == -std::numeric_limits<double>::infinity());
  CHECK(is_singular(kernel_h(s, 2.0, 0.0)));
  CHECK_FALSE(is_singular(kernel_h(s, 2.0, 1.0)));
  CHECK_FALSE(is_singular(std::nan("")));
}

TEST_CASE("kernel_g: explicit values") {
  const auto p0 = make_params(0.7, 2.0, 0.0, 1.0, 0.0, Kind::I);
  for (double y : {-0.3, -2.0, -10.0}) {
    CHECK(kernel_g(p0, 1.0, y) == doctest::Approx(std::pow(1.0 - y, 0.2) - std::pow(-y, 0.2)).epsilon(1e-13));
  }
  const auto p = make_params(0.7, 2.0, 0.15, 1.0, 0.0, Kind::I);
  CHECK(kernel_g(p, 1.0, 0.5) == doctest::Approx(std::pow(0.5, 0.2) * std::exp(-0.075)).epsilon(1e-15));
  const auto q = make_params(0.75, 1.5, 0.4, 1.0, 0.0, Kind::I);
  const long double k = 0.75L - 1.0L / 1.5L;
  const long double ref = std::pow(7.0L, k) * std::exp(-2.8L) - std::pow(2.0L, k) * std::exp(-0.8L);
  CHECK(kernel_g(q, 5.0, -2.0) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-14));
  CHECK(kernel_g(q, 5.0, 6.0) == 0.0);
}

TEST_CASE("kernel relation between the two kinds on a grid") {
  for (double H : {0.3, 0.8, 1.4}) {
    const double alpha = 1.6;
    const double lambda = 0.35;
    const auto p2 = make_params(H, alpha, lambda);
    const auto p1 = make_params(H, alpha, lambda, 1.0, 0.0, Kind::I);
    const double k = p2.kappa();
    for (double t : {0.4, 2.0}) {
      for (double y : {-3.0, -0.25, 0.1, 0.3}) {
        // int_0^t g(s; y) ds + t (-y)_+^k e^{-lambda (-y)_+}
        const double corr = tempering_term(k, lambda, t, y) / lambda;
        CHECK(kernel_h(p2, t, y) == doctest::Approx(kernel_g(p1, t, y) + lambda * corr).epsilon(1e-10).scale(1.0));
      }
    }
  }
}

TEST_CASE("kernel_h: stationary-increment shift and scaling") {
  for (double H : {0.35, 0.9, 1.6}) {
    const double alpha = 1.5;
    const double lambda = 0.6;
    const auto p = make_params(H, alpha, lambda);
    for (double T : {0.5, 3.0}) {
      for (double y : {-2.0, 0.2, 0.7}) {
        const double t = 1.3;
        const double lhs = kernel_h(p, t + T, y) - kernel_h(p, T, y);
        CHECK(lhs == doctest::Approx(kernel_h(p, t, y - T)).epsilon(1e-10).scale(1.0));
      }
    }
    for (double b : {0.5, 2.0, 10.0}) {
      const auto pb = make_params(H, alpha, lambda / b);
      for (double y : {-1.5, 0.3, 0.8}) {
        const double t = 1.0;
        CHECK(kernel_h(pb, b * t, b * y) ==
              doctest::Approx(std::pow(b, p.kappa()) * kernel_h(p, t, y)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("kernels of both kinds approach the untempered kernel as lambda -> 0") {
  const auto f2 = make_params(0.7, 1.5, 1e-9);
  const auto f1 = make_params(0.7, 1.5, 1e-9, 1.0, 0.0, Kind::I);
  const auto f0 = make_params(0.7, 1.5, 0.0, 1.0, 0.0, Kind::I);
  for (double y : {-4.0, -0.5, 0.5}) {
    CHECK(kernel_h(f2, 1.0, y) == doctest::Approx(kernel_g(f0, 1.0, y)).epsilon(1e-7));
    CHECK(kernel_g(f1, 1.0, y) == doctest::Approx(kernel_g(f0, 1.0, y)).epsilon(1e-7));
  }
}

TEST_CASE("tempered fractional operators applied to the indicator") {
  // Integral mode against the kernel.
  const auto p = make_params(1.1, 1.8, 0.3);
  const double k = p.kappa();
  for (double y : {-2.0, 0.0, 0.6}) {
    CHECK(tempered_frac_indicator(k, 0.3, FracMode::integral, 1.5, y) ==
          doctest::Approx(kernel_h(p, 1.5, y) / specfun::gamma_fn(1.0 + k)).epsilon(1e-12));
    CHECK(tempered_frac_indicator(k, 0.3, FracMode::integral, 0.0, y) == 0.0);
  }
  // Integral mode against its definition.
  {
    const double y = -0.7;
    const double t = 1.2;
    auto f = [&](double s) { return std::pow(s - y, k - 1.0) * std::exp(-0.3 * (s - y)); };
    const double ref = quad::integrate(f, 0.0, t, kTight).value / specfun::gamma_fn(k);
    CHECK(tempered_frac_indicator(k, 0.3, FracMode::integral, t, y) == doctest::Approx(ref).epsilon(1e-11));
  }
  // Derivative mode against its definition: f(y) = 0 for y < 0, f(y) = 1 on (0, t).
  const double kd = 0.3;
  const double c = kd / specfun::gamma_fn(1.0 - kd);
  {
    const double t = 1.0;
    const double y = -1.0;
    auto f = [&](double s) { return std::pow(s - y, -kd - 1.0) * std::exp(-(s - y)); };
    const double ref = -c * quad::integrate(f, 0.0, t, kTight).value;
    CHECK(tempered_frac_indicator(kd, 1.0, FracMode::derivative, t, y) == doctest::Approx(ref).epsilon(1e-11));
  }
  {
    const double t = 1.0;
    const double y = 0.4;
    auto f = [&](double d) { return std::pow(t - y + d, -kd - 1.0) * std::exp(-(t - y + d)); };
    const double tail = quad::integrate([&](double v) { return f(v / (1.0 - v)) / ((1.0 - v) * (1.0 - v)); }, 0.0,
                                        1.0, kTight)
                            .value;
    CHECK(tempered_frac_indicator(kd, 1.0, FracMode::derivative, t, y) == doctest::Approx(1.0 + c * tail).epsilon(1e-11));
  }
  // Derivative mode against the kernel for H < 1/alpha.
  const auto s = make_params(0.45, 1.5, 0.8);
  for (double y : {-3.0, -0.1, 0.5, 1.9}) {
    CHECK(tempered_frac_indicator(-s.kappa(), 0.8, FracMode::derivative, 2.0, y) ==
          doctest::Approx(kernel_h(s, 2.0, y) / specfun::gamma_fn(1.0 + s.kappa())).epsilon(1e-11));
  }
  CHECK_THROWS_AS(tempered_frac_indicator(-0.2, 1.0, FracMode::integral, 1.0, 0.0), domain_error);
  CHECK_THROWS_AS(tempered_frac_indicator(1.2, 1.0, FracMode::derivative, 1.0, 0.0), domain_error);
  CHECK_THROWS_AS(tempered_frac_indicator(0.5, 0.0, FracMode::derivative, 1.0, 0.0), domain_error);
}

TEST_CASE("kernel_alpha_norm: trivial cases and Gaussian cross-check") {
  CHECK(kernel_alpha_norm(make_params(1.0 / 1.5, 1.5, 0.7), 3.25).value == 3.25);
  CHECK(kernel_alpha_norm(make_params(0.8, 1.5, 0.7), 0.0).value == 0.0);
  const auto p = make_params(0.7, 2.0, 0.15);
  const double g2 = std::pow(specfun::gamma_fn(1.2), 2);
  for (double t : {0.3, 1.0, 4.0}) {
    const auto e = kernel_alpha_norm(p, t);
    CHECK(e.value == doctest::Approx(g2 * variance_tfbm2(0.7, 0.15, t)).epsilon(1e-9));
    CHECK(e.error < 1e-8 * e.value);
  }
  // Singular kernel (H < 1/alpha): H = 0.3, alpha = 2.
  const auto s = make_params(0.3, 2.0, 0.5);
  CHECK(kernel_alpha_norm(s, 1.0).value ==
        doctest::Approx(std::pow(specfun::gamma_fn(0.8), 2) * variance_tfbm2(0.3, 0.5, 1.0)).epsilon(1e-9));
  // lambda = 0: fractional Brownian motion.
  const auto f = make_params(0.7, 2.0, 0.0);
  CHECK(kernel_alpha_norm(f, 1.0).value == doctest::Approx(g2 * variance_fbm_limit(0.7, 1.0)).epsilon(1e-8));
}

TEST_CASE("kernel_alpha_norm: first kind against brute-force quadrature") {
  const auto p = make_params(0.75, 1.5, 0.4, 1.0, 0.0, Kind::I);
  const double t = 2.0;
  auto f = [&](double y) { return std::pow(std::abs(kernel_g(p, t, y)), 1.5); };
  double ref = 0.0;
  const quad::Options o{1e-300, 1e-12, 4000};
  ref += quad::integrate_endpoint([&](double d) { return f(t - d); }, t / 2, 0.0, o).value;
  ref += quad::integrate_endpoint([&](double d) { return f(d); }, t / 2, 0.0, o).value;
  ref += quad::integrate_endpoint([&](double d) { return f(-d); }, 1.0, 0.0, o).value;
  for (double a = 1.0; a < 400.0; a *= 2.0) ref += quad::integrate([&](double d) { return f(-d); }, a, 2 * a, o).value;
  const auto e = kernel_alpha_norm(p, t);
  CHECK(e.value == doctest::Approx(ref).epsilon(1e-8));
}
