#include "tempfrac/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

#include "tempfrac/errors.hpp"

namespace tempfrac::quad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod abscissae and weights (QUADPACK qk15).
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error, resabs;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment qk15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double hl = 0.5 * (b - a);
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  double fv1[7];
  double fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = hl * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double value = resk * hl;
  resabs *= std::abs(hl);
  resasc *= std::abs(hl);
  double err = std::abs((resk - resg) * hl);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
  if (!std::isfinite(value) || !std::isfinite(err)) {
    throw quadrature_error("integrate: non-finite integrand value on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
  }
  return {a, b, value, err, resabs};
}

GaussRule make_gauss_legendre(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw domain_error("gauss_legendre: n must be >= 1");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

Estimate integrate(const Integrand& f, double a, double b, const Options& opt) {
  if (a == b) return {0.0, 0.0};
  std::priority_queue<Segment> heap;
  Segment first = qk15(f, a, b);
  double total = first.value;
  double total_err = first.error;
  double total_abs = first.resabs;
  heap.push(first);
  int splits = 0;
  while (true) {
    const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (total_err <= target) break;
    // Roundoff floor: the requested accuracy is below what the rule can resolve.
    if (total_err <= 100.0 * kEps * total_abs) break;
    if (splits >= opt.max_subdivisions) {
      throw quadrature_error("integrate: tolerance not met after " + std::to_string(splits) +
                             " subdivisions (estimate " + std::to_string(total) + ", error " +
                             std::to_string(total_err) + ")");
    }
    Segment s = heap.top();
    heap.pop();
    const double mid = 0.5 * (s.a + s.b);
    if (!(mid > std::min(s.a, s.b) && mid < std::max(s.a, s.b))) {
      throw quadrature_error("integrate: interval collapsed to machine resolution");
    }
    Segment l = qk15(f, s.a, mid);
    Segment r = qk15(f, mid, s.b);
    total += l.value + r.value - s.value;
    total_err += l.error + r.error - s.error;
    total_abs += l.resabs + r.resabs - s.resabs;
    heap.push(l);
    heap.push(r);
    ++splits;
    if (splits % 64 == 0) {
      // Re-accumulate to keep running sums free of drift.
      auto copy = heap;
      total = 0.0;
      total_err = 0.0;
      total_abs = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().error;
        total_abs += copy.top().resabs;
        copy.pop();
      }
    }
  }
  return {total, total_err};
}

double endpoint_exponent(double beta) {
  if (!(beta > -1.0)) throw domain_error("endpoint_exponent: beta must be > -1");
  if (beta < 0.0) return 1.0 / (1.0 + beta);
  if (beta > 0.0 && beta < 1.0) return std::min(8.0, 1.0 / beta);
  return 1.0;
}

Estimate integrate_endpoint(const Integrand& f, double len, double beta, const Options& opt) {
  if (len == 0.0) return {0.0, 0.0};
  const double m = endpoint_exponent(beta);
  if (m == 1.0) return integrate(f, 0.0, len, opt);
  auto g = [&](double v) {
    if (v <= 0.0) return 0.0;
    const double vm1 = std::pow(v, m - 1.0);
    const double d = len * vm1 * v;
    if (d <= 0.0) return 0.0;
    return f(d) * len * m * vm1;
  };
  return integrate(g, 0.0, 1.0, opt);
}

}  // namespace tempfrac::quad
