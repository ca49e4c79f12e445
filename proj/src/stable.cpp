#include "tempfrac/stable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tempfrac/errors.hpp"
#include "tempfrac/kernels.hpp"
#include "tempfrac/parallel.hpp"
#include "tempfrac/rng.hpp"
#include "tempfrac/specfun.hpp"

namespace tempfrac {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint32_t kNoiseStream = 1;

double sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

double sample_stable(double alpha, double beta, double sigma, double u1, double u2) {
  if (!(alpha > 1.0 && alpha <= 2.0)) throw domain_error("sample_stable: alpha must lie in (1, 2]");
  if (!(beta >= -1.0 && beta <= 1.0)) throw domain_error("sample_stable: beta must lie in [-1, 1]");
  if (!(sigma > 0.0)) throw domain_error("sample_stable: sigma must be > 0");
  if (!(u1 > 0.0 && u1 < 1.0 && u2 > 0.0 && u2 < 1.0)) throw domain_error("sample_stable: uniforms must lie in (0, 1)");
  if (alpha == 2.0) {
    return std::sqrt(2.0) * sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }
  const double v = kPi * (u1 - 0.5);
  const double w = -std::log(u2);
  const double tan_a = std::tan(0.5 * kPi * alpha);
  const double b = std::atan(beta * tan_a) / alpha;
  const double s = std::pow(1.0 + beta * beta * tan_a * tan_a, 0.5 / alpha);
  const double x = s * std::sin(alpha * (v + b)) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos(v - alpha * (v + b)) / w, (1.0 - alpha) / alpha);
  return sigma * x;
}

void DiscretizationPlan::validate(const SampleGrid& grid) const {
  if (!(dy > 0.0)) throw domain_error("plan: dy must be > 0");
  if (edges.size() < 2 || n_nodes != edges.size() - 1) throw domain_error("plan: inconsistent cell count");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw domain_error("plan: edges must be strictly increasing");
  }
  if (edges.front() != y_min) throw domain_error("plan: first edge must equal y_min");
  if (grid.times.back() > edges.back()) throw domain_error("plan: cells do not reach the last grid time");
  if (y_min > std::min(grid.times.front(), 0.0)) throw domain_error("plan: y_min must lie left of the grid");
  // Singular points must be cell edges.
  auto has_edge = [&](double s) { return std::binary_search(edges.begin(), edges.end(), s); };
  if (!has_edge(0.0) && 0.0 < edges.back()) throw domain_error("plan: 0 is not a cell edge");
  for (double t : grid.times) {
    if (!has_edge(t)) throw domain_error("plan: grid time " + std::to_string(t) + " is not a cell edge");
  }
}

DiscretizationPlan make_plan(const ProcessParams& p, const SampleGrid& grid, double dy, int refine_depth,
                             double left_cutoff) {
  p.validate();
  grid.validate();
  if (!(dy > 0.0)) throw domain_error("plan: dy must be > 0");
  if (refine_depth < 0 || refine_depth > 40) throw domain_error("plan: refine_depth must lie in [0, 40]");
  const double t_lo = std::min(grid.times.front(), 0.0);
  const double t_hi = std::max(grid.times.back(), 0.0);
  if (!(t_hi > t_lo)) throw domain_error("plan: grid must extend beyond 0");
  double cutoff = left_cutoff;
  if (!(cutoff > 0.0)) cutoff = p.lambda > 0.0 ? std::max(50.0 / p.lambda, 50.0) : 1e4;

  const double span = std::max(t_hi - t_lo, 1.0);
  const double w0 = t_lo - span;  // uniform cells on [w0, t_hi]
  const double y_min = t_lo - cutoff;

  std::vector<double> singular{0.0};
  for (double t : grid.times) singular.push_back(t);
  std::sort(singular.begin(), singular.end());
  singular.erase(std::unique(singular.begin(), singular.end()), singular.end());

  std::vector<double> e;
  const auto n_uniform = static_cast<long>(std::ceil((t_hi - w0) / dy));
  for (long k = 0; k <= n_uniform; ++k) e.push_back(std::min(w0 + k * dy, t_hi));
  // Geometric growth to the left of the uniform window.
  for (double y = w0; y > y_min;) {
    y -= dy * (1.0 + (w0 - y) / span);
    e.push_back(std::max(y, y_min));
  }
  for (double s : singular) {
    e.push_back(s);
    for (int j = 1; j <= refine_depth; ++j) e.push_back(s - dy * std::ldexp(1.0, -j));
  }
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  // Drop non-singular edges that nearly coincide with a singular point.
  const double merge = dy * std::ldexp(1.0, -refine_depth - 2);
  std::vector<double> edges;
  for (double x : e) {
    if (x < y_min || x > t_hi) continue;
    const bool is_sing = std::binary_search(singular.begin(), singular.end(), x);
    bool close = false;
    if (!is_sing) {
      auto it = std::lower_bound(singular.begin(), singular.end(), x);
      if (it != singular.end() && *it - x < merge) close = true;
      if (it != singular.begin() && x - *std::prev(it) < merge) close = true;
    }
    if (!close) edges.push_back(x);
  }
  DiscretizationPlan plan;
  plan.y_min = edges.front();
  plan.dy = dy;
  plan.refine_depth = refine_depth;
  plan.edges = std::move(edges);
  plan.n_nodes = plan.edges.size() - 1;
  plan.validate(grid);
  return plan;
}

std::vector<double> kernel_nodes(const ProcessParams& p, const DiscretizationPlan& plan, double t) {
  std::vector<double> k(plan.n_nodes, 0.0);
  for (std::size_t c = 0; c < plan.n_nodes; ++c) {
    const double y = plan.midpoint(c);
    if (y < t) k[c] = kernel_offsets(p, t, t - y, -y);
  }
  return k;
}

StableScaleSkew scale_skew(std::span<const double> f_nodes, const DiscretizationPlan& plan, const ProcessParams& p) {
  if (f_nodes.size() != plan.n_nodes) throw domain_error("scale_skew: node count does not match the plan");
  double a = 0.0;
  double b = 0.0;
  for (std::size_t c = 0; c < plan.n_nodes; ++c) {
    if (!std::isfinite(f_nodes[c])) throw domain_error("scale_skew: kernel nodes must be finite");
    const double m = std::pow(std::abs(f_nodes[c]), p.alpha) * plan.width(c);
    a += m;
    b += m * sign(f_nodes[c]);
  }
  return {std::pow(p.sigma, p.alpha) * a, a > 0.0 ? b / a : 0.0};
}

std::complex<double> char_fn_from_norm(const ProcessParams& p, const StableScaleSkew& s, double theta) {
  if (theta == 0.0) return {1.0, 0.0};
  const double tan_a = p.alpha == 2.0 ? 0.0 : std::tan(0.5 * kPi * p.alpha);
  const double mag = std::pow(std::abs(theta), p.alpha) * s.scale_alpha;
  return std::exp(std::complex<double>(-mag, mag * p.beta * tan_a * sign(theta) * s.skew_weight));
}

std::complex<double> integral_char_fn(std::span<const double> f_nodes, const DiscretizationPlan& plan,
                                      const ProcessParams& p, double theta) {
  return char_fn_from_norm(p, scale_skew(f_nodes, plan, p), theta);
}

double c0_scale(const ProcessParams& p) {
  if (!(p.lambda > 0.0)) throw domain_error("c0_scale: lambda must be > 0");
  if (!(p.alpha * p.kappa() > -1.0)) throw domain_error("c0_scale: alpha (H - 1/alpha) <= -1, the integral diverges");
  const double s = p.alpha * p.H;
  return specfun::gamma_fn(s) / std::pow(p.alpha * p.lambda, s);
}

std::vector<double> stable_increments(const ProcessParams& p, const DiscretizationPlan& plan, std::uint64_t path,
                                      std::uint64_t seed) {
  const rng::CounterRng gen(seed);
  std::vector<double> dm(plan.n_nodes);
  for (std::size_t c = 0; c < plan.n_nodes; ++c) {
    const auto u = gen.uniforms(path, kNoiseStream, static_cast<std::uint32_t>(c));
    const double scale = p.sigma * std::pow(plan.width(c), 1.0 / p.alpha);
    dm[c] = sample_stable(p.alpha, p.beta, scale, u[0], u[1]);
  }
  return dm;
}

PathEnsemble simulate_tfsm_paths(const ProcessParams& p, const SampleGrid& grid, const DiscretizationPlan& plan,
                                 std::size_t n_paths, std::uint64_t seed) {
  p.validate();
  grid.validate();
  plan.validate(grid);
  if (!(p.alpha < 2.0)) throw domain_error("simulate_tfsm_paths: alpha = 2 is simulated by the Gaussian module");
  if (n_paths < 1) throw domain_error("n_paths must be >= 1");
  if (plan.n_nodes > 0xffffffffu) throw domain_error("plan: too many cells");
  const std::size_t n = grid.size();
  // Kernel table, shared read-only by the workers.
  std::vector<std::vector<double>> table(n);
  parallel_for(n, [&](std::size_t i) { table[i] = kernel_nodes(p, plan, grid.times[i]); });

  PathEnsemble out;
  out.params = p;
  out.grid = grid;
  out.n_paths = n_paths;
  out.seed = seed;
  out.paths.assign(n_paths * n, 0.0);
  parallel_for(n_paths, [&](std::size_t path) {
    const std::vector<double> dm = stable_increments(p, plan, path, seed);
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double>& k = table[i];
      double s = 0.0;
      for (std::size_t c = 0; c < dm.size(); ++c) s += k[c] * dm[c];
      out.paths[path * n + i] = s;
    }
  });
  return out;
}

}  // namespace tempfrac
