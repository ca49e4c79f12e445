#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <sstream>

#include "tempfrac/cli.hpp"
#include "tempfrac/dependence.hpp"
#include "tempfrac/errors.hpp"
#include "tempfrac/gaussian.hpp"
#include "tempfrac/kernels.hpp"
#include "tempfrac/parallel.hpp"
#include "tempfrac/specfun.hpp"
#include "tempfrac/stable.hpp"

namespace tempfrac::cli {

namespace {

constexpr std::size_t kMaxGaussianGrid = 4096;
constexpr double kPi = std::numbers::pi;

struct RunConfig {
  std::string command;
  double H = 0.7;
  double alpha = 2.0;
  double lambda = 0.15;
  double sigma = 1.0;
  double beta = 0.0;
  std::string kind = "II";
  std::optional<double> t_max;
  std::optional<double> t_min;
  int n = 10;
  long long n_paths = 1000;
  std::uint64_t seed = 0;
  std::string omega_grid = "0:pi:129";
  std::string out;
  std::string format = "csv";
  std::optional<double> tol;
  double dy = 0.01;
  double theta1 = 1.0;
  double theta2 = 1.0;
  double band = 3.0;
  double slope_tol = 0.15;
  std::string b_global = "25,50,100,200";
  std::string b_local = "0.1,0.01,0.001";
  std::string config;

  ProcessParams params() const {
    return make_params(H, alpha, lambda, sigma, beta, parse_kind(kind));
  }
  QuadratureConfig quad() const {
    QuadratureConfig q;
    if (tol) q.rel_tol = *tol;
    q.validate();
    return q;
  }
};

double parse_number(const std::string& tok) {
  if (tok == "pi") return kPi;
  if (tok == "-pi") return -kPi;
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != tok.size()) throw domain_error("not a number: '" + tok + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> v;
  for (const auto& tok : split(s, ',')) v.push_back(parse_number(tok));
  if (v.empty()) throw domain_error(what + ": empty list");
  return v;
}

// "lo:hi:n" (n evenly spaced points) or a comma-separated list.
std::vector<double> parse_omega_grid(const std::string& s) {
  std::vector<double> w;
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw domain_error("omega-grid: expected lo:hi:n");
    const double lo = parse_number(parts[0]);
    const double hi = parse_number(parts[1]);
    const double n = parse_number(parts[2]);
    if (!(n >= 1.0) || n != std::floor(n) || n > 1e6) throw domain_error("omega-grid: n must be an integer in [1, 1e6]");
    if (!(hi >= lo)) throw domain_error("omega-grid: hi must be >= lo");
    const auto m = static_cast<int>(n);
    for (int i = 0; i < m; ++i) w.push_back(m == 1 ? lo : (i == m - 1 ? hi : lo + (hi - lo) * i / (m - 1)));
  } else {
    w = parse_list(s, "omega-grid");
  }
  for (double x : w) {
    if (!(std::abs(x) <= kPi)) throw domain_error("omega-grid: frequencies must lie in [-pi, pi]");
  }
  return w;
}

void add_param_meta(Table& t, const RunConfig& c) {
  t.meta.emplace_back("command", c.command);
  t.meta.emplace_back("H", format_real(c.H));
  t.meta.emplace_back("alpha", format_real(c.alpha));
  t.meta.emplace_back("lambda", format_real(c.lambda));
  t.meta.emplace_back("sigma", format_real(c.sigma));
  t.meta.emplace_back("beta", format_real(c.beta));
  t.meta.emplace_back("kind", c.kind);
}

// Grid t_max * i / n, i = 1..n.
SampleGrid time_grid(const RunConfig& c) {
  const double t_max = c.t_max.value_or(1.0);
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw domain_error("t-max must be > 0");
  if (c.n < 1) throw domain_error("n must be >= 1");
  std::vector<double> times(static_cast<std::size_t>(c.n));
  for (int i = 1; i <= c.n; ++i) times[i - 1] = t_max * i / c.n;
  return SampleGrid::from_times(std::move(times));
}

// Variance of the Gaussian process of the given kind at time t:
// C_t^2 for kind II (B^II), int g(t;y)^2 dy for kind I.
double gaussian_variance(const ProcessParams& p, double t, const QuadratureConfig& q) {
  if (t == 0.0) return 0.0;
  if (p.kind == Kind::II) return p.lambda > 0.0 ? variance_tfbm2(p.H, p.lambda, t) : variance_fbm_limit(p.H, t);
  ProcessParams p2 = p;
  p2.alpha = 2.0;
  p2.beta = 0.0;
  return kernel_alpha_norm(p2, t, q).value;
}

// Covariance over the uniform grid t_max*i/n from variances at the lags t_max*k/n.
CovarianceMatrix gaussian_cov(const ProcessParams& p, const RunConfig& c, const SampleGrid& grid,
                              const QuadratureConfig& q) {
  if (grid.size() > kMaxGaussianGrid) throw domain_error("n must be <= 4096 for Gaussian grids");
  const double t_max = c.t_max.value_or(1.0);
  const std::size_t n = grid.size();
  std::vector<double> v(n + 1);
  parallel_for(n + 1, [&](std::size_t k) { v[k] = gaussian_variance(p, t_max * static_cast<double>(k) / c.n, q); });
  CovarianceMatrix cov;
  cov.grid = grid;
  cov.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t lag = i > j ? i - j : j - i;
      cov.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 0.5 * (v[i + 1] + v[j + 1] - v[lag]);
    }
  }
  return cov;
}

Table cmd_spectrum(const RunConfig& c) {
  (void)c.params();  // reject invalid parameters even where unused
  if (!(c.H > 0.0) || !std::isfinite(c.H)) throw domain_error("H must be > 0");
  if (!(c.lambda > 0.0) || !std::isfinite(c.lambda)) throw domain_error("lambda must be > 0 for the spectrum");
  const double tol = c.tol.value_or(1e-13);
  if (!(tol > 0.0 && tol <= 1e-2)) throw domain_error("tol must lie in (0, 1e-2]");
  const auto omega = parse_omega_grid(c.omega_grid);
  std::vector<SpectralValue> d1(omega.size());
  std::vector<SpectralValue> d2(omega.size());
  parallel_for(omega.size(), [&](std::size_t i) {
    d1[i] = tfgn1_spectral_density(c.H, c.lambda, omega[i], tol);
    d2[i] = tfgn2_spectral_density(c.H, c.lambda, omega[i], tol);
  });
  Table t;
  t.meta.emplace_back("command", c.command);
  t.meta.emplace_back("H", format_real(c.H));
  t.meta.emplace_back("lambda", format_real(c.lambda));
  t.meta.emplace_back("tol", format_real(tol));
  t.columns = {"omega", "tfgn_density", "tfgn2_density", "err_bound_1", "err_bound_2"};
  for (std::size_t i = 0; i < omega.size(); ++i) {
    t.rows.push_back({omega[i], d1[i].value, d2[i].value, d1[i].err_bound, d2[i].err_bound});
  }
  return t;
}

Table cmd_simulate(const RunConfig& c) {
  const ProcessParams p = c.params();
  const QuadratureConfig q = c.quad();
  const SampleGrid grid = time_grid(c);
  if (c.n_paths < 1) throw domain_error("n-paths must be >= 1");
  if (static_cast<double>(c.n_paths) * static_cast<double>(grid.size()) > 5e7) {
    throw domain_error("n-paths * n must be <= 5e7");
  }
  const auto n_paths = static_cast<std::size_t>(c.n_paths);
  PathEnsemble ens;
  Table t;
  add_param_meta(t, c);
  if (p.alpha == 2.0) {
    // Z = int k dM_2 with M_2 = sqrt(2) sigma B: covariance 2 sigma^2 Cov_k, where
    // Cov_k = Gamma(H+1/2)^2 Cov_{B^II} (kind II) or the int g g covariance (kind I).
    CovarianceMatrix cov = gaussian_cov(p, c, grid, q);
    factorize(cov);
    double scale = std::sqrt(2.0) * p.sigma;
    if (p.kind == Kind::II) scale *= specfun::gamma_fn(p.H + 0.5);
    ens = sample_gaussian(cov, n_paths, c.seed, scale);
    t.meta.emplace_back("method", "cholesky");
    t.meta.emplace_back("jitter", format_real(cov.jitter));
  } else {
    if (!(c.dy > 0.0) || !std::isfinite(c.dy)) throw domain_error("dy must be > 0");
    const DiscretizationPlan plan = make_plan(p, grid, c.dy, 12, q.left_cutoff);
    ens = simulate_tfsm_paths(p, grid, plan, n_paths, c.seed);
    t.meta.emplace_back("method", "riemann_moving_average");
    t.meta.emplace_back("dy", format_real(c.dy));
    t.meta.emplace_back("cells", std::to_string(plan.n_nodes));
    t.meta.emplace_back("y_min", format_real(plan.y_min));
  }
  t.meta.emplace_back("seed", std::to_string(c.seed));
  t.meta.emplace_back("n_paths", std::to_string(n_paths));
  t.columns = {"path_id", "t", "value"};
  t.rows.reserve(n_paths * grid.size());
  for (std::size_t k = 0; k < n_paths; ++k) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      t.rows.push_back({static_cast<long long>(k), grid.times[i], ens.at(k, i)});
    }
  }
  return t;
}

Table cmd_covariance(const RunConfig& c) {
  // Gaussian processes: alpha and sigma play no role, but must still be valid.
  (void)c.params();
  const ProcessParams p = make_params(c.H, 2.0, c.lambda, 1.0, 0.0, parse_kind(c.kind));
  const QuadratureConfig q = c.quad();
  const SampleGrid grid = time_grid(c);
  const CovarianceMatrix cov = gaussian_cov(p, c, grid, q);
  Table t;
  t.meta.emplace_back("command", c.command);
  t.meta.emplace_back("H", format_real(c.H));
  t.meta.emplace_back("lambda", format_real(c.lambda));
  t.meta.emplace_back("kind", c.kind);
  t.columns = {"s", "t", "cov"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      t.rows.push_back({grid.times[i], grid.times[j],
                        cov.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
    }
  }
  return t;
}

Table cmd_decay(const RunConfig& c) {
  const ProcessParams p = c.params();
  const QuadratureConfig q = c.quad();
  const double lo = c.t_min.value_or(10.0);
  const double hi = c.t_max.value_or(40.0);
  if (!(lo >= 1.0) || lo != std::floor(lo)) throw domain_error("t-min must be an integer >= 1");
  if (!(hi > lo) || hi != std::floor(hi) || hi - lo > 10000) {
    throw domain_error("t-max must be an integer > t-min (at most 10000 values)");
  }
  std::vector<double> ts;
  for (double x = lo; x <= hi; x += 1.0) ts.push_back(x);
  const DecayDiagnostic d = decay_diagnostic(p, ts, c.theta1, c.theta2, {c.band, c.slope_tol}, q);
  Table t;
  add_param_meta(t, c);
  t.meta.emplace_back("theta1", format_real(c.theta1));
  t.meta.emplace_back("theta2", format_real(c.theta2));
  t.meta.emplace_back("p_used", format_real(d.p_used));
  t.meta.emplace_back("slope", format_real(d.slope));
  t.meta.emplace_back("band_ratio", format_real(d.band_ratio));
  t.meta.emplace_back("band", format_real(c.band));
  t.meta.emplace_back("slope_tol", format_real(c.slope_tol));
  t.meta.emplace_back("within_band", d.within_band ? "true" : "false");
  t.meta.emplace_back("slope_ok", d.slope_ok ? "true" : "false");
  t.columns = {"t", "I", "ratio", "sign"};
  for (std::size_t i = 0; i < ts.size(); ++i) {
    t.rows.push_back({d.t_values[i], d.I_values[i], d.ratio[i], static_cast<long long>(d.sign[i])});
  }
  return t;
}

Table cmd_limits(const RunConfig& c) {
  const ProcessParams p = c.params();
  const QuadratureConfig q = c.quad();
  Table t;
  add_param_meta(t, c);
  t.columns = {"regime", "b", "normalized", "limit", "gap", "error"};
  auto emit = [&](const std::string& regime, const LimitTable& tab) {
    for (const auto& r : tab.rows) t.rows.push_back({regime, r.b, r.normalized, r.limit, r.gap, r.error});
    t.meta.emplace_back(regime + "_monotone", tab.monotone ? "true" : "false");
  };
  bool outside = !(p.H < 1.0);
  if (p.lambda > 0.0) {
    emit("global", global_limit_check(p, parse_list(c.b_global, "b-global"), q));
  } else {
    t.meta.emplace_back("global_skipped", "lambda = 0");
  }
  const LimitTable loc = local_limit_check(p, parse_list(c.b_local, "b-local"), q);
  emit("local", loc);
  t.meta.emplace_back("outside_proven_range", outside ? "true" : "false");
  return t;
}

// Flags from a JSON config object, placed before the command-line flags so
// that the latter win (options take the last value).
std::vector<std::string> config_flags(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw domain_error("config file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw domain_error("config file must hold a JSON object");
  std::vector<std::string> flags;
  for (const auto& [key, val] : j.items()) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    if (name == "config") throw domain_error("config files cannot nest");
    std::string text;
    if (val.is_string()) {
      text = val.get<std::string>();
    } else if (val.is_number_integer()) {
      text = std::to_string(val.get<long long>());
    } else if (val.is_number()) {
      text = format_real(val.get<double>());
    } else {
      throw domain_error("config key '" + key + "' must be a number or string");
    }
    flags.push_back("--" + name);
    flags.push_back(text);
  }
  return flags;
}

std::optional<std::string> find_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  return path;
}

void build_app(CLI::App& app, RunConfig& c) {
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--H", c.H, "Hurst-type exponent H > 0");
  app.add_option("--alpha", c.alpha, "stability index in (1, 2]");
  app.add_option("--lambda", c.lambda, "tempering rate >= 0");
  app.add_option("--sigma", c.sigma, "scale > 0");
  app.add_option("--beta", c.beta, "skewness in [-1, 1] (alpha < 2)");
  app.add_option("--kind", c.kind, "I or II");
  app.add_option("--t-max", c.t_max, "last grid time (simulate/covariance: 1) or decay t range end (40)");
  app.add_option("--t-min", c.t_min, "decay t range start (10)");
  app.add_option("--n", c.n, "grid points t_max*i/n, i=1..n");
  app.add_option("--n-paths", c.n_paths, "number of simulated paths");
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--omega-grid", c.omega_grid, "lo:hi:n or comma list within [-pi, pi]");
  app.add_option("--out", c.out, "output file (default stdout)");
  app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--tol", c.tol, "relative tolerance (quadrature / spectral tail)");
  app.add_option("--dy", c.dy, "cell width of the stable moving-average discretization");
  app.add_option("--theta1", c.theta1, "decay: theta1");
  app.add_option("--theta2", c.theta2, "decay: theta2");
  app.add_option("--band", c.band, "decay: allowed max/min ratio band");
  app.add_option("--slope-tol", c.slope_tol, "decay: allowed slope deviation");
  app.add_option("--b-global", c.b_global, "limits: increasing b values");
  app.add_option("--b-local", c.b_local, "limits: decreasing b values");
  app.add_option("--config", c.config, "JSON file of flag values (flags win)");
  const std::pair<const char*, const char*> subs[] = {
      {"spectrum", "spectral densities of both increment noises on an omega grid"},
      {"simulate", "sample paths (Cholesky for alpha = 2, moving average otherwise)"},
      {"covariance", "Gaussian covariance matrix over the time grid"},
      {"decay", "codifference decay diagnostic over integer t"},
      {"limits", "large- and small-scale limits of the kernel alpha-norms"}};
  for (const auto& [name, help] : subs) {
    app.add_subcommand(name, help)->fallthrough()->callback([&c, name = name] { c.command = name; });
  }
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
  CliResult res;
  RunConfig c;
  CLI::App app{"Tempered fractional Brownian and stable motion toolkit", "tempfrac"};
  build_app(app, c);
  try {
    std::vector<std::string> all;
    if (auto path = find_config(args)) all = config_flags(*path);
    all.insert(all.end(), args.begin(), args.end());
    std::reverse(all.begin(), all.end());
    app.parse(all);
  } catch (const CLI::CallForHelp&) {
    res.out = app.help();
    return res;
  } catch (const CLI::ParseError& e) {
    res.exit_code = static_cast<int>(ExitCode::usage);
    res.err = std::string("error: ") + e.what() + "\n" + app.help();
    return res;
  } catch (const domain_error& e) {
    res.exit_code = static_cast<int>(ExitCode::usage);
    res.err = std::string("error: ") + e.what() + "\n";
    return res;
  }

  try {
    Table t;
    if (c.command == "spectrum") t = cmd_spectrum(c);
    else if (c.command == "simulate") t = cmd_simulate(c);
    else if (c.command == "covariance") t = cmd_covariance(c);
    else if (c.command == "decay") t = cmd_decay(c);
    else t = cmd_limits(c);
    std::string text = c.format == "json" ? to_json(t) : to_csv(t);
    if (c.out.empty()) {
      res.out = std::move(text);
    } else {
      std::ofstream f(c.out, std::ios::binary);
      if (!(f << text)) throw domain_error("cannot write '" + c.out + "'");
    }
  } catch (const domain_error& e) {
    res.exit_code = static_cast<int>(ExitCode::usage);
    res.err = std::string("error: ") + e.what() + "\n";
  } catch (const std::exception& e) {
    res.exit_code = static_cast<int>(ExitCode::numeric);
    res.err = std::string("numeric failure: ") + e.what() + "\n";
  }
  return res;
}

}  // namespace tempfrac::cli
