#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "tempfrac/cli.hpp"

using tempfrac::cli::run_cli;

namespace {

struct Csv {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string meta_value(const std::string& key) const {
    for (const auto& [k, v] : meta)
      if (k == key) return v;
    return {};
  }
  std::size_t col(const std::string& name) const {
    for (std::size_t j = 0; j < header.size(); ++j)
      if (header[j] == name) return j;
    FAIL("missing column " << name);
    return 0;
  }
  double num(std::size_t i, const std::string& name) const { return std::stod(rows[i][col(name)]); }
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

Csv parse_csv(const std::string& text) {
  Csv c;
  bool have_header = false;
  for (const auto& line : split(text, '\n')) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      c.meta.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
    } else if (!have_header) {
      c.header = split(line, ',');
      have_header = true;
    } else if (!line.empty()) {
      c.rows.push_back(split(line, ','));
    }
  }
  return c;
}

Csv run_ok(const std::vector<std::string>& args) {
  const auto r = run_cli(args);
  INFO(r.err);
  REQUIRE(r.exit_code == 0);
  return parse_csv(r.out);
}

}  // namespace

TEST_CASE("spectrum at omega = 0 and the white-noise case") {
  const auto c = run_ok({"spectrum", "--H", "0.7", "--lambda", "0.15", "--omega-grid", "0,1"});
  REQUIRE(c.rows.size() == 2);
  CHECK(c.num(0, "omega") == 0.0);
  CHECK(c.num(0, "tfgn_density") == 0.0);
  const double expected = std::pow(0.15, -0.4) / (2.0 * std::numbers::pi);
  CHECK(std::abs(c.num(0, "tfgn2_density") - expected) < 1e-10 * expected);

  const auto w = run_ok({"spectrum", "--H", "0.5", "--lambda", "0.4", "--omega-grid", "-pi:pi:9"});
  REQUIRE(w.rows.size() == 9);
  for (std::size_t i = 0; i < w.rows.size(); ++i) {
    CHECK(std::abs(w.num(i, "tfgn2_density") - 1.0 / (2.0 * std::numbers::pi)) < 1e-12);
  }
}

TEST_CASE("spectrum rejects omega outside [-pi, pi]") {
  const auto r = run_cli({"spectrum", "--omega-grid", "0,4"});
  CHECK(r.exit_code == 2);
}

TEST_CASE("simulate is reproducible for a fixed seed") {
  for (const char* alpha : {"2", "1.5"}) {
    const std::vector<std::string> args{"simulate", "--alpha", alpha, "--n-paths", "20", "--seed", "11", "--n", "8"};
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    const auto other = run_cli({"simulate", "--alpha", alpha, "--n-paths", "20", "--seed", "12", "--n", "8"});
    CHECK(other.out != a.out);
  }
}

TEST_CASE("simulate: H = 1/2 Gaussian increments have variance 2 sigma^2 dt") {
  const int n_paths = 20000;
  const auto c = run_ok({"simulate", "--H", "0.5", "--alpha", "2", "--lambda", "0.3", "--sigma", "1.5", "--n", "4",
                         "--t-max", "2", "--n-paths", std::to_string(n_paths), "--seed", "3"});
  REQUIRE(c.rows.size() == static_cast<std::size_t>(4 * n_paths));
  const double dt = 0.5;
  const double expected = 2.0 * 1.5 * 1.5 * dt;
  for (int k = 0; k < 4; ++k) {
    double s2 = 0.0;
    for (int p = 0; p < n_paths; ++p) {
      const double cur = c.num(4 * p + k, "value");
      const double prev = k == 0 ? 0.0 : c.num(4 * p + k - 1, "value");
      s2 += (cur - prev) * (cur - prev);
    }
    const double var = s2 / n_paths;
    const double se = expected * std::sqrt(2.0 / n_paths);
    CHECK(std::abs(var - expected) < 4.0 * se);
  }
}

TEST_CASE("simulate: kinds differ for the same seed") {
  const std::vector<std::string> base{"simulate", "--alpha", "1.5", "--H", "0.8", "--n-paths", "5", "--seed", "1"};
  auto a = base;
  a.insert(a.end(), {"--kind", "I"});
  auto b = base;
  b.insert(b.end(), {"--kind", "II"});
  const auto ra = run_cli(a);
  const auto rb = run_cli(b);
  REQUIRE(ra.exit_code == 0);
  REQUIRE(rb.exit_code == 0);
  CHECK(parse_csv(ra.out).rows != parse_csv(rb.out).rows);
}

TEST_CASE("covariance: H = 1/2 diagonal equals t") {
  const auto c = run_ok({"covariance", "--H", "0.5", "--lambda", "0.7", "--n", "5", "--t-max", "3"});
  REQUIRE(c.rows.size() == 25);
  int diag = 0;
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    const double s = c.num(i, "s");
    const double t = c.num(i, "t");
    CHECK(std::abs(c.num(i, "cov") - std::min(s, t)) < 1e-12);
    diag += s == t;
  }
  CHECK(diag == 5);
}

TEST_CASE("decay: p_used differs by one between kinds") {
  const auto i = run_ok({"decay", "--kind", "I", "--t-min", "10", "--t-max", "14"});
  const auto ii = run_ok({"decay", "--kind", "II", "--t-min", "10", "--t-max", "14"});
  const double pi = std::stod(i.meta_value("p_used"));
  const double pii = std::stod(ii.meta_value("p_used"));
  CHECK(std::abs(pi - pii - 1.0) < 1e-15);
  CHECK(i.rows.size() == 5);
}

TEST_CASE("limits: H = 1/alpha gives zero gaps") {
  const auto c = run_ok({"limits", "--H", "0.5", "--alpha", "2", "--lambda", "0.3"});
  REQUIRE(!c.rows.empty());
  for (std::size_t i = 0; i < c.rows.size(); ++i) CHECK(c.num(i, "gap") < 1e-12);
  CHECK(c.meta_value("global_monotone") == "true");
  CHECK(c.meta_value("local_monotone") == "true");
}

TEST_CASE("json and csv carry the same numbers") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"spectrum", "--omega-grid", "0:pi:7"},
        std::vector<std::string>{"covariance", "--H", "0.7", "--n", "3"},
        std::vector<std::string>{"limits", "--b-global", "25,50", "--b-local", "0.1"}}) {
    auto jargs = args;
    jargs.insert(jargs.end(), {"--format", "json"});
    const auto c = run_ok(args);
    const auto r = run_cli(jargs);
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["rows"].size() == c.rows.size());
    CHECK(j["columns"].get<std::vector<std::string>>() == c.header);
    for (const auto& [k, v] : c.meta) CHECK(j["meta"][k].get<std::string>() == v);
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
      for (std::size_t k = 0; k < c.header.size(); ++k) {
        const auto& cell = j["rows"][i][k];
        if (cell.is_number()) {
          CHECK(cell.get<double>() == std::stod(c.rows[i][k]));
        } else if (cell.is_string()) {
          CHECK(cell.get<std::string>() == c.rows[i][k]);
        } else {
          CHECK(cell.is_null());
          CHECK(!std::isfinite(std::stod(c.rows[i][k])));
        }
      }
    }
  }
}

TEST_CASE("invalid parameters exit 2 naming the constraint") {
  struct Case {
    std::vector<std::string> args;
    std::string fragment;
  };
  const std::vector<Case> cases{
      {{"spectrum", "--alpha", "1"}, "alpha"},
      {{"simulate", "--alpha", "0.9"}, "alpha"},
      {{"covariance", "--lambda", "-0.1"}, "lambda"},
      {{"simulate", "--kind", "I", "--lambda", "0", "--H", "1.2", "--alpha", "2"}, "H"},
      {{"simulate", "--sigma", "0"}, "sigma"},
      {{"simulate", "--kind", "III"}, "kind"},
      {{"spectrum", "--H", "0"}, "H"},
  };
  for (const auto& c : cases) {
    const auto r = run_cli(c.args);
    INFO(c.args[1] << " " << c.args[2] << ": " << r.err);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find(c.fragment) != std::string::npos);
    CHECK(r.out.empty());
  }
}

TEST_CASE("usage errors exit 2, help exits 0") {
  CHECK(run_cli({}).exit_code == 2);
  CHECK(run_cli({"nonsense"}).exit_code == 2);
  CHECK(run_cli({"spectrum", "--no-such-flag", "1"}).exit_code == 2);
  CHECK(run_cli({"spectrum", "--H", "abc"}).exit_code == 2);
  const auto h = run_cli({"--help"});
  CHECK(h.exit_code == 0);
  CHECK(h.out.find("simulate") != std::string::npos);
}

TEST_CASE("numerical failure exits 3") {
  const auto r = run_cli({"decay", "--t-min", "1", "--t-max", "3", "--H", "0.01", "--alpha", "1.01", "--lambda", "0.3"});
  CHECK(r.exit_code == 3);
  CHECK(!r.err.empty());
}

TEST_CASE("config file supplies defaults, flags win; --out writes LF text") {
  const auto dir = std::filesystem::temp_directory_path() / "tempfrac_test_cli";
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "cfg.json";
  {
    std::ofstream f(cfg);
    f << R"({"H": 0.5, "lambda": 0.2, "omega_grid": "0,1"})";
  }
  const auto from_cfg = run_ok({"spectrum", "--config", cfg.string()});
  CHECK(from_cfg.meta_value("H") == "0.5");
  CHECK(from_cfg.rows.size() == 2);
  const auto override = run_ok({"spectrum", "--config", cfg.string(), "--H", "0.7"});
  CHECK(override.meta_value("H") == "0.69999999999999996");
  CHECK(override.meta_value("lambda") == "0.20000000000000001");

  const auto out = dir / "out.csv";
  std::filesystem::remove(out);
  const auto r = run_cli({"spectrum", "--omega-grid", "0,1", "--out", out.string()});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out, std::ios::binary);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(!text.empty());
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');
  CHECK(parse_csv(text).rows.size() == 2);

  const auto bad = run_cli({"spectrum", "--config", (dir / "missing.json").string()});
  CHECK(bad.exit_code == 2);
  std::filesystem::remove_all(dir);
}
