#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tempfrac::cli {

enum class ExitCode : int { ok = 0, usage = 2, numeric = 3 };

using Cell = std::variant<double, long long, std::string>;

/// A rectangular result table plus "key=value" metadata.
struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// CSV: "# key=value" metadata lines, one header row, %.17g reals, LF endings.
std::string to_csv(const Table& t);

/// JSON object {"meta": {...}, "columns": [...], "rows": [[...], ...]};
/// non-finite reals become null.
std::string to_json(const Table& t);

/// Round-trip exact text for a double (%.17g); nan/inf spelled out.
std::string format_real(double x);

struct CliResult {
  int exit_code = 0;
  std::string out;  // rendered table when no --out path is given
  std::string err;  // diagnostics / usage text
};

/// Runs one invocation; args exclude the program name, e.g.
/// {"spectrum", "--H", "0.7", "--lambda", "0.15"}. Never throws.
CliResult run_cli(const std::vector<std::string>& args);

}  // namespace tempfrac::cli
