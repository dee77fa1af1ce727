#pragma once

// Command-line front end: configuration resolution, the subcommands, and
// CSV/JSON rendering. Kept apart from main() so tests can run commands
// in-process and compare output bytes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace eplab::cli {

using Json = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every setting a subcommand may read. Unset fields take per-command
/// defaults in resolve(); the resolved config is echoed into the output.
struct RunConfig {
  std::string command;
  std::optional<double> alpha, beta, p;
  std::optional<std::vector<double>> mu_grid, lambda_grid, a_grid, alpha_grid, delta_grid;
  std::optional<std::vector<int>> L;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> mu_max, tolerance, beta_lo, beta_hi, contrast_alpha, h;
  std::optional<std::vector<double>> alpha_range, beta_range;
  int threads = 0;  // 0: EPLAB_THREADS or 1; never echoed
  std::string out;
  std::string format = "csv";

  /// Fills defaults for `command` and validates; throws ConfigError.
  RunConfig resolved() const;
  /// Echo of the scientific settings (threads and out are omitted so output
  /// bytes do not depend on them).
  Json to_json() const;
  /// Fields present in j override this config.
  void merge(const Json& j);
};

/// Parses argv (subcommand first); --config file values are overridden by flags.
RunConfig parse_args(int argc, const char* const* argv);

/// "a:b:step" (inclusive) or "v1,v2,...".
std::vector<double> parse_grid(const std::string& text);

struct Output {
  Json config;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  Json summary = Json::object();
  int exit_code = 0;
};

Output run(const RunConfig& resolved);
std::string render(const Output& out, const std::string& format);

/// Full program: parse, run, write. Diagnostics go to stderr as one JSON line.
int main_entry(int argc, const char* const* argv);

const std::vector<std::string>& commands();

}  // namespace eplab::cli
