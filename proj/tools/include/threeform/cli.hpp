#pragma once

#include "threeform/json_io.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace threeform::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitIndeterminate = 2;
inline constexpr int kExitUsage = 64;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CliConfig {
  std::uint64_t seed = 1;
  std::optional<long> samples;  // unset: each suite's own default
  double tolerance_numeric = 1e-6;
  double tolerance_exactness_proxy = 1e-8;
  int grid = 3;
  std::string backend = "rational";

  long samples_or(long fallback) const { return samples.value_or(fallback); }
  void validate() const;
  json to_json() const;
};

/// Applies key=value lines (seed, samples, tolerance_numeric, grid, and the
/// optional tolerance_exactness_proxy, backend) on top of `base`. Blank
/// lines and lines starting with '#' are skipped.
CliConfig parse_config_text(const std::string& text, CliConfig base = {});
CliConfig load_config_file(const std::string& path, CliConfig base = {});

enum class Status { Pass, Fail, Indeterminate };
std::string status_name(Status s);

struct Check {
  std::string name;
  Status status = Status::Pass;
  json data;  // residuals, counts, first failure
};

struct Report {
  std::vector<std::string> command;
  std::vector<Check> checks;
  json result = json::object();
  json config;  // resolved configuration, when the command used one
  double elapsed_ms = 0;

  Check& add(std::string name, bool ok, json data = json::object());
  Check& add(std::string name, Status s, json data = json::object());
  const Check* find(const std::string& name) const;
  Status status() const;
  int exit_code() const;
  /// Everything except "timings" is deterministic for fixed inputs.
  json to_json() const;
};

const std::vector<std::string>& suite_names();
/// Throws UsageError for an unknown name.
Report run_suite(const std::string& name, const CliConfig& cfg);

Report cmd_classify(const json& form, const std::optional<json>& omega, const CliConfig& cfg);
Report cmd_invariants(const json& form, const std::optional<json>& omega, const CliConfig& cfg);

struct TorusParams {
  Rational t{1, 4};
};
struct Lambda2Params {
  double C = 1;
  std::vector<double> g{1, 0, 0, 0, 1, 0, 0, 0, 1};  // row-major 3×3
  double t_lo = 1;
};
struct K3Params {
  std::string f = "1 + (x2^2 + y2^2)/4";
};

Report example_torus(const TorusParams& p, const CliConfig& cfg);
Report example_lambda2(const Lambda2Params& p, const CliConfig& cfg);
Report example_k3patch(const K3Params& p, const CliConfig& cfg);

/// "identity", "diag:a,b,c", or nine comma-separated entries.
std::vector<double> parse_metric(const std::string& text);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace threeform::cli
