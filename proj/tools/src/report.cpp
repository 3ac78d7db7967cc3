#include "threeform/cli.hpp"

#include <fstream>
#include <sstream>

namespace threeform::cli {

void CliConfig::validate() const {
  if (!(tolerance_numeric > 0)) throw UsageError("tolerance_numeric must be positive");
  if (!(tolerance_exactness_proxy > 0)) throw UsageError("tolerance_exactness_proxy must be positive");
  if (samples && *samples < 1) throw UsageError("samples must be at least 1");
  if (grid < 1) throw UsageError("grid must be at least 1");
  if (backend != "rational" && backend != "float") throw UsageError("backend must be rational or float");
}

json CliConfig::to_json() const {
  return {{"seed", seed},
          {"samples", samples ? json(*samples) : json(nullptr)},
          {"tolerance_numeric", tolerance_numeric},
          {"tolerance_exactness_proxy", tolerance_exactness_proxy},
          {"grid", grid},
          {"backend", backend}};
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  std::istringstream in(v);
  T x;
  if (!(in >> x) || !(in >> std::ws).eof()) throw UsageError("config: bad value for " + key + ": " + v);
  return x;
}

}  // namespace

CliConfig parse_config_text(const std::string& text, CliConfig cfg) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key == "seed")
      cfg.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "samples")
      cfg.samples = parse_number<long>(key, value);
    else if (key == "tolerance_numeric")
      cfg.tolerance_numeric = parse_number<double>(key, value);
    else if (key == "tolerance_exactness_proxy")
      cfg.tolerance_exactness_proxy = parse_number<double>(key, value);
    else if (key == "grid")
      cfg.grid = parse_number<int>(key, value);
    else if (key == "backend")
      cfg.backend = value;
    else
      throw UsageError("config line " + std::to_string(lineno) + ": unknown key " + key);
  }
  cfg.validate();
  return cfg;
}

CliConfig load_config_file(const std::string& path, CliConfig base) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), base);
}

std::string status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Indeterminate: return "indeterminate";
  }
  return "?";
}

Check& Report::add(std::string name, bool ok, json data) {
  return add(std::move(name), ok ? Status::Pass : Status::Fail, std::move(data));
}

Check& Report::add(std::string name, Status s, json data) {
  checks.push_back({std::move(name), s, std::move(data)});
  return checks.back();
}

const Check* Report::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

Status Report::status() const {
  bool indeterminate = false;
  for (const auto& c : checks) {
    if (c.status == Status::Fail) return Status::Fail;
    indeterminate = indeterminate || c.status == Status::Indeterminate;
  }
  return indeterminate ? Status::Indeterminate : Status::Pass;
}

int Report::exit_code() const {
  switch (status()) {
    case Status::Pass: return kExitPass;
    case Status::Fail: return kExitFail;
    case Status::Indeterminate: return kExitIndeterminate;
  }
  return kExitFail;
}

json Report::to_json() const {
  json cs = json::array();
  for (const auto& c : checks) {
    json e = {{"name", c.name}, {"status", status_name(c.status)}};
    if (!c.data.empty()) e["data"] = c.data;
    cs.push_back(e);
  }
  json out = {{"command", command}, {"status", status_name(status())}, {"checks", cs}};
  if (!config.is_null()) out["config"] = config;
  if (!result.empty()) out["result"] = result;
  out["timings"] = {{"elapsed_ms", elapsed_ms}};
  return out;
}

}  // namespace threeform::cli
