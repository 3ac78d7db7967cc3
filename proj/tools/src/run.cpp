#include "threeform/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace threeform::cli {

namespace {

// A path, "-" for stdin, or inline JSON.
json read_json_arg(const std::string& arg) {
  std::string text;
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) {
    text = arg;
  } else if (arg == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(arg);
    if (!in) throw UsageError("cannot read " + arg);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
}

void emit(const json& j, const std::optional<std::string>& out_path, std::ostream& out) {
  std::string text = j.dump(2) + "\n";
  if (out_path) {
    std::ofstream f(*out_path);
    if (!f) throw UsageError("cannot write " + *out_path);
    f << text;
  } else {
    out << text;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"threeform: 3-forms in six dimensions"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::optional<std::uint64_t> seed;
  std::optional<long> samples;
  std::optional<int> grid;
  std::optional<double> tol;
  std::optional<std::string> out_path, backend, config_path;
  app.add_option("--seed", seed, "generator seed");
  app.add_option("--samples", samples, "samples for property suites");
  app.add_option("--grid", grid, "grid points per axis");
  app.add_option("--tol", tol, "numeric tolerance");
  app.add_option("--out", out_path, "write the JSON report here instead of stdout");
  app.add_option("--backend", backend, "rational or float")->check(CLI::IsMember({"rational", "float"}));
  app.add_option("--config", config_path, "key=value config file");

  std::string form_arg, omega_arg, suite, example;
  auto* classify = app.add_subcommand("classify", "classify a 3-form given as Form JSON");
  classify->add_option("form", form_arg, "path, '-' for stdin, or inline JSON")->required();
  classify->add_option("--omega", omega_arg, "symplectic form as Form JSON (default e12+e34+e56)");
  auto* invariants = app.add_subcommand("invariants", "print K, F, Q, q and subspace dimensions");
  invariants->add_option("form", form_arg, "path, '-' for stdin, or inline JSON")->required();
  invariants->add_option("--omega", omega_arg, "symplectic form as Form JSON");
  auto* verify = app.add_subcommand("verify", "run a seeded identity suite");
  verify->add_option("suite", suite, "suite name")->required();

  auto* ex = app.add_subcommand("example", "build and check a worked example");
  ex->add_option("name", example, "torus, lambda2 or k3patch")->required()->check(
      CLI::IsMember({"torus", "lambda2", "k3patch"}));
  std::string t_arg = "1/4", g_arg = "identity", f_arg = K3Params{}.f;
  double c_arg = 1, t_lo = 1;
  ex->add_option("--t", t_arg, "torus: degeneration parameter (rational)");
  ex->add_option("--C", c_arg, "lambda2: constant C");
  ex->add_option("--g", g_arg, "lambda2: identity, diag:a,b,c, or 9 entries");
  ex->add_option("--t-lo", t_lo, "lambda2: lower corner of the fiber box");
  ex->add_option("--f", f_arg, "k3patch: positive function of x1,y1,x2,y2,x,y");
  for (auto* sub : {classify, invariants, verify, ex}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    CliConfig cfg;
    if (config_path) cfg = load_config_file(*config_path, cfg);
    if (seed) cfg.seed = *seed;
    if (samples) cfg.samples = *samples;
    if (grid) cfg.grid = *grid;
    if (tol) cfg.tolerance_numeric = *tol;
    if (backend) cfg.backend = *backend;
    cfg.validate();

    std::optional<json> omega;
    if (!omega_arg.empty()) omega = read_json_arg(omega_arg);

    if (classify->parsed()) {
      Report rep = cmd_classify(read_json_arg(form_arg), omega, cfg);
      json body = rep.status() == Status::Indeterminate
                      ? json{{"status", "indeterminate"}, {"reason", rep.checks.front().data["reason"]}}
                      : rep.result;
      emit(body, out_path, out);
      return rep.exit_code();
    }
    Report rep;
    if (invariants->parsed()) {
      rep = cmd_invariants(read_json_arg(form_arg), omega, cfg);
    } else if (verify->parsed()) {
      rep = run_suite(suite, cfg);
    } else if (example == "torus") {
      Rational t;
      try {
        t = parse_rational(t_arg);
      } catch (const std::exception&) {
        throw UsageError("--t must be a rational such as 1/4");
      }
      rep = example_torus({t}, cfg);
    } else if (example == "lambda2") {
      rep = example_lambda2({c_arg, parse_metric(g_arg), t_lo}, cfg);
    } else {
      rep = example_k3patch({f_arg}, cfg);
    }
    rep.config = cfg.to_json();
    emit(rep.to_json(), out_path, out);
    return rep.exit_code();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SchemaError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Indeterminate& e) {
    err << "indeterminate: " << e.what() << "\n";
    return kExitIndeterminate;
  } catch (const std::domain_error& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

}  // namespace threeform::cli
