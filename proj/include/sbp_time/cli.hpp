#pragma once

// Command-line front end. `run` parses arguments with CLI11 and dispatches to
// one of the cmd_* functions; everything writes to caller-supplied streams so
// the commands can be exercised in-process.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sbp_time/butcher.hpp"
#include "sbp_time/errors.hpp"
#include "sbp_time/fd_operators.hpp"
#include "sbp_time/ode_solver.hpp"
#include "sbp_time/order_conditions.hpp"
#include "sbp_time/projection.hpp"
#include "sbp_time/quadrature.hpp"
#include "sbp_time/sbp_operator.hpp"
#include "sbp_time/serialization.hpp"

namespace sbp_time::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kConstructionFailure = 3, kSolveFailure = 4 };

enum class Command { Tableau, Stability, Order, Solve, Converge };

struct CliConfig {
  Command command = Command::Tableau;
  std::string family = "lobatto";  // lobatto, gauss, radau-left, radau-right, fd
  std::optional<int> stages;
  std::optional<int> nodes;
  std::optional<int> interior_order;
  std::string operator_file;  // JSON operator, replaces --family
  double T = 1.0;
  std::string scheme = "projection";  // projection, projection-dual, sat, reference:<name>
  std::string problem = "nonstiff";
  double lambda = 1000.0;
  int blocks = 1;
  std::vector<int> resolutions;
  std::string sweep = "nodes";
  bool newton = false;
  std::string output;
  std::string format;  // empty picks the command default
};

/// Bad flag combinations; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void check(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

inline bool is_reference_scheme(const CliConfig& cfg) { return cfg.scheme.rfind("reference:", 0) == 0; }

inline void check_config(const CliConfig& cfg) {
  static const std::vector<std::string> families{"lobatto", "gauss", "radau-left", "radau-right", "fd"};
  check(std::find(families.begin(), families.end(), cfg.family) != families.end(), "unknown family " + cfg.family);
  check(cfg.scheme == "projection" || cfg.scheme == "projection-dual" || cfg.scheme == "sat" ||
            is_reference_scheme(cfg),
        "unknown scheme " + cfg.scheme);
  check(cfg.problem == "nonstiff" || cfg.problem == "stiff", "unknown problem " + cfg.problem);
  check(cfg.sweep == "nodes" || cfg.sweep == "blocks", "sweep must be nodes or blocks");
  check(cfg.format.empty() || cfg.format == "json" || cfg.format == "csv" || cfg.format == "text",
        "format must be json, csv or text");
  check(cfg.T > 0.0, "--T must be positive");
  check(cfg.blocks >= 1, "--blocks must be at least 1");
  for (int r : cfg.resolutions) check(r >= 1, "resolutions must be positive");

  if (is_reference_scheme(cfg) || !cfg.operator_file.empty()) return;
  const bool sweeping_nodes = cfg.command == Command::Converge && cfg.sweep == "nodes";
  if (cfg.family == "fd") {
    check(cfg.interior_order.has_value(), "fd family needs --interior-order");
    check(!cfg.stages.has_value(), "--stages does not apply to the fd family; use --nodes");
    check(sweeping_nodes || cfg.nodes.has_value(), "fd family needs --nodes");
  } else {
    check(!cfg.interior_order.has_value(), "--interior-order only applies to the fd family");
    check(!cfg.nodes.has_value(), "--nodes only applies to the fd family; use --stages");
    check(sweeping_nodes || cfg.stages.has_value(), cfg.family + " family needs --stages");
  }
}

// Construction ---------------------------------------------------------------

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  check(static_cast<bool>(in), "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// Operator for `cfg`, with the node or stage count overridden by `size` when given.
inline SbpOperator build_operator(const CliConfig& cfg, std::optional<int> size = std::nullopt) {
  if (!cfg.operator_file.empty()) return io::operator_from_json(read_file(cfg.operator_file));
  if (cfg.family == "fd") return fd_operator(*cfg.interior_order, size.value_or(cfg.nodes.value_or(0)), cfg.T);
  QuadratureKind kind = QuadratureKind::Lobatto;
  if (cfg.family == "gauss") kind = QuadratureKind::Gauss;
  if (cfg.family == "radau-left") kind = QuadratureKind::RadauLeft;
  if (cfg.family == "radau-right") kind = QuadratureKind::RadauRight;
  return collocation_operator(build_rule(kind, size.value_or(cfg.stages.value_or(0)), cfg.T));
}

inline ButcherTableau build_tableau(const CliConfig& cfg, std::optional<int> size = std::nullopt) {
  if (is_reference_scheme(cfg)) {
    try {
      return reference_tableau(cfg.scheme.substr(std::string("reference:").size()));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::UnknownName) throw ConfigError(e.what());
      throw;
    }
  }
  const SbpOperator op = build_operator(cfg, size);
  if (cfg.scheme == "sat") return sat_tableau(op);
  if (cfg.scheme == "projection-dual") return dual_projection_tableau(op);
  return projection_tableau(op);
}

inline OdeProblem build_problem(const CliConfig& cfg) {
  return cfg.problem == "stiff" ? stiff_problem(cfg.lambda) : nonstiff_problem();
}

inline MarchOptions march_options(const CliConfig& cfg) {
  MarchOptions options;
  options.use_linear_path = !cfg.newton;
  return options;
}

// Commands -------------------------------------------------------------------

inline int cmd_tableau(const CliConfig& cfg, std::ostream& out) {
  const auto tab = build_tableau(cfg);
  const std::string format = cfg.format.empty() ? "json" : cfg.format;
  if (format == "csv") {
    out << io::tableau_to_csv(tab);
  } else if (format == "text") {
    out << io::tableau_to_text(tab);
  } else {
    out << io::tableau_to_json(tab);
  }
  return kOk;
}

inline int cmd_stability(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto tab = build_tableau(cfg);
  const auto report = stability_report(tab);
  const std::string format = cfg.format.empty() ? "csv" : cfg.format;
  if (format == "json") {
    out << io::stability_summary_json(report, tab.provenance);
  } else if (format == "text") {
    out << io::stability_summary_text(report);
  } else {
    out << io::stability_samples_csv(report);
    err << io::stability_summary_text(report);
  }
  return kOk;
}

inline int cmd_order(const CliConfig& cfg, std::ostream& out) {
  const auto tab = build_tableau(cfg);
  const auto report = order_report(tab);
  const std::string format = cfg.format.empty() ? "json" : cfg.format;
  check(format != "csv", "order reports are available as json or text");
  out << (format == "text" ? io::order_report_text(report) : io::order_report_json(report, tab.provenance));
  return kOk;
}

inline int cmd_solve(const CliConfig& cfg, std::ostream& out) {
  const auto tab = build_tableau(cfg);
  const auto prob = build_problem(cfg);
  const auto values = march(tab, prob, cfg.blocks, march_options(cfg));
  const double h = prob.t_end / cfg.blocks;
  const std::string format = cfg.format.empty() ? "csv" : cfg.format;
  if (format == "json") {
    out << "{\n  \"provenance\": " << io::json_string(tab.provenance) << ",\n  \"problem\": \"" << prob.name
        << "\",\n  \"blocks\": " << cfg.blocks << ",\n  \"t\": [";
    for (std::size_t k = 0; k < values.size(); ++k) out << (k ? ", " : "") << io::format_double(k * h);
    out << "],\n  \"u\": [";
    for (std::size_t k = 0; k < values.size(); ++k) out << (k ? ", " : "") << io::format_double(values[k](0));
    out << "],\n  \"final_error\": " << io::format_double(std::abs(values.back()(0) - prob.exact(prob.t_end)(0)))
        << "\n}\n";
    return kOk;
  }
  out << "t,u,exact,error\n";
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double t = k * h;
    const double exact = prob.exact(t)(0);
    out << io::format_double(t) << "," << io::format_double(values[k](0)) << "," << io::format_double(exact) << ","
        << io::format_double(std::abs(values[k](0) - exact)) << "\n";
  }
  return kOk;
}

inline int cmd_converge(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  check(!cfg.resolutions.empty(), "converge needs --resolutions");
  const auto prob = build_problem(cfg);
  ConvergenceReport report;
  if (cfg.sweep == "blocks" || is_reference_scheme(cfg) || !cfg.operator_file.empty()) {
    check(cfg.sweep == "blocks", "node sweeps need a constructed operator family");
    report = convergence_by_blocks(build_tableau(cfg), prob, cfg.resolutions, march_options(cfg));
  } else {
    report = convergence_by_nodes([&](int n) { return build_tableau(cfg, n); }, prob, cfg.resolutions, cfg.blocks,
                                  march_options(cfg));
  }
  const std::string format = cfg.format.empty() ? "csv" : cfg.format;
  if (format == "json") {
    out << "{\n  \"label\": " << io::json_string(report.label) << ",\n  \"sweep\": \"" << report.resolution_kind
        << "\",\n  \"resolutions\": [";
    for (std::size_t k = 0; k < report.resolutions.size(); ++k) out << (k ? ", " : "") << report.resolutions[k];
    out << "],\n  \"errors\": [";
    for (std::size_t k = 0; k < report.errors.size(); ++k) out << (k ? ", " : "") << io::format_double(report.errors[k]);
    out << "],\n  \"eoc\": [";
    for (std::size_t k = 0; k < report.eoc.size(); ++k) out << (k ? ", " : "") << io::format_double(report.eoc[k]);
    out << "],\n  \"fitted_slope\": " << io::format_double(report.fitted_slope) << "\n}\n";
  } else {
    out << io::convergence_csv(report);
  }
  err << report.label << ": fitted slope " << io::format_double(report.fitted_slope) << "\n";
  return kOk;
}

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::TooFewNodes:
    case ErrorKind::UnknownName:
    case ErrorKind::ParseError:
      return kConfigError;
    case ErrorKind::NewtonDiverged:
    case ErrorKind::SingularStageSystem:
      return kSolveFailure;
    default:
      return kConstructionFailure;
  }
}

inline int dispatch(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  switch (cfg.command) {
    case Command::Tableau: return cmd_tableau(cfg, out);
    case Command::Stability: return cmd_stability(cfg, out, err);
    case Command::Order: return cmd_order(cfg, out);
    case Command::Solve: return cmd_solve(cfg, out);
    case Command::Converge: return cmd_converge(cfg, out, err);
  }
  return kConfigError;
}

/// Runs a validated config, sending the result to --output or `out`.
inline int execute(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    check_config(cfg);
    std::ostringstream buffer;
    const int code = dispatch(cfg, buffer, err);
    if (cfg.output.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(cfg.output, std::ios::binary);
      check(static_cast<bool>(file), "cannot write " + cfg.output);
      file << buffer.str();
    }
    return code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
}

inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"SBP time integration: tableaux, stability, order and convergence", "sbp_time_cli"};
  app.require_subcommand(1);
  CliConfig cfg;

  std::optional<int> stages, nodes, interior_order;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--family", cfg.family, "lobatto, gauss, radau-left, radau-right or fd");
    sub->add_option("--stages", stages, "number of collocation nodes");
    sub->add_option("--nodes", nodes, "number of finite difference nodes");
    sub->add_option("--interior-order", interior_order, "finite difference interior order (2, 4, 6, 8)");
    sub->add_option("--operator", cfg.operator_file, "read the operator from a JSON file");
    sub->add_option("--T", cfg.T, "interval length of the operator");
    sub->add_option("--scheme", cfg.scheme, "projection, projection-dual, sat or reference:<name>");
    sub->add_option("--output,-o", cfg.output, "write the result to a file");
    sub->add_option("--format", cfg.format, "json, csv or text");
  };
  auto add_problem = [&](CLI::App* sub) {
    sub->add_option("--problem", cfg.problem, "nonstiff or stiff");
    sub->add_option("--lambda", cfg.lambda, "stiffness of the stiff problem");
    sub->add_option("--blocks", cfg.blocks, "number of time blocks");
    sub->add_flag("--newton", cfg.newton, "use Newton iteration even for linear problems");
  };

  auto* tableau = app.add_subcommand("tableau", "print a Butcher tableau");
  auto* stability = app.add_subcommand("stability", "sample the stability function");
  auto* order = app.add_subcommand("order", "check order conditions");
  auto* solve = app.add_subcommand("solve", "integrate a test problem");
  auto* converge = app.add_subcommand("converge", "run a convergence study");
  for (auto* sub : {tableau, stability, order, solve, converge}) add_common(sub);
  add_problem(solve);
  add_problem(converge);
  converge->add_option("--resolutions", cfg.resolutions, "node or block counts")->delimiter(',');
  converge->add_option("--sweep", cfg.sweep, "nodes or blocks");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  cfg.stages = stages;
  cfg.nodes = nodes;
  cfg.interior_order = interior_order;
  if (*stability) cfg.command = Command::Stability;
  if (*order) cfg.command = Command::Order;
  if (*solve) cfg.command = Command::Solve;
  if (*converge) cfg.command = Command::Converge;
  return execute(cfg, out, err);
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace sbp_time::cli
