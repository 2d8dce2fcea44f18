// Command-line front end: certification, optimization, constructions,
// region sampling, tradeoff curves, and randomized audits over mechanism
// files. Exit codes: 0 ok, 1 usage or parse error, 2 property violation or
// infeasible instance, 3 size limit exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "limech/limech.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolation = 2;
constexpr int kExitSizeLimit = 3;

int exit_code_for(limech::errc code) {
  switch (code) {
    case limech::errc::size_limit_exceeded:
      return kExitSizeLimit;
    case limech::errc::infeasible:
    case limech::errc::unbounded:
      return kExitViolation;
    default:
      return kExitUsage;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) limech::fail(limech::errc::parse_error, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) limech::fail(limech::errc::parse_error, "cannot write '" + path + "'");
  out << text;
}

void emit(const std::optional<std::string>& path, const std::string& text) {
  if (path)
    write_file(*path, text);
  else
    std::cout << text;
}

struct CheckOptions {
  std::string input;
  double epsilon = 0.0;
  std::optional<double> delta;
  std::optional<double> iota;
  double tie_tol = limech::kTieTolerance;
  std::optional<std::string> output;
};

int run_check(const CheckOptions& opt) {
  const auto mech = limech::io::parse_mechanism(read_file(opt.input));
  const auto report = std::visit(
      [&](const auto& m) { return limech::certify::certify(m, opt.epsilon, opt.tie_tol); }, mech);
  emit(opt.output, limech::io::to_text(limech::io::certificate_to_json(report)));
  bool ok = true;
  if (opt.delta && report.delta > *opt.delta) ok = false;
  if (opt.iota && report.influence > *opt.iota) ok = false;
  return ok ? kExitOk : kExitViolation;
}

struct OptimizeOptions {
  std::string example;
  double epsilon = 0.0;
  double delta = 0.0;
  bool lex_influence = false;
  std::optional<std::string> output;
};

int run_optimize(const OptimizeOptions& opt) {
  namespace opt_ns = limech::optimize;
  limech::io::json mech_json;
  limech::io::json cert_json;
  if (opt.example == "independent") {
    const auto sol = opt_ns::solve_lp(opt_ns::example_independent_lp(opt.epsilon, opt.delta));
    if (sol.status != opt_ns::LpStatus::optimal)
      limech::fail(limech::errc::infeasible, "independent example instance is infeasible");
    const auto mech = opt_ns::balanced_binary_mechanism(limech::io::output_rounded(sol.x[0]));
    mech_json = limech::io::mechanism_to_json(mech);
    cert_json = limech::io::certificate_to_json(limech::certify::certify(mech, opt.epsilon));
  } else {
    const auto mech = opt_ns::optimize_joint(
        limech::NeighborhoodGraph::path(2), limech::OutputAlphabet::numbered(2),
        opt_ns::example_joint_spec(opt.epsilon, opt.delta, opt.lex_influence));
    mech_json = limech::io::mechanism_to_json(mech);
    cert_json = limech::io::certificate_to_json(limech::certify::certify(mech, opt.epsilon));
  }
  if (opt.output) {
    write_file(*opt.output, limech::io::to_text(mech_json));
    std::cout << limech::io::to_text(cert_json);
  } else {
    limech::io::json combined;
    combined["mechanism"] = mech_json;
    combined["certificate"] = cert_json;
    std::cout << limech::io::to_text(combined);
  }
  return kExitOk;
}

struct ConstructOptions {
  std::string kind;
  double alpha = 0.1;
  int datasets = 2;
  int values = 2;
  std::optional<std::string> output;
};

int run_construct(const ConstructOptions& opt) {
  const auto graph = limech::NeighborhoodGraph::path(opt.datasets);
  const auto alphabet = limech::OutputAlphabet::numbered(opt.values);
  limech::io::json mech_json;
  if (opt.kind == "tight-half") {
    mech_json = limech::io::mechanism_to_json(limech::construct::tight_half_mechanism(graph, alphabet));
  } else {
    mech_json = limech::io::mechanism_to_json(
        limech::construct::low_influence_nontrivial(graph, alphabet, opt.alpha));
  }
  emit(opt.output, limech::io::to_text(mech_json));
  return kExitOk;
}

struct RegionsOptions {
  std::string kind;
  double epsilon = 0.0;
  double delta = 0.0;
  double iota = 0.0;
  double step = 0.1;
  std::string outdir = ".";
  std::optional<std::string> output;
};

int run_regions(const RegionsOptions& opt) {
  const auto points = opt.kind == "independent"
                          ? limech::construct::region_independent_binary(opt.epsilon, opt.delta,
                                                                         opt.iota, opt.step)
                          : limech::construct::region_joint_binary(opt.epsilon, opt.delta, opt.iota,
                                                                   opt.step);
  const std::string path =
      opt.output ? *opt.output
                 : opt.outdir + "/" +
                       limech::io::region_filename(opt.kind, opt.epsilon, opt.delta, opt.iota);
  write_file(path, limech::io::region_csv(points));
  std::cout << path << "\n";
  return kExitOk;
}

struct TradeoffOptions {
  double from = 0.51;
  double to = 0.99;
  int points = 49;
  std::optional<std::string> output;
};

int run_tradeoff(const TradeoffOptions& opt) {
  const auto grid = limech::optimize::utility_grid(opt.from, opt.to, opt.points);
  const auto rows = limech::optimize::tradeoff_curve(grid);
  emit(opt.output, limech::io::tradeoff_csv(rows));
  return kExitOk;
}

struct AuditOptions {
  int trials = 1000;
  std::uint64_t seed = 0;
  std::optional<std::string> output;
};

int run_audit(const AuditOptions& opt) {
  const auto report = limech::oracle::audit_theorems(opt.trials, opt.seed);
  emit(opt.output, limech::io::to_text(limech::io::audit_to_json(report)));
  return limech::oracle::audit_passed(report) ? kExitOk : kExitViolation;
}

int run(int argc, char** argv) {
  CLI::App app{"Certify, optimize, and stress-test finite randomized mechanisms"};
  app.require_subcommand(1);

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Certify a mechanism file and test requested properties");
  check_cmd->add_option("file", check.input, "mechanism JSON file")->required();
  check_cmd->add_option("--epsilon", check.epsilon, "privacy parameter epsilon")->required();
  check_cmd->add_option("--delta", check.delta, "require (epsilon, delta)-DP");
  check_cmd->add_option("--iota", check.iota, "require iota-low-influence");
  check_cmd->add_option("--tie-tol", check.tie_tol, "argmax tie tolerance");
  check_cmd->add_option("-o,--output", check.output, "write the certificate JSON here");

  OptimizeOptions optimize;
  auto* optimize_cmd = app.add_subcommand("optimize", "Solve the balanced binary example instances");
  optimize_cmd->add_option("--example", optimize.example, "instance class")
      ->required()
      ->check(CLI::IsMember({"independent", "joint"}));
  optimize_cmd->add_option("--epsilon", optimize.epsilon, "privacy parameter epsilon")->required();
  optimize_cmd->add_option("--delta", optimize.delta, "privacy parameter delta")->required();
  optimize_cmd->add_flag("--lex-influence", optimize.lex_influence,
                         "re-minimize total influence at the optimal utility");
  optimize_cmd->add_option("-o,--output", optimize.output, "write the mechanism JSON here");

  ConstructOptions construct;
  auto* construct_cmd = app.add_subcommand("construct", "Emit one of the explicit mechanisms");
  construct_cmd->add_option("kind", construct.kind, "construction")
      ->required()
      ->check(CLI::IsMember({"tight-half", "low-influence"}));
  construct_cmd->add_option("--alpha", construct.alpha, "influence level for low-influence");
  construct_cmd->add_option("--datasets", construct.datasets, "path graph size (default 2)");
  construct_cmd->add_option("--values", construct.values, "alphabet size (default 2)");
  construct_cmd->add_option("-o,--output", construct.output, "write the mechanism JSON here");

  RegionsOptions regions;
  auto* regions_cmd = app.add_subcommand("regions", "Sample a feasibility region to CSV");
  regions_cmd->add_option("kind", regions.kind, "mechanism class")
      ->required()
      ->check(CLI::IsMember({"independent", "joint"}));
  regions_cmd->add_option("--epsilon", regions.epsilon, "privacy parameter epsilon")->required();
  regions_cmd->add_option("--delta", regions.delta, "privacy parameter delta")->required();
  regions_cmd->add_option("--iota", regions.iota, "influence parameter")->required();
  regions_cmd->add_option("--step", regions.step, "grid step, must divide 0.5")->required();
  regions_cmd->add_option("--outdir", regions.outdir, "directory for the generated CSV");
  regions_cmd->add_option("-o,--output", regions.output, "explicit output path");

  TradeoffOptions tradeoff;
  auto* tradeoff_cmd = app.add_subcommand("tradeoff", "Emit the privacy-utility-influence curve CSV");
  tradeoff_cmd->add_option("--from", tradeoff.from, "first utility value")->required();
  tradeoff_cmd->add_option("--to", tradeoff.to, "last utility value")->required();
  tradeoff_cmd->add_option("--points", tradeoff.points, "number of grid points")->required();
  tradeoff_cmd->add_option("-o,--output", tradeoff.output, "write the CSV here");

  AuditOptions audit;
  auto* audit_cmd = app.add_subcommand("audit", "Run the randomized theorem audit");
  audit_cmd->add_option("--trials", audit.trials, "trials per suite");
  audit_cmd->add_option("--seed", audit.seed, "base seed (required: no ambient entropy)")->required();
  audit_cmd->add_option("-o,--output", audit.output, "write the report JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (check_cmd->parsed()) return run_check(check);
    if (optimize_cmd->parsed()) return run_optimize(optimize);
    if (construct_cmd->parsed()) return run_construct(construct);
    if (regions_cmd->parsed()) return run_regions(regions);
    if (tradeoff_cmd->parsed()) return run_tradeoff(tradeoff);
    if (audit_cmd->parsed()) return run_audit(audit);
  } catch (const limech::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
