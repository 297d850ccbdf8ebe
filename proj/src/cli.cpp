#include "masscut/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "masscut/bounds.hpp"
#include "masscut/errors.hpp"
#include "masscut/instances.hpp"
#include "masscut/reductions.hpp"
#include "masscut/verifier.hpp"

namespace masscut::cli {
namespace {

struct GenArgs {
  std::string kind;
  std::size_t d = 2, n = 100, m = 1;
  std::uint64_t seed = 0;
  std::string output;
};

struct SolveArgs {
  std::string instance;
  std::size_t h = 1;
  std::string strategy = "auto";
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::optional<double> boundary_budget;
  std::size_t restarts = 16;
  std::size_t max_evals = 2000;
  std::string eps_schedule;
  std::size_t ball_n = 4096;
  std::size_t threads = 0;
  std::string output;
  bool trace = false;
};

struct VerifyArgs {
  std::string instance, cuts;
  double tol = 0.0;
  std::optional<double> boundary_budget;
};

struct BoundsArgs {
  std::uint64_t h = 1, m = 1, cap_factor = 2;
  bool show_chain = false;
};

struct TableArgs {
  std::uint64_t h_max = 1, m_max = 1;
  std::string format = "text";
  std::string output;
};

double default_budget(double tol) { return tol == 0.0 ? 0.0 : 1e-3; }

std::vector<double> parse_csv_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("--eps-schedule: '" + item + "' is not a number");
    }
    if (used != item.size()) throw InvalidArgument("--eps-schedule: '" + item + "' is not a number");
    out.push_back(v);
  }
  return out;
}

void print_report(std::ostream& out, const VerificationReport& r) {
  out << std::setprecision(10);
  for (std::size_t j = 0; j < r.per_mass_imbalance.size(); ++j) {
    out << "mass " << j << " imbalance " << r.per_mass_imbalance[j] << '\n';
  }
  out << "max_imbalance " << r.max_imbalance << '\n'
      << "boundary_fraction " << r.boundary_fraction << '\n'
      << "tol " << r.tol << " boundary_budget " << r.boundary_budget << '\n'
      << "pass " << (r.pass ? "yes" : "no") << '\n';
}

int do_gen(const GenArgs& a, std::ostream& out) {
  InstanceFile inst;
  inst.dim = a.d;
  if (a.kind == "gaussian") {
    inst.masses = gen_gaussian(a.d, a.n, a.m, a.seed);
  } else if (a.kind == "symmetric") {
    if (a.d != 2) throw InvalidArgument("gen --kind symmetric requires --d 2");
    if (a.m != 1) throw InvalidArgument("gen --kind symmetric produces a single mass (--m 1)");
    inst.masses.push_back(gen_symmetric(a.n, a.seed));
  } else {
    inst.masses = gen_grid(a.d, a.n, a.m);
  }
  inst.metadata = {{"generator", a.kind}, {"seed", a.seed},
                   {"parameters", {{"d", a.d}, {"n", a.n}, {"m", a.m}}}};
  write_instance(a.output, inst);
  out << "wrote " << inst.masses.size() << " mass(es) to " << a.output << '\n';
  return kSuccess;
}

int do_solve(const SolveArgs& a, std::ostream& out) {
  const InstanceFile inst = read_instance(a.instance);
  const auto kind = parse_strategy(a.strategy);
  if (!kind) throw InvalidArgument("unknown strategy " + a.strategy);

  SolverConfig config;
  config.seed = a.seed;
  config.restarts = a.restarts;
  config.max_evals = a.max_evals;
  config.tol = a.tol;
  config.boundary_budget = a.boundary_budget.value_or(default_budget(a.tol));
  config.threads = a.threads;
  config.validate();

  Lemma2Options lemma2;
  lemma2.ball_n = a.ball_n;
  if (!a.eps_schedule.empty()) lemma2.schedule.values = parse_csv_doubles(a.eps_schedule);
  lemma2.schedule.validate();

  const Solution sol = solve(inst.masses, a.h, *kind, config, lemma2);
  if (sol.arrangement) write_cuts(a.output, *sol.arrangement);

  out << "strategy " << a.strategy << " h " << a.h << " d " << inst.dim << " m "
      << inst.masses.size() << '\n';
  print_report(out, sol.report);
  out << "converged " << (sol.converged ? "yes" : "no") << '\n';
  if (sol.arrangement) {
    out << "cuts written to " << a.output << '\n';
  } else {
    out << "no arrangement produced\n";
  }
  if (a.trace) out << trace_to_json(sol.trace).dump(2) << '\n';
  return sol.converged ? kSuccess : kFailed;
}

int do_verify(const VerifyArgs& a, std::ostream& out) {
  const InstanceFile inst = read_instance(a.instance);
  const Arrangement cuts = read_cuts(a.cuts);
  if (cuts.dim() != inst.dim) {
    throw DimensionMismatch("cuts are in dimension " + std::to_string(cuts.dim()) +
                            " but the instance is in dimension " + std::to_string(inst.dim));
  }
  const auto report =
      verify(inst.masses, cuts, Tolerances{a.tol, a.boundary_budget.value_or(default_budget(a.tol))});
  print_report(out, report);
  return report.pass ? kSuccess : kFailed;
}

int do_bounds(const BoundsArgs& a, std::ostream& out, std::ostream& err) {
  try {
    const auto cert = bounds::best_upper_bound(a.h, a.m, {a.cap_factor});
    out << cert.value << '\n';
    if (a.show_chain) out << bounds::render_chain(cert) << '\n';
    return kSuccess;
  } catch (const NoBoundAvailable& e) {
    err << e.what() << '\n';
    return kFailed;
  }
}

int do_table(const TableArgs& a, std::ostream& out) {
  const auto grid = bounds::table(a.h_max, a.m_max);
  const std::string text = a.format == "csv" ? bounds::table_csv(grid) : bounds::table_text(grid);
  std::ofstream file(a.output, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("cannot write " + a.output);
  file << text;
  out << "wrote " << a.h_max << "x" << a.m_max << " table to " << a.output << '\n';
  return kSuccess;
}

}  // namespace

nlohmann::json trace_to_json(const std::vector<TraceStep>& trace) {
  auto arr = nlohmann::json::array();
  for (const auto& s : trace) {
    arr.push_back({{"depth", s.depth},
                   {"strategy", s.strategy},
                   {"dim", s.dim},
                   {"h", s.h},
                   {"m", s.m},
                   {"parameter", s.parameter},
                   {"values", s.values},
                   {"metrics", s.metrics},
                   {"note", s.note}});
  }
  return arr;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equipartition masses by hyperplanes and bound Delta(h, m)", "masscut"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate an instance file");
  g->set_help_flag("--help", "Print this help message and exit");
  g->add_option("--kind", gen.kind, "gaussian, symmetric or grid")
      ->required()
      ->check(CLI::IsMember({"gaussian", "symmetric", "grid"}));
  g->add_option("--d", gen.d, "Dimension")->check(CLI::PositiveNumber);
  g->add_option("--n", gen.n, "Points per mass (grid: side length)")->check(CLI::PositiveNumber);
  g->add_option("--m", gen.m, "Number of masses")->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "Random seed");
  g->add_option("-o,--output", gen.output, "Instance file to write")->required();

  SolveArgs solve_args;
  auto* s = app.add_subcommand("solve", "Find an equipartitioning arrangement");
  s->set_help_flag("--help", "Print this help message and exit");
  s->add_option("--instance", solve_args.instance, "Instance file")->required();
  s->add_option("--h", solve_args.h, "Number of hyperplanes")->required()->check(CLI::PositiveNumber);
  s->add_option("--strategy", solve_args.strategy, "direct, lemma1, lemma2 or auto")
      ->check(CLI::IsMember({"direct", "lemma1", "lemma2", "auto"}));
  s->add_option("--seed", solve_args.seed, "Random seed");
  s->add_option("--tol", solve_args.tol, "Imbalance tolerance")->check(CLI::NonNegativeNumber);
  s->add_option("--boundary-budget", solve_args.boundary_budget, "Boundary weight budget")
      ->check(CLI::NonNegativeNumber);
  s->add_option("--restarts", solve_args.restarts, "Independent starts")->check(CLI::PositiveNumber);
  s->add_option("--max-evals", solve_args.max_evals, "Evaluations per start and stage")
      ->check(CLI::PositiveNumber);
  s->add_option("--eps-schedule", solve_args.eps_schedule, "Comma-separated thicknesses (lemma2)");
  s->add_option("--ball-n", solve_args.ball_n, "Ball sample size (lemma2)")->check(CLI::PositiveNumber);
  s->add_option("--threads", solve_args.threads, "Worker threads (0: MASSCUT_THREADS or all cores)");
  s->add_option("-o,--output", solve_args.output, "Cuts file to write")->required();
  s->add_flag("--trace", solve_args.trace, "Print the strategy trace as JSON");

  VerifyArgs verify_args;
  auto* v = app.add_subcommand("verify", "Check an arrangement against an instance");
  v->set_help_flag("--help", "Print this help message and exit");
  v->add_option("--instance", verify_args.instance, "Instance file")->required();
  v->add_option("--cuts", verify_args.cuts, "Cuts file")->required();
  v->add_option("--tol", verify_args.tol, "Imbalance tolerance")->check(CLI::NonNegativeNumber);
  v->add_option("--boundary-budget", verify_args.boundary_budget, "Boundary weight budget")
      ->check(CLI::NonNegativeNumber);

  BoundsArgs bounds_args;
  auto* b = app.add_subcommand("bounds", "Best known upper bound for Delta(h, m)");
  b->set_help_flag("--help", "Print this help message and exit");
  b->add_option("--h", bounds_args.h, "Number of hyperplanes")->required()->check(CLI::PositiveNumber);
  b->add_option("--m", bounds_args.m, "Number of masses")->required()->check(CLI::PositiveNumber);
  b->add_flag("--show-chain", bounds_args.show_chain, "Print the derivation");
  b->add_option("--cap-factor", bounds_args.cap_factor, "Search cap factor")->check(CLI::PositiveNumber);

  TableArgs table_args;
  auto* t = app.add_subcommand("table", "Bound table for h <= H, m <= M");
  t->set_help_flag("--help", "Print this help message and exit");
  t->add_option("--h-max", table_args.h_max, "Largest h")->required()->check(CLI::PositiveNumber);
  t->add_option("--m-max", table_args.m_max, "Largest m")->required()->check(CLI::PositiveNumber);
  t->add_option("--format", table_args.format, "csv or text")->check(CLI::IsMember({"csv", "text"}));
  t->add_option("-o,--output", table_args.output, "Output file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (g->parsed()) return do_gen(gen, out);
    if (s->parsed()) return do_solve(solve_args, out);
    if (v->parsed()) return do_verify(verify_args, out);
    if (b->parsed()) return do_bounds(bounds_args, out, err);
    if (t->parsed()) return do_table(table_args, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace masscut::cli
