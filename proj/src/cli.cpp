#include "ambtalk/cli.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ambtalk/analysis.hpp"
#include "ambtalk/config.hpp"
#include "ambtalk/errors.hpp"
#include "ambtalk/reproduce.hpp"

namespace ambtalk {

namespace {

// No equilibrium with the requested number of intervals.
class NoEquilibrium : public std::runtime_error {
 public:
  NoEquilibrium(const std::string& message, int largest) : std::runtime_error(message), largest(largest) {}
  int largest;
};

struct Invocation {
  std::string command;
  std::string config_path;
  std::string out_path;
  std::string csv_path;
  std::vector<std::string> overrides;
};

std::string num(double x) { return fmt::format("{:.12g}", x); }

std::string join(const std::vector<double>& xs, std::string_view sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += num(xs[i]);
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError(fmt::format("cannot open '{}' for writing", path));
  file << text;
  if (!file.flush()) throw ConfigError(fmt::format("failed writing '{}'", path));
}

RunConfig load(const Invocation& inv) {
  std::string text;
  std::string source = "<none>";
  if (!inv.config_path.empty()) {
    std::ifstream file(inv.config_path, std::ios::binary);
    if (!file) throw ConfigError(fmt::format("cannot read config '{}'", inv.config_path));
    text.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
    source = inv.config_path;
  }
  return parse_config(text, source, inv.overrides);
}

const Density& require_density(const RunConfig& cfg) {
  if (!cfg.density) throw ConfigError(fmt::format("{}: density: required", cfg.origin_of("density")));
  return *cfg.density;
}

AmbiguityLevel require_beta(const RunConfig& cfg) {
  if (!cfg.beta) throw ConfigError(fmt::format("{}: beta: required", cfg.origin_of("beta")));
  return *cfg.beta;
}

double require_finite_beta(const RunConfig& cfg) {
  const AmbiguityLevel level = require_beta(cfg);
  if (level.mode() != AmbiguityLevel::Mode::finite) {
    throw ConfigError(fmt::format("{}: beta: this command needs 0 < beta < infinity", cfg.origin_of("beta")));
  }
  return level.beta();
}

double require_d(const RunConfig& cfg) {
  if (!cfg.d) throw ConfigError(fmt::format("{}: d: required", cfg.origin_of("d")));
  return *cfg.d;
}

Interval action_interval(const RunConfig& cfg) {
  const Interval& s = require_density(cfg).support();
  const double lo = cfg.lo.value_or(s.lo());
  const double hi = cfg.hi.value_or(s.hi());
  if (!(lo < hi)) throw ConfigError(fmt::format("{}: hi: interval must satisfy lo < hi", cfg.origin_of("hi")));
  return Interval(lo, hi);
}

void require_unit_support(const RunConfig& cfg) {
  const Interval& s = require_density(cfg).support();
  if (s.lo() != 0.0 || s.hi() != 1.0) {
    throw ConfigError(fmt::format("{}: density: partition commands need support [0, 1]", cfg.origin_of("density")));
  }
}

PartitionOptions partition_options(const RunConfig& cfg) {
  PartitionOptions opts;
  opts.receiver.quad = cfg.quad;
  return opts;
}

// Header lines echoing every resolved setting.
void echo_config(std::ostream& os, const Invocation& inv, const RunConfig& cfg) {
  fmt::print(os, "# ambtalk {}\n", inv.command);
  fmt::print(os, "# config: {}\n", inv.config_path.empty() ? "<none>" : inv.config_path);
  for (const auto& [key, entry] : cfg.entries) {
    fmt::print(os, "#   {} = {}  [{}]\n", key, entry.value, entry.origin);
  }
  if (cfg.density) fmt::print(os, "#   resolved density: {}\n", cfg.density->description());
  if (cfg.prior) fmt::print(os, "#   resolved prior: {}\n", cfg.prior->description());
  fmt::print(os, "#   resolved quad: nodes {}, refine {}, max_subintervals {}, abs_tol {}, rel_tol {}\n",
             cfg.quad.nodes_per_segment, cfg.quad.refinement_limit, cfg.quad.max_subintervals, num(cfg.quad.abs_tol), num(cfg.quad.rel_tol));
}

std::string worst_case_csv(const ReceiverSolution& sol, int samples) {
  std::string csv;
  if (const auto* lottery = std::get_if<EndpointLottery>(&sol.worst_case)) {
    csv = "theta,mass\n";
    csv += fmt::format("{},{}\n{},{}\n", num(lottery->lo), num(lottery->p_lo), num(lottery->hi), num(lottery->p_hi));
    return csv;
  }
  const Density& f = std::get<Density>(sol.worst_case);
  const Interval& iv = sol.interval;
  csv = "theta,density\n";
  for (int k = 0; k < samples; ++k) {
    const double t = k + 1 == samples ? iv.hi() : iv.lo() + iv.width() * k / (samples - 1);
    csv += fmt::format("{},{}\n", num(t), num(f(t)));
  }
  return csv;
}

int cmd_action(const Invocation& inv, const RunConfig& cfg, std::ostream& os) {
  const Density& g = require_density(cfg);
  const AmbiguityLevel level = require_beta(cfg);
  const Interval iv = action_interval(cfg);
  const ReceiverOptions opts = partition_options(cfg).receiver;
  const Density g_m = iv == g.support() ? g : restrict(g, iv, cfg.quad);
  const ReceiverSolution sol = solve_action(g_m, iv, level, opts);

  echo_config(os, inv, cfg);
  fmt::print(os, "interval      {}\n", iv.to_string());
  fmt::print(os, "beta          {}\n", level.to_string());
  fmt::print(os, "regime        {}\n", to_string(sol.regime));
  fmt::print(os, "action        {}\n", num(sol.action));
  fmt::print(os, "C             {}\n", num(sol.normalizer));
  fmt::print(os, "value         {}\n", num(sol.value));
  fmt::print(os, "foc_residual  {}\n", num(sol.foc_residual));
  if (const auto* lottery = std::get_if<EndpointLottery>(&sol.worst_case)) {
    fmt::print(os, "worst_case    endpoint lottery: {} w.p. {}, {} w.p. {}\n", num(lottery->lo), num(lottery->p_lo),
               num(lottery->hi), num(lottery->p_hi));
  } else {
    fmt::print(os, "worst_case    {}\n", std::get<Density>(sol.worst_case).description());
  }
  if (!inv.csv_path.empty()) write_file(inv.csv_path, worst_case_csv(sol, cfg.samples));
  return kExitOk;
}

PartitionEquilibrium partition_for(const RunConfig& cfg, const Density& g, double d, const AmbiguityLevel& level,
                                   const PartitionOptions& opts) {
  int n = 0;
  if (cfg.intervals_max) {
    n = max_intervals(g, d, level, opts);
  } else if (cfg.intervals) {
    n = *cfg.intervals;
  } else {
    throw ConfigError(fmt::format("{}: N: required (integer or max)", cfg.origin_of("N")));
  }
  auto eq = solve_partition(g, d, n, level, opts);
  if (!eq) {
    const int largest = max_intervals(g, d, level, opts);
    throw NoEquilibrium(fmt::format("no {}-interval equilibrium at d = {} under beta = {}; largest feasible N = {}", n,
                                    num(d), level.to_string(), largest),
                        largest);
  }
  return std::move(*eq);
}

void print_partition(std::ostream& os, const PartitionEquilibrium& eq) {
  fmt::print(os, "N             {}\n", eq.size());
  fmt::print(os, "thresholds    {}\n", join(eq.thresholds));
  fmt::print(os, "actions       {}\n", join(eq.actions));
  fmt::print(os, "indifference  {}\n", join(eq.indifference_residuals()));
}

int cmd_partition(const Invocation& inv, const RunConfig& cfg, std::ostream& os) {
  const Density& g = require_density(cfg);
  require_unit_support(cfg);
  const AmbiguityLevel level = require_beta(cfg);
  const double d = require_d(cfg);
  const PartitionOptions opts = partition_options(cfg);
  const PartitionEquilibrium eq = partition_for(cfg, g, d, level, opts);
  const Density& prior = cfg.prior ? *cfg.prior : g;

  echo_config(os, inv, cfg);
  fmt::print(os, "beta          {}\n", level.to_string());
  fmt::print(os, "d             {}\n", num(d));
  print_partition(os, eq);
  fmt::print(os, "sender_welfare {}\n", num(sender_welfare(eq, prior, d, cfg.quad)));

  if (!inv.csv_path.empty()) {
    const std::vector<double> residuals = eq.indifference_residuals();
    std::string csv = "interval,lo,hi,action,indifference_residual\n";
    for (std::size_t i = 0; i < eq.size(); ++i) {
      csv += fmt::format("{},{},{},{},{}\n", i + 1, num(eq.thresholds[i]), num(eq.thresholds[i + 1]),
                         num(eq.actions[i]), i < residuals.size() ? num(residuals[i]) : "");
    }
    write_file(inv.csv_path, csv);
  }
  return kExitOk;
}

int cmd_sweep(const Invocation& inv, const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const Density& g = require_density(cfg);
  if (cfg.betas.empty()) throw ConfigError(fmt::format("{}: betas: required", cfg.origin_of("betas")));
  const Interval iv = action_interval(cfg);
  const ReceiverOptions opts = partition_options(cfg).receiver;
  const Density g_m = iv == g.support() ? g : restrict(g, iv, cfg.quad);

  std::ostringstream log;
  echo_config(log, inv, cfg);
  err << log.str();

  std::string csv = "beta,action,C,value,foc_residual\n";
  int solved = 0;
  for (double beta : cfg.betas) {
    try {
      const ReceiverSolution sol = solve_action(g_m, iv, AmbiguityLevel::finite(beta), opts);
      csv += fmt::format("{},{},{},{},{}\n", num(beta), num(sol.action), num(sol.normalizer), num(sol.value),
                         num(sol.foc_residual));
      ++solved;
    } catch (const std::exception& e) {
      fmt::print(err, "warning: beta = {}: {}\n", num(beta), e.what());
      csv += fmt::format("{},,,,\n", num(beta));
    }
  }
  os << csv;
  if (solved == 0) throw NumericalError("every row of the sweep failed");
  return kExitOk;
}

int cmd_welfare(const Invocation& inv, const RunConfig& cfg, std::ostream& os) {
  const Density& g = require_density(cfg);
  require_unit_support(cfg);
  const AmbiguityLevel level = require_beta(cfg);
  const double d = require_d(cfg);
  const PartitionOptions opts = partition_options(cfg);
  const Density& prior = cfg.prior ? *cfg.prior : g;
  std::optional<int> n;
  if (cfg.intervals) {
    n = cfg.intervals;
    for (const AmbiguityLevel& l : {AmbiguityLevel::bayesian(), level}) {
      if (!solve_partition(g, d, *n, l, opts)) {
        const int largest = max_intervals(g, d, l, opts);
        throw NoEquilibrium(fmt::format("no {}-interval equilibrium at d = {} under beta = {}; largest feasible N = {}",
                                        *n, num(d), l.to_string(), largest),
                            largest);
      }
    }
  }
  const WelfareReport report = compare_regimes(g, prior, d, level, n, opts);

  echo_config(os, inv, cfg);
  fmt::print(os, "beta          {}\n", level.to_string());
  fmt::print(os, "d             {}\n", num(d));
  fmt::print(os, "u_bayes       {}\n", num(report.u_bayes));
  fmt::print(os, "u_amb         {}\n", num(report.u_amb));
  fmt::print(os, "verdict       {}\n", to_string(report.verdict));
  fmt::print(os, "shifts        {}\n", join(report.per_interval_action_shift));
  fmt::print(os, "[bayesian equilibrium]\n");
  print_partition(os, report.bayes_equilibrium);
  fmt::print(os, "[ambiguous equilibrium]\n");
  print_partition(os, report.amb_equilibrium);
  return kExitOk;
}

int cmd_exante(const Invocation& inv, const RunConfig& cfg, std::ostream& os) {
  const Density& g = require_density(cfg);
  require_unit_support(cfg);
  const double beta = require_finite_beta(cfg);
  const double d = require_d(cfg);
  const AmbiguityLevel level = AmbiguityLevel::finite(beta);
  const PartitionOptions opts = partition_options(cfg);
  const PartitionEquilibrium eq = cfg.thresholds.empty()
                                      ? partition_for(cfg, g, d, level, opts)
                                      : partition_from_thresholds(g, cfg.thresholds, d, level, opts.receiver);
  const ExAnteSolution ex = solve_ex_ante(g, eq, beta, opts.receiver);

  std::vector<double> resolved;
  double gap = 0.0;
  for (std::size_t i = 0; i < eq.size(); ++i) {
    const ReceiverSolution fresh = solve_action(restrict(g, eq.interval(i), cfg.quad), eq.interval(i), level, opts.receiver);
    resolved.push_back(fresh.action);
    gap = std::max(gap, std::abs(fresh.action - ex.conditional_actions[i]));
  }

  echo_config(os, inv, cfg);
  fmt::print(os, "beta          {}\n", num(beta));
  fmt::print(os, "d             {}\n", num(d));
  fmt::print(os, "thresholds    {}\n", join(eq.thresholds));
  fmt::print(os, "C*            {}\n", join(ex.c_star));
  fmt::print(os, "p_hat         {}\n", join(ex.p_hat));
  fmt::print(os, "worst         interval {}{}\n", ex.worst_interval + 1, ex.tie ? " (tied)" : "");
  fmt::print(os, "value         {}\n", num(ex.value));
  fmt::print(os, "ex_ante       {}\n", join(ex.conditional_actions));
  fmt::print(os, "posterior     {}\n", join(resolved));
  fmt::print(os, "max_gap       {}\n", num(gap));
  return kExitOk;
}

int cmd_reproduce(const Invocation& inv, const RunConfig& cfg, std::ostream& os) {
  const std::string which = cfg.which.value_or("all");
  std::vector<std::string_view> names;
  if (which == "all") {
    const auto all = reproduce_scenarios();
    names.assign(all.begin(), all.end());
  } else {
    names.push_back(which);
  }
  echo_config(os, inv, cfg);
  bool ok = true;
  for (std::string_view name : names) {
    const ScenarioReport report = reproduce(name, partition_options(cfg));
    fmt::print(os, "[{}]\n", report.scenario);
    for (const Claim& c : report.claims) {
      fmt::print(os, "{} {}: {}\n", c.pass ? "PASS" : "FAIL", c.name, c.detail);
    }
    ok = ok && report.pass();
  }
  return ok ? kExitOk : kExitReproduce;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust receiver actions and partition equilibria under KL-penalized ambiguity", "ambtalk"};
  app.require_subcommand(1);
  app.fallthrough();
  Invocation inv;
  app.add_option("--config", inv.config_path, "Config file (key = value lines)");
  app.add_option("--out", inv.out_path, "Write the report or CSV here instead of stdout");
  app.add_option("--set", inv.overrides, "Override a config entry, key=value (repeatable)")->take_all();

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"action", "Optimal robust action on an interval"},
      {"partition", "Partition equilibrium with N intervals or N = max"},
      {"sweep", "CSV of the action over a beta grid"},
      {"welfare", "Sender welfare, Bayesian versus ambiguous receiver"},
      {"exante", "Ex-ante solution and its posterior consistency"},
      {"reproduce", "Built-in reproduction scenarios"},
  };
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->callback([&inv, name = std::string(s.name)] { inv.command = name; });
    if (std::string_view(s.name) == "action") {
      sub->add_option("--csv", inv.csv_path, "Worst-case density sampled on the interval");
    }
    if (std::string_view(s.name) == "partition") sub->add_option("--csv", inv.csv_path, "Equilibrium table");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    const RunConfig cfg = load(inv);
    std::ostringstream report;
    int code = kExitOk;
    if (inv.command == "action") code = cmd_action(inv, cfg, report);
    if (inv.command == "partition") code = cmd_partition(inv, cfg, report);
    if (inv.command == "sweep") code = cmd_sweep(inv, cfg, report, err);
    if (inv.command == "welfare") code = cmd_welfare(inv, cfg, report);
    if (inv.command == "exante") code = cmd_exante(inv, cfg, report);
    if (inv.command == "reproduce") code = cmd_reproduce(inv, cfg, report);
    if (inv.out_path.empty()) {
      out << report.str();
    } else {
      write_file(inv.out_path, report.str());
    }
    return code;
  } catch (const NoEquilibrium& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitNoEquilibrium;
  } catch (const InvalidArgument& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const NumericalError& e) {
    fmt::print(err, "solver error: {}\n", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    fmt::print(err, "solver error: {}\n", e.what());
    return kExitSolver;
  }
}

}  // namespace ambtalk
