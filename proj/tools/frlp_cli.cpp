// frlp: command-line front end for the refueling-location toolkit.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frlp/frlp.hpp"

namespace {

using namespace frlp;

enum class Level { quiet = 0, info = 1, debug = 2 };

Level log_level() {
  const char* env = std::getenv("FRLP_LOG");
  if (!env) return Level::quiet;
  const std::string v = env;
  if (v == "debug" || v == "2") return Level::debug;
  if (v == "info" || v == "1") return Level::info;
  return Level::quiet;
}

void log(Level at, const std::string& msg) {
  if (static_cast<int>(log_level()) >= static_cast<int>(at)) std::cerr << "[frlp] " << msg << "\n";
}

/// Exit code 1: bad input or flags. Exit code 2: the solve itself failed.
struct UsageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageFailure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Instance load(const std::string& path) {
  ParseReport rep;
  try {
    Instance inst = parse_instance(read_file(path), &rep);
    for (const auto& p : rep.pruned) log(Level::info, p);
    return inst;
  } catch (const ParseError& e) {
    throw UsageFailure(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw UsageFailure(path + ": " + e.what());
  }
}

Variant parse_variant(const std::string& s) { return s == "cyclic" ? Variant::cyclic : Variant::original; }

NodeSet parse_stations(const Instance& inst, const std::string& list) {
  NodeSet s(inst.node_count());
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    auto id = inst.network.find(tok);
    if (!id) throw UsageFailure("unknown station node '" + tok + "'");
    s.insert(*id);
  }
  return s;
}

std::string names(const Instance& inst, const NodeSet& s) {
  std::string out = "{";
  for (NodeId j : s.members()) out += (out.size() > 1 ? "," : "") + inst.network.name(j);
  return out + "}";
}

std::string walk_text(const Instance& inst, const std::vector<NodeId>& w) {
  std::string out;
  for (NodeId j : w) out += (out.empty() ? "" : " ") + inst.network.name(j);
  return out;
}

std::string fmt(double v, int prec = 4) {
  if (v == kInfinity) return "inf";
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(prec) << v;
  return ss.str();
}

void override_alpha(Instance& inst, double alpha) {
  for (auto& q : inst.demands)
    if (q.uses_deviation()) q.routes = Deviation{alpha};
}

std::string alpha_column(const Instance& inst) {
  std::optional<double> a;
  for (const auto& q : inst.demands) {
    if (!q.uses_deviation()) continue;
    if (a && *a != q.alpha()) return "mixed";
    a = q.alpha();
  }
  return a ? fmt(*a, 2) : "";
}

constexpr const char* kCsvHeader = "instance,routing,alpha,time_s,separation_time_s,bb_nodes,cuts";

std::string csv_row(const std::string& name, Variant v, const std::string& alpha, const SolveStats& s) {
  std::ostringstream ss;
  ss << name << "," << to_string(v) << "," << alpha << "," << fmt(s.total_time_s, 6) << ","
     << fmt(s.separation_time_s, 6) << "," << s.bb_nodes << "," << s.cuts;
  return ss.str();
}

struct SolveFlags {
  std::string file;
  std::string variant = "original";
  std::string objective = "maxcover";
  std::optional<std::size_t> budget;
  double coverage = 1.0;
  std::optional<double> alpha;
  double time_limit = 0.0;
  std::uint64_t seed = 0;
  std::string stats_out;
};

void add_solve_flags(CLI::App* app, SolveFlags& f) {
  app->add_option("instance", f.file, "instance file")->required();
  app->add_option("--variant", f.variant)->check(CLI::IsMember({"original", "cyclic"}));
  app->add_option("--objective", f.objective)->check(CLI::IsMember({"maxcover", "minstations"}));
  app->add_option("--budget", f.budget);
  app->add_option("--coverage", f.coverage)->check(CLI::Range(0.0, 1.0));
  app->add_option("--alpha-override", f.alpha);
  app->add_option("--time-limit", f.time_limit, "seconds, 0 for none");
  app->add_option("--seed", f.seed);
  app->add_option("--stats-out", f.stats_out, "CSV file with run statistics");
}

Objective make_objective(const SolveFlags& f) {
  Objective o;
  if (f.objective == "minstations") {
    o = Objective::min_stations(f.coverage);
    o.budget = f.budget;
  } else {
    o.kind = ObjectiveKind::max_cover;
    o.budget = f.budget;
  }
  return o;
}

std::string stem(const std::string& path) {
  const auto slash = path.find_last_of('/');
  std::string s = slash == std::string::npos ? path : path.substr(slash + 1);
  if (const auto dot = s.rfind('.'); dot != std::string::npos) s.erase(dot);
  return s;
}

int run_solve(const SolveFlags& f) {
  Instance inst = load(f.file);
  if (f.alpha) override_alpha(inst, *f.alpha);
  const Variant v = parse_variant(f.variant);
  SolveLimits lim;
  if (f.time_limit > 0) lim.time_s = f.time_limit;
  const Objective o = make_objective(f);
  log(Level::info, "solving " + to_string(o) + " with " + std::string(to_string(v)) + " routing");
  const Solution sol = solve({inst, v, o, lim, f.seed});
  std::cout << "variant: " << to_string(v) << "\n"
            << "objective: " << fmt(sol.objective, 6) << "\n"
            << "bound: " << fmt(sol.bound, 6) << "\n"
            << "optimal: " << (sol.optimal ? "yes" : "no") << "\n"
            << "stations: " << names(inst, sol.stations) << "\n"
            << "served volume (cyclic reevaluation): " << fmt(reevaluate(inst, sol.stations, Variant::cyclic), 6)
            << "\n"
            << "time_s: " << fmt(sol.stats.total_time_s, 6) << "  separation_time_s: "
            << fmt(sol.stats.separation_time_s, 6) << "  bb_nodes: " << sol.stats.bb_nodes
            << "  cuts: " << sol.stats.cuts << "\n";
  for (std::size_t qi = 0; qi < inst.demands.size(); ++qi)
    log(Level::debug, detail::demand_label(inst, qi) + (sol.served[qi] ? " served" : " not served"));
  if (!f.stats_out.empty()) {
    std::ofstream out(f.stats_out);
    out << kCsvHeader << "\n" << csv_row(stem(f.file), v, alpha_column(inst), sol.stats) << "\n";
  }
  return 0;
}

int run_oracle(const SolveFlags& f) {
  Instance inst = load(f.file);
  if (f.alpha) override_alpha(inst, *f.alpha);
  const Variant v = parse_variant(f.variant);
  const auto res = oracle::brute_force_solve(inst, v, make_objective(f), 50);
  std::cout << "variant: " << to_string(v) << "\n"
            << "objective: " << fmt(res.objective, 6) << "\n"
            << "optimal sets:";
  for (const auto& s : res.optimal_sets) std::cout << " " << names(inst, s);
  std::cout << "\n";
  return 0;
}

int run_bounds(const std::string& file, const std::string& variant, std::optional<std::size_t> budget) {
  const Instance inst = load(file);
  const Variant v = parse_variant(variant);
  const auto fam = build_families(inst, v);
  ModelOptions mo;
  mo.budget = budget;
  const bool has_budget = budget || inst.placement.budget;
  const Formulation agg_tag = has_budget ? Formulation::max_cover_budget : Formulation::agg;
  const double agg = lp_bound(build_model(inst, agg_tag, fam, mo));
  const double disagg = lp_bound(build_model(inst, Formulation::disagg, fam, mo));
  std::cout << "variant " << to_string(v) << ", budget " << (has_budget ? std::to_string(budget ? *budget : *inst.placement.budget) : "none")
            << "\n";
  std::cout << std::left << std::setw(12) << "agg-LP" << fmt(agg, 6) << "\n";
  std::cout << std::left << std::setw(12) << "disagg-LP" << fmt(disagg, 6) << "\n";
  std::optional<double> tight;
  if (inst.node_count() <= 18) {
    std::vector<TightEvaluator> evs;
    for (const auto& q : inst.demands) evs.emplace_back(inst, q, v);
    tight = tight_bound(inst, evs, budget);
    std::cout << std::left << std::setw(12) << "tight-LP" << fmt(*tight, 6) << "\n";
  }
  auto ratio = [](double a, double b) { return b > 1e-12 ? fmt(a / b, 4) : std::string("inf"); };
  std::cout << "disagg/agg  " << ratio(disagg, agg) << "\n";
  if (tight) std::cout << "agg/tight   " << ratio(agg, *tight) << "\n";
  return 0;
}

int run_enumerate(const std::string& file, const std::string& variant) {
  const Instance inst = load(file);
  const Variant v = parse_variant(variant);
  for (std::size_t qi = 0; qi < inst.demands.size(); ++qi) {
    const Demand& q = inst.demands[qi];
    std::cout << detail::demand_label(inst, qi) << "\n";
    if (std::holds_alternative<CoverFamily>(q.routes)) {
      std::cout << "  (covering family, no route list)\n";
      continue;
    }
    const auto routes = enumerate_routes(inst, q, v);
    double shortest = kInfinity;
    for (const auto& r : routes) shortest = std::min(shortest, r.length);
    std::cout << "  " << std::left << std::setw(28) << "route" << std::setw(12) << "length" << "deviation\n";
    for (const auto& r : routes)
      std::cout << "  " << std::left << std::setw(28) << walk_text(inst, r.visits) << std::setw(12) << fmt(r.length)
                << fmt(100.0 * (r.length / shortest - 1.0), 1) << "%\n";
  }
  return 0;
}

int run_cutsets(const std::string& file, const std::string& variant) {
  const Instance inst = load(file);
  const Variant v = parse_variant(variant);
  const auto fams = build_families(inst, v);
  for (std::size_t qi = 0; qi < inst.demands.size(); ++qi) {
    std::cout << detail::demand_label(inst, qi) << "\n";
    for (std::size_t r = 0; r < fams[qi].routes.size(); ++r) {
      std::cout << "  D[" << walk_text(inst, fams[qi].routes[r].visits) << "] =";
      for (const auto& s : fams[qi].per_route[r].sets) std::cout << " " << names(inst, s);
      std::cout << "\n";
    }
    std::cout << "  H =";
    for (const auto& s : fams[qi].aggregated.sets) std::cout << " " << names(inst, s);
    std::cout << "\n";
  }
  return 0;
}

int run_check(const std::string& file, const std::string& variant, const std::string& stations, std::size_t demand,
              bool trace) {
  const Instance inst = load(file);
  if (demand >= inst.demands.size()) throw UsageFailure("demand index out of range");
  const Variant v = parse_variant(variant);
  const NodeSet st = parse_stations(inst, stations);
  const Demand& q = inst.demands[demand];
  std::optional<Route> witness;
  bool served = false;
  if (v == Variant::cyclic && q.uses_deviation()) {
    LabelTrace log_trace;
    LabelingOptions opts;
    if (trace) opts.dominance = opts.completion_bound = false;
    witness = find_traversable_cycle({inst, q, st, std::nullopt, opts}, trace ? &log_trace : nullptr);
    served = witness.has_value();
    if (trace) {
      std::cout << "step  node  selected label       created\n";
      for (std::size_t i = 0; i < log_trace.steps.size(); ++i) {
        const auto& s = log_trace.steps[i];
        std::cout << std::left << std::setw(6) << i + 1 << std::setw(6) << inst.network.name(s.selected.node)
                  << std::setw(21) << to_string(s.selected);
        for (const auto& c : s.created) std::cout << " " << inst.network.name(c.node) << ":" << to_string(c);
        std::cout << "\n";
      }
      if (log_trace.sink) std::cout << "sink  " << to_string(*log_trace.sink) << "\n";
    }
  } else if (v == Variant::original && q.uses_deviation()) {
    witness = st.empty() ? std::nullopt : find_traversable_path(inst, q, st, route_budget(inst, q, v));
    served = witness.has_value();
  } else {
    served = is_served(inst, q, st, v);
  }
  std::cout << detail::demand_label(inst, demand) << " with stations " << names(inst, st) << " ("
            << to_string(v) << ")\n";
  std::cout << "served: " << (served ? "yes" : "no") << "\n";
  if (witness) std::cout << "witness: " << walk_text(inst, witness->visits) << "  length " << fmt(witness->length) << "\n";
  return 0;
}

struct GenerateFlags {
  std::string name;
  std::size_t n = 3;
  double delta = 0.0;
  std::uint64_t seed = 1;
  std::size_t nodes = 8;
  std::size_t demands = 4;
  std::string out;
};

Instance generate(const GenerateFlags& g) {
  if (g.name == "fig2" || g.name == "fig7" || g.name == "fig8") return gen::gen_example(g.name);
  if (g.name == "prop5a") return gen::gen_prop5a(g.n);
  if (g.name == "prop5b") {
    const double delta = g.delta > 0 ? g.delta : 0.5 / double(g.n * g.n);
    return gen::gen_prop5b(g.n, delta);
  }
  if (g.name == "random") {
    gen::RandomSpec spec;
    spec.seed = g.seed;
    spec.nodes = g.nodes;
    spec.demands = g.demands;
    return gen::gen_random(spec);
  }
  throw UsageFailure("unknown generator '" + g.name + "'");
}

int run_generate(const GenerateFlags& g) {
  const std::string doc = serialize_instance(generate(g));
  if (g.out.empty()) {
    std::cout << doc << "\n";
  } else {
    std::ofstream out(g.out);
    if (!out) throw UsageFailure("cannot write " + g.out);
    out << doc << "\n";
  }
  return 0;
}

int run_validate(const std::string& file) {
  try {
    ParseReport rep;
    const Instance inst = parse_instance(read_file(file), &rep);
    for (const auto& p : rep.pruned) std::cout << "pruned: " << p << "\n";
    std::cout << "ok: " << inst.node_count() << " nodes, " << inst.network.edges().size() << " edges, "
              << inst.demands.size() << " demands\n";
    return 0;
  } catch (const ValidationError& e) {
    for (const auto& v : e.violations()) std::cout << "violation: " << v << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cout << "violation: " << e.what() << "\n";
    return 1;
  }
}

struct SweepFlags {
  std::string name;
  std::string file;
  std::vector<double> alphas{1.0, 1.2, 1.5};
  std::string objective = "maxcover";
  std::optional<std::size_t> budget;
  double coverage = 1.0;
  double time_limit = 0.0;
  std::uint64_t seed = 1;
  std::string stats_out;
};

int run_sweep(const SweepFlags& f) {
  if (f.name.empty() == f.file.empty()) throw UsageFailure("sweep needs exactly one of --name or an instance file");
  GenerateFlags g;
  g.name = f.name;
  g.seed = f.seed;
  Instance base = f.file.empty() ? generate(g) : load(f.file);
  const std::string label = f.file.empty() ? f.name : stem(f.file);
  SolveFlags sf;
  sf.objective = f.objective;
  sf.budget = f.budget;
  sf.coverage = f.coverage;
  const Objective o = make_objective(sf);
  SolveLimits lim;
  if (f.time_limit > 0) lim.time_s = f.time_limit;

  std::vector<std::string> csv;
  std::cout << std::left << std::setw(8) << "alpha" << std::setw(10) << "routing" << std::setw(12) << "objective"
            << std::setw(16) << "served(cyclic)" << std::setw(10) << "time_s" << "stations\n";
  for (double alpha : f.alphas) {
    Instance inst = base;
    override_alpha(inst, alpha);
    for (Variant v : {Variant::original, Variant::cyclic}) {
      log(Level::info, "alpha " + fmt(alpha, 2) + " " + std::string(to_string(v)));
      const Solution sol = solve({inst, v, o, lim});
      std::cout << std::left << std::setw(8) << fmt(alpha, 2) << std::setw(10) << to_string(v) << std::setw(12)
                << fmt(sol.objective, 3) << std::setw(16) << fmt(reevaluate(inst, sol.stations, Variant::cyclic), 3)
                << std::setw(10) << fmt(sol.stats.total_time_s, 3) << names(inst, sol.stations) << "\n";
      csv.push_back(csv_row(label, v, fmt(alpha, 2), sol.stats));
    }
  }
  std::cout << "\n" << kCsvHeader << "\n";
  for (const auto& r : csv) std::cout << r << "\n";
  if (!f.stats_out.empty()) {
    std::ofstream out(f.stats_out);
    out << kCsvHeader << "\n";
    for (const auto& r : csv) out << r << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Charging-station placement for round-trip demands"};
  app.require_subcommand(1);

  SolveFlags solve_flags;
  auto* solve_cmd = app.add_subcommand("solve", "branch-and-cut solve");
  add_solve_flags(solve_cmd, solve_flags);

  SolveFlags oracle_flags;
  auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive reference solve (small instances)");
  add_solve_flags(oracle_cmd, oracle_flags);
  oracle_cmd->group("");

  std::string file, variant = "original", stations;
  std::optional<std::size_t> budget;
  std::size_t demand = 0;
  bool trace = false;

  auto* bounds_cmd = app.add_subcommand("bounds", "LP relaxation bounds");
  bounds_cmd->add_option("instance", file)->required();
  bounds_cmd->add_option("--variant", variant)->check(CLI::IsMember({"original", "cyclic"}));
  bounds_cmd->add_option("--budget", budget);

  auto* enum_cmd = app.add_subcommand("enumerate", "list admissible routes");
  enum_cmd->add_option("instance", file)->required();
  enum_cmd->add_option("--variant", variant)->check(CLI::IsMember({"original", "cyclic"}));

  auto* cut_cmd = app.add_subcommand("cutsets", "dump per-route and aggregated covering families");
  cut_cmd->add_option("instance", file)->required();
  cut_cmd->add_option("--variant", variant)->check(CLI::IsMember({"original", "cyclic"}));

  auto* check_cmd = app.add_subcommand("check", "servedness of one demand with fixed stations");
  check_cmd->add_option("instance", file)->required();
  check_cmd->add_option("--variant", variant)->check(CLI::IsMember({"original", "cyclic"}));
  check_cmd->add_option("--stations", stations, "comma-separated node names")->required();
  check_cmd->add_option("--demand", demand, "demand index");
  check_cmd->add_flag("--trace", trace, "print the label log");

  GenerateFlags gen_flags;
  auto* gen_cmd = app.add_subcommand("generate", "write a generated instance");
  gen_cmd->add_option("--name", gen_flags.name)
      ->required()
      ->check(CLI::IsMember({"fig2", "fig7", "fig8", "prop5a", "prop5b", "random"}));
  gen_cmd->add_option("--n", gen_flags.n);
  gen_cmd->add_option("--delta", gen_flags.delta);
  gen_cmd->add_option("--seed", gen_flags.seed);
  gen_cmd->add_option("--nodes", gen_flags.nodes);
  gen_cmd->add_option("--demands", gen_flags.demands);
  gen_cmd->add_option("--out", gen_flags.out);

  auto* val_cmd = app.add_subcommand("validate", "check an instance file");
  val_cmd->add_option("instance", file)->required();

  SweepFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "compare both routings over an alpha grid");
  sweep_cmd->add_option("instance", sweep_flags.file);
  sweep_cmd->add_option("--name", sweep_flags.name);
  sweep_cmd->add_option("--alphas", sweep_flags.alphas)->delimiter(',');
  sweep_cmd->add_option("--objective", sweep_flags.objective)->check(CLI::IsMember({"maxcover", "minstations"}));
  sweep_cmd->add_option("--budget", sweep_flags.budget);
  sweep_cmd->add_option("--coverage", sweep_flags.coverage);
  sweep_cmd->add_option("--time-limit", sweep_flags.time_limit);
  sweep_cmd->add_option("--seed", sweep_flags.seed);
  sweep_cmd->add_option("--stats-out", sweep_flags.stats_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*solve_cmd) return run_solve(solve_flags);
    if (*oracle_cmd) return run_oracle(oracle_flags);
    if (*bounds_cmd) return run_bounds(file, variant, budget);
    if (*enum_cmd) return run_enumerate(file, variant);
    if (*cut_cmd) return run_cutsets(file, variant);
    if (*check_cmd) return run_check(file, variant, stations, demand, trace);
    if (*gen_cmd) return run_generate(gen_flags);
    if (*val_cmd) return run_validate(file);
    if (*sweep_cmd) return run_sweep(sweep_flags);
  } catch (const UsageFailure& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
