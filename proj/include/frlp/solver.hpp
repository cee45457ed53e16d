#ifndef FRLP_SOLVER_HPP
#define FRLP_SOLVER_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "frlp/errors.hpp"
#include "frlp/feasibility.hpp"
#include "frlp/lp/simplex.hpp"
#include "frlp/network.hpp"
#include "frlp/node_set.hpp"
#include "frlp/objective.hpp"

namespace frlp {

/// Covering cut: demand `demand` can only be served with a station in `set`.
struct Cut {
  std::size_t demand;
  NodeSet set;

  friend bool operator==(const Cut&, const Cut&) = default;
};

struct SolveLimits {
  double time_s = std::numeric_limits<double>::infinity();
  std::size_t max_nodes = std::numeric_limits<std::size_t>::max();
};

struct SolveRequest {
  const Instance& instance;
  Variant variant = Variant::original;
  Objective objective{};
  SolveLimits limits{};
  std::uint64_t seed = 0;
  LabelingOptions labeling{};
};

struct SolveStats {
  double total_time_s = 0.0;
  double separation_time_s = 0.0;
  std::size_t bb_nodes = 0;  // child nodes created by branching
  std::size_t cuts = 0;
  std::size_t lp_solves = 0;
};

struct Solution {
  NodeSet stations;
  std::vector<bool> served;
  double objective = 0.0;
  double bound = 0.0;
  bool optimal = false;
  SolveStats stats;
  std::vector<Cut> cuts;
};

/// Served volume under `variant` with the stations fixed.
inline double reevaluate(const Instance& inst, const NodeSet& stations, Variant variant,
                         const LabelingOptions& labeling = {}) {
  double v = 0.0;
  for (const Demand& q : inst.demands)
    if (is_served(inst, q, stations, variant, labeling)) v += q.volume;
  return v;
}

/// Violated covering cuts at an integral candidate. For every demand
/// claimed served but not servable with the open stations, the closed set
/// is shrunk in one ascending pass: a node is released from the cut while
/// the demand stays unservable with it opened.
inline std::vector<Cut> separate(const Instance& inst, Variant variant, const NodeSet& stations,
                                 const std::vector<bool>& claimed, const LabelingOptions& labeling = {}) {
  std::vector<Cut> cuts;
  const std::size_t n = inst.node_count();
  for (std::size_t qi = 0; qi < inst.demands.size(); ++qi) {
    if (!claimed[qi]) continue;
    const Demand& q = inst.demands[qi];
    NodeSet allowed = stations;
    if (is_served(inst, q, allowed, variant, labeling)) continue;
    NodeSet cut = stations.complement();
    for (NodeId j = 0; j < n; ++j) {
      if (!cut.contains(j)) continue;
      allowed.insert(j);
      if (is_served(inst, q, allowed, variant, labeling)) {
        allowed.erase(j);
      } else {
        cut.erase(j);
      }
    }
    cuts.push_back({qi, std::move(cut)});
  }
  return cuts;
}

namespace detail {

class BranchAndCut {
 public:
  explicit BranchAndCut(const SolveRequest& req)
      : req_(req), inst_(req.instance), n_(inst_.node_count()), maximize_(req.objective.maximizing()) {}

  Solution run() {
    const auto start = clock::now();
    check_objective(inst_, req_.objective);
    preflight();
    build_base();

    struct Open {
      double bound;
      std::size_t id;
      std::vector<double> lo, hi;
    };
    auto worse = [&](const Open& a, const Open& b) {
      if (a.bound != b.bound) return maximize_ ? a.bound < b.bound : a.bound > b.bound;
      return a.id > b.id;
    };
    std::priority_queue<Open, std::vector<Open>, decltype(worse)> open(worse);
    std::size_t next_id = 0;
    open.push({maximize_ ? kInf : -kInf, next_id++, base_.lower, base_.upper});

    bool stopped = false;
    double open_bound = maximize_ ? -kInf : kInf;
    while (!open.empty()) {
      if (elapsed(start) > req_.limits.time_s || stats_.bb_nodes > req_.limits.max_nodes) {
        stopped = true;
        break;
      }
      Open node = open.top();
      open.pop();
      if (incumbent_ && !improves(node.bound)) continue;
      auto result = process(node.lo, node.hi);
      if (!result) continue;
      auto& [bound, branch_var] = *result;
      if (!branch_var) continue;
      const std::size_t v = *branch_var;
      Open down{bound, next_id++, node.lo, node.hi};
      down.hi[v] = 0.0;
      Open up{bound, next_id++, std::move(node.lo), std::move(node.hi)};
      up.lo[v] = 1.0;
      stats_.bb_nodes += 2;
      open.push(std::move(down));
      open.push(std::move(up));
    }
    if (stopped)
      while (!open.empty()) {
        open_bound = maximize_ ? std::max(open_bound, open.top().bound) : std::min(open_bound, open.top().bound);
        open.pop();
      }

    Solution sol;
    if (!incumbent_) {
      if (!stopped && !maximize_)
        throw InfeasibleError("no station placement meets the coverage requirement", {});
      sol.stations = NodeSet(n_);
      sol.served.assign(inst_.demands.size(), false);
      sol.objective = maximize_ ? 0.0 : kInf;
    } else {
      sol.stations = *incumbent_;
      for (const Demand& q : inst_.demands) sol.served.push_back(is_served(inst_, q, sol.stations, req_.variant, req_.labeling));
      sol.objective = value_of(sol.stations, sol.served);
    }
    sol.optimal = !stopped;
    sol.bound = stopped ? (maximize_ ? std::max(open_bound, sol.objective) : std::min(open_bound, sol.objective))
                        : sol.objective;
    sol.cuts = pool_;
    stats_.cuts = pool_.size();
    stats_.total_time_s = elapsed(start);
    stats_.separation_time_s = std::min(stats_.separation_time_s, stats_.total_time_s);
    sol.stats = stats_;
    return sol;
  }

 private:
  using clock = std::chrono::steady_clock;
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  static constexpr double kIntTol = 1e-6;

  static double elapsed(clock::time_point t0) {
    return std::chrono::duration<double>(clock::now() - t0).count();
  }

  bool fixed_served() const {
    return req_.objective.kind == ObjectiveKind::min_stations && req_.objective.coverage >= 1.0;
  }

  /// Unservable demands make a full-coverage problem infeasible up front.
  void preflight() {
    NodeSet all = NodeSet::full(n_);
    for (NodeId j : inst_.placement.forced_closed) all.erase(j);
    servable_.clear();
    std::vector<std::size_t> bad;
    double servable_volume = 0.0;
    for (std::size_t qi = 0; qi < inst_.demands.size(); ++qi) {
      const bool ok = is_served(inst_, inst_.demands[qi], all, req_.variant, req_.labeling);
      servable_.push_back(ok);
      if (ok) servable_volume += inst_.demands[qi].volume;
      else bad.push_back(qi);
    }
    if (req_.objective.kind != ObjectiveKind::min_stations) return;
    const double need = req_.objective.coverage * inst_.total_volume();
    if ((fixed_served() && !bad.empty()) || servable_volume < need - 1e-9) {
      std::string names;
      for (std::size_t qi : bad) names += (names.empty() ? "" : ", ") + detail::demand_label(inst_, qi);
      throw InfeasibleError("coverage cannot be met even with every station open; unservable: " +
                                (names.empty() ? std::string("none") : names),
                            bad);
    }
  }

  void build_base() {
    base_ = {};
    base_.sense = maximize_ ? lp::Sense::maximize : lp::Sense::minimize;
    for (NodeId j = 0; j < n_; ++j) base_.add_variable(maximize_ ? 0.0 : 1.0, 0.0, 1.0);
    for (NodeId j : inst_.placement.forced_open) base_.lower[j] = 1.0;
    for (NodeId j : inst_.placement.forced_closed) base_.upper[j] = 0.0;
    y_.assign(inst_.demands.size(), std::nullopt);
    if (!fixed_served()) {
      for (std::size_t qi = 0; qi < inst_.demands.size(); ++qi) {
        // Demands that cannot be served even with all stations open are fixed to 0.
        y_[qi] = base_.add_variable(maximize_ ? inst_.demands[qi].volume : 0.0, 0.0, servable_[qi] ? 1.0 : 0.0);
      }
    }
    if (auto b = effective_budget(inst_, req_.objective)) {
      std::vector<lp::Term> all;
      for (NodeId j = 0; j < n_; ++j) all.push_back({j, 1.0});
      base_.add_row(std::move(all), lp::Relation::less_equal, static_cast<double>(*b));
    }
    if (req_.objective.kind == ObjectiveKind::min_stations && !fixed_served()) {
      std::vector<lp::Term> cov;
      for (std::size_t qi = 0; qi < inst_.demands.size(); ++qi) cov.push_back({*y_[qi], inst_.demands[qi].volume});
      base_.add_row(std::move(cov), lp::Relation::greater_equal, req_.objective.coverage * inst_.total_volume());
    }
  }

  void append_cut(lp::LinearProgram& p, const Cut& c) const {
    std::vector<lp::Term> t;
    for (NodeId j : c.set.members()) t.push_back({j, 1.0});
    if (y_[c.demand]) {
      t.push_back({*y_[c.demand], -1.0});
      p.add_row(std::move(t), lp::Relation::greater_equal, 0.0);
    } else {
      p.add_row(std::move(t), lp::Relation::greater_equal, 1.0);
    }
  }

  bool improves(double bound) const {
    if (!incumbent_) return true;
    if (maximize_) return bound > best_ + 1e-9;
    // Station counts are integral.
    return std::ceil(bound - 1e-6) < best_ - 0.5;
  }

  double value_of(const NodeSet& stations, const std::vector<bool>& served) const {
    if (!maximize_) return static_cast<double>(stations.count());
    double v = 0.0;
    for (std::size_t qi = 0; qi < served.size(); ++qi)
      if (served[qi]) v += inst_.demands[qi].volume;
    return v;
  }

  /// Solves one node to optimality over the current pool. Returns nothing
  /// when pruned; otherwise the node bound and the branching variable (none
  /// when the node produced a feasible candidate).
  std::optional<std::pair<double, std::optional<std::size_t>>> process(const std::vector<double>& lo,
                                                                         const std::vector<double>& hi) {
    for (;;) {
      lp::LinearProgram p = base_;
      p.lower = lo;
      p.upper = hi;
      for (const Cut& c : pool_) append_cut(p, c);
      ++stats_.lp_solves;
      const auto sol = lp::solve_lp(p);
      if (sol.status == lp::Status::infeasible) return std::nullopt;
      if (sol.status == lp::Status::unbounded) throw NumericalFailure("node relaxation is unbounded");
      const double bound = sol.objective;
      if (!improves(bound)) return std::nullopt;

      std::optional<std::size_t> branch;
      double best_frac = -1.0;
      for (NodeId j = 0; j < n_; ++j) {
        const double f = std::abs(sol.x[j] - std::round(sol.x[j]));
        if (f > kIntTol && f > best_frac + 1e-12) {
          best_frac = f;
          branch = j;
        }
      }
      if (!branch)
        for (std::size_t qi = 0; qi < y_.size() && !branch; ++qi)
          if (y_[qi] && std::abs(sol.x[*y_[qi]] - std::round(sol.x[*y_[qi]])) > kIntTol) branch = *y_[qi];
      if (branch) return std::make_pair(bound, branch);

      NodeSet stations(n_);
      for (NodeId j = 0; j < n_; ++j)
        if (sol.x[j] > 0.5) stations.insert(j);
      std::vector<bool> claimed(inst_.demands.size(), true);
      for (std::size_t qi = 0; qi < y_.size(); ++qi)
        if (y_[qi]) claimed[qi] = sol.x[*y_[qi]] > 0.5;

      const auto t0 = clock::now();
      auto cuts = separate(inst_, req_.variant, stations, claimed, req_.labeling);
      stats_.separation_time_s += elapsed(t0);
      std::size_t added = 0;
      for (auto& c : cuts) {
        if (std::find(pool_.begin(), pool_.end(), c) != pool_.end()) continue;
        pool_.push_back(std::move(c));
        ++added;
      }
      if (!cuts.empty() && added == 0) throw NumericalFailure("separation repeated a pooled cut");
      if (added > 0) continue;

      std::vector<bool> served;
      for (const Demand& q : inst_.demands) served.push_back(is_served(inst_, q, stations, req_.variant, req_.labeling));
      const double value = value_of(stations, served);
      if (!incumbent_ || (maximize_ ? value > best_ + 1e-9 : value < best_ - 1e-9)) {
        incumbent_ = stations;
        best_ = value;
      }
      return std::make_pair(bound, std::nullopt);
    }
  }

  const SolveRequest& req_;
  const Instance& inst_;
  std::size_t n_;
  bool maximize_;
  lp::LinearProgram base_;
  std::vector<std::optional<std::size_t>> y_;
  std::vector<bool> servable_;
  std::vector<Cut> pool_;
  std::optional<NodeSet> incumbent_;
  double best_ = 0.0;
  SolveStats stats_;
};

}  // namespace detail

/// Branch-and-cut over the aggregated covering model. Covering rows are
/// generated lazily at integral points; the tree is explored best-bound
/// first and branches on the most fractional station variable.
inline Solution solve(const SolveRequest& request) { return detail::BranchAndCut(request).run(); }

}  // namespace frlp

#endif  // FRLP_SOLVER_HPP
