#ifndef FRLP_ORACLE_HPP
#define FRLP_ORACLE_HPP

// Exhaustive reference answers. Servedness here comes only from route
// enumeration and the gap predicate; the labeling search and the
// refueling-network check are deliberately not used.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "frlp/covering.hpp"
#include "frlp/errors.hpp"
#include "frlp/network.hpp"
#include "frlp/node_set.hpp"
#include "frlp/objective.hpp"
#include "frlp/routes.hpp"

namespace frlp::oracle {

inline constexpr std::size_t kMaxNodes = 20;

struct OracleResult {
  double objective = 0.0;
  std::vector<NodeSet> optimal_sets;             // capped
  std::vector<std::vector<bool>> served_by_set;  // parallel to optimal_sets
};

inline bool exhaustive_served(const Instance& inst, const Demand& q, const NodeSet& stations, Variant variant,
                              const EnumerationOptions& opts = {}) {
  if (const auto* cover = std::get_if<CoverFamily>(&q.routes)) return hits_all(cover->sets, stations);
  for (const Route& r : enumerate_routes(inst, q, variant, opts))
    if (is_traversable(inst.network, r, stations, inst.range)) return true;
  return false;
}

/// served[q][mask]: demand q served with the stations in `mask`.
inline std::vector<std::vector<bool>> served_tables(const Instance& inst, Variant variant,
                                                    const EnumerationOptions& opts = {}) {
  const std::size_t n = inst.node_count();
  if (n > kMaxNodes) throw DimensionError("oracle supports at most " + std::to_string(kMaxNodes) + " nodes");
  const std::size_t full = std::size_t{1} << n;
  std::vector<std::vector<bool>> table;
  for (const Demand& q : inst.demands) {
    std::vector<bool> row(full, false);
    if (const auto* cover = std::get_if<CoverFamily>(&q.routes)) {
      for (std::size_t m = 0; m < full; ++m) row[m] = hits_all(cover->sets, NodeSet::from_mask(n, m));
    } else {
      const auto routes = enumerate_routes(inst, q, variant, opts);
      for (std::size_t m = 0; m < full; ++m) {
        const NodeSet s = NodeSet::from_mask(n, m);
        for (const Route& r : routes)
          if (is_traversable(inst.network, r, s, inst.range)) {
            row[m] = true;
            break;
          }
      }
    }
    table.push_back(std::move(row));
  }
  return table;
}

/// Optimum over every station set allowed by the placement constraints.
inline OracleResult brute_force_solve(const Instance& inst, Variant variant, const Objective& objective,
                                      std::size_t max_sets = 1000) {
  check_objective(inst, objective);
  const std::size_t n = inst.node_count();
  const auto table = served_tables(inst, variant);
  std::uint64_t must = 0, banned = 0;
  for (NodeId j : inst.placement.forced_open) must |= std::uint64_t{1} << j;
  for (NodeId j : inst.placement.forced_closed) banned |= std::uint64_t{1} << j;
  const auto budget = effective_budget(inst, objective);
  const bool maximize = objective.maximizing();
  const double need = objective.coverage * inst.total_volume();

  OracleResult res;
  bool found = false;
  double best = maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  std::vector<std::uint64_t> best_masks;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    if ((m & must) != must || (m & banned) != 0) continue;
    const auto count = static_cast<std::size_t>(std::popcount(m));
    if (budget && count > *budget) continue;
    double served = 0.0;
    for (std::size_t qi = 0; qi < table.size(); ++qi)
      if (table[qi][m]) served += inst.demands[qi].volume;
    double value;
    if (maximize) {
      value = served;
    } else {
      if (served < need - 1e-9) continue;
      value = static_cast<double>(count);
    }
    if (!found || (maximize ? value > best + 1e-9 : value < best - 1e-9)) {
      found = true;
      best = value;
      best_masks.clear();
    }
    if (std::abs(value - best) <= 1e-9 && best_masks.size() < max_sets) best_masks.push_back(m);
  }
  if (!found) throw InfeasibleError("no station set meets the coverage requirement", {});
  res.objective = best;
  for (std::uint64_t m : best_masks) {
    res.optimal_sets.push_back(NodeSet::from_mask(n, m));
    std::vector<bool> served;
    for (const auto& row : table) served.push_back(row[m]);
    res.served_by_set.push_back(std::move(served));
  }
  return res;
}

}  // namespace frlp::oracle

#endif  // FRLP_ORACLE_HPP
