#ifndef FRLP_COVERING_HPP
#define FRLP_COVERING_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "frlp/errors.hpp"
#include "frlp/network.hpp"
#include "frlp/node_set.hpp"
#include "frlp/routes.hpp"

namespace frlp {

enum class FamilyOrigin { per_route, aggregated };

/// Node sets that must each hold at least one station. For a route this is
/// exactly "the route is traversable"; aggregated over a demand's routes it
/// is exactly "the demand is served".
struct CutSetFamily {
  std::vector<NodeSet> sets;
  FamilyOrigin origin = FamilyOrigin::per_route;
  bool minimal = false;

  std::size_t size() const noexcept { return sets.size(); }
};

/// Sorts members lexicographically and removes duplicates.
inline void canonicalize(std::vector<NodeSet>& sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
}

inline bool hits_all(std::span<const NodeSet> sets, const NodeSet& stations) {
  return std::all_of(sets.begin(), sets.end(), [&](const NodeSet& s) { return s.intersects(stations); });
}
inline bool hits_all(const CutSetFamily& family, const NodeSet& stations) { return hits_all(family.sets, stations); }

/// min over members S of sum_{j in S} x_j (infinity for an empty family).
inline double min_cover_sum(std::span<const NodeSet> sets, std::span<const double> x) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : sets) {
    double sum = 0.0;
    for (NodeId j : s.members()) sum += x[j];
    best = std::min(best, sum);
  }
  return best;
}

/// Per-arc construction on the repeated closed walk of `route`: for the arc
/// entering position k, the nodes visited within `range` before position k
/// (looking back at most one period). Every arc must fit in the range.
inline CutSetFamily cut_sets_for_cycle(const Network& net, const Route& route, double range) {
  const ClosedWalk cw = closed_walk(net, route);
  const std::size_t len = cw.nodes.size();
  CutSetFamily fam;
  fam.origin = FamilyOrigin::per_route;
  for (std::size_t k = 0; k < len; ++k) {
    NodeSet s(net.node_count());
    double back = 0.0;
    for (std::size_t t = 1; t <= len; ++t) {
      const std::size_t i = (k + len - t) % len;
      back += cw.arc_lengths[i];
      if (back > range + kDistanceTol) break;
      s.insert(cw.nodes[i]);
    }
    if (s.empty())
      throw ConstructionError("arc " + net.name(cw.nodes[(k + len - 1) % len]) + "->" + net.name(cw.nodes[k]) +
                              " is longer than the travel range");
    fam.sets.push_back(std::move(s));
  }
  canonicalize(fam.sets);
  return fam;
}

/// Family of a symmetric route: the path driven out and back.
inline CutSetFamily cut_sets_for_path(const Network& net, const Route& path, double range) {
  if (path.kind != RouteKind::path) throw ModelError("cut_sets_for_path expects a path route");
  return cut_sets_for_cycle(net, path, range);
}

/// Members that are not strict supersets of another member (duplicates
/// removed), in canonical order.
inline CutSetFamily minimalize(const CutSetFamily& family) {
  std::vector<NodeSet> by_size = family.sets;
  std::stable_sort(by_size.begin(), by_size.end(),
                   [](const NodeSet& a, const NodeSet& b) { return a.count() < b.count(); });
  std::vector<NodeSet> kept;
  for (auto& s : by_size) {
    const bool dominated =
        std::any_of(kept.begin(), kept.end(), [&](const NodeSet& k) { return k.is_subset_of(s); });
    if (!dominated) kept.push_back(std::move(s));
  }
  canonicalize(kept);
  return {std::move(kept), family.origin, true};
}

struct AggregationOptions {
  std::size_t max_unions = 10'000'000;
  /// When false the full product of unions is returned (deduplicated).
  bool minimal = true;
};

/// Family of all unions taking one member from each route family. With
/// `minimal`, supersets are pruned after every factor, which leaves the
/// relaxed region unchanged.
inline CutSetFamily aggregate_cut_sets(std::span<const CutSetFamily> families, const AggregationOptions& opts = {}) {
  if (families.empty()) throw ModelError("aggregation needs at least one route family");
  std::vector<NodeSet> acc = families.front().sets;
  if (opts.minimal) acc = minimalize({acc, FamilyOrigin::aggregated, false}).sets;
  std::size_t unions = 0;
  for (std::size_t f = 1; f < families.size(); ++f) {
    std::vector<NodeSet> next;
    std::unordered_set<NodeSet, NodeSetHash> seen;
    for (const auto& a : acc) {
      for (const auto& b : families[f].sets) {
        if (++unions > opts.max_unions)
          throw AggregationOverflow("cut-set aggregation exceeded " + std::to_string(opts.max_unions) + " unions");
        NodeSet u = a | b;
        if (seen.insert(u).second) next.push_back(std::move(u));
      }
    }
    acc = opts.minimal ? minimalize({std::move(next), FamilyOrigin::aggregated, false}).sets : std::move(next);
  }
  CutSetFamily out{std::move(acc), FamilyOrigin::aggregated, opts.minimal};
  canonicalize(out.sets);
  return out;
}

/// 0/1 station vector that hits every member except `member`: zero on
/// `member`, one elsewhere.
inline std::vector<int> minimality_witness(const CutSetFamily& family, const NodeSet& member) {
  const bool present = std::find(family.sets.begin(), family.sets.end(), member) != family.sets.end();
  if (!present) throw WitnessUndefined("set is not a member of the family");
  for (const auto& s : family.sets)
    if (s != member && s.is_subset_of(member))
      throw WitnessUndefined("member is not minimal: it contains another member");
  std::vector<int> x(member.universe(), 1);
  for (NodeId j : member.members()) x[j] = 0;
  return x;
}

}  // namespace frlp

#endif  // FRLP_COVERING_HPP
