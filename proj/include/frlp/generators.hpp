#ifndef FRLP_GENERATORS_HPP
#define FRLP_GENERATORS_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "frlp/errors.hpp"
#include "frlp/network.hpp"
#include "frlp/node_set.hpp"

namespace frlp::gen {

namespace detail {

/// Network with nodes named "1".."n".
inline Network numbered(std::size_t n) {
  Network net;
  for (std::size_t i = 1; i <= n; ++i) net.add_node(std::to_string(i));
  return net;
}

/// 1-based node id.
inline NodeId at(std::size_t k) { return k - 1; }

}  // namespace detail

/// Worked-example graphs: "fig2" (five nodes, every edge d/2, demand 1->5
/// with two explicit paths), "fig7" (four nodes, demand 1->2, alpha 1.5)
/// and "fig8" (triangle with edges d/3, d = 3, demand 1->2, alpha 1.5).
inline Instance gen_example(std::string_view name) {
  using detail::at;
  Instance inst;
  if (name == "fig2") {
    const double d = 10.0;
    inst.range = d;
    inst.network = detail::numbered(5);
    for (auto [u, v] : {std::pair{1, 2}, {2, 3}, {2, 4}, {3, 4}, {4, 5}}) inst.network.add_edge(at(u), at(v), d / 2);
    inst.demands.push_back({at(1), at(5), 1.0, ExplicitRoutes{{{at(1), at(2), at(4), at(5)},
                                                               {at(1), at(2), at(3), at(4), at(5)}}}});
    return inst;
  }
  if (name == "fig7") {
    const double d = 12.0;
    inst.range = d;
    inst.network = detail::numbered(4);
    inst.network.add_edge(at(1), at(2), d / 3);
    inst.network.add_edge(at(1), at(3), d / 4);
    inst.network.add_edge(at(2), at(3), d / 4);
    inst.network.add_edge(at(1), at(4), d / 3);
    inst.network.add_edge(at(2), at(4), d / 3);
    inst.demands.push_back({at(1), at(2), 1.0, Deviation{1.5}});
    return inst;
  }
  if (name == "fig8") {
    const double d = 3.0;
    inst.range = d;
    inst.variant_default = Variant::cyclic;
    inst.network = detail::numbered(3);
    inst.network.add_edge(at(1), at(2), d / 3);
    inst.network.add_edge(at(1), at(3), d / 3);
    inst.network.add_edge(at(2), at(3), d / 3);
    inst.demands.push_back({at(1), at(2), 1.0, Deviation{1.5}});
    return inst;
  }
  throw LookupError("unknown example '" + std::string(name) + "' (expected fig2, fig7 or fig8)");
}

/// 2n nodes, every edge of length d: node 1 fans out to 2..n+1, which all
/// join n+2, followed by the chain n+2..2n. One demand 1 -> 2n whose routes
/// pass through exactly one fan node each. Budget 2.
inline Instance gen_prop5a(std::size_t n, double f1 = 1.0, double d = 1.0) {
  using detail::at;
  if (n < 1) throw ModelError("prop5a needs n >= 1");
  Instance inst;
  inst.range = d;
  inst.placement.budget = 2;
  inst.network = detail::numbered(2 * n);
  if (n == 1) {
    inst.network.add_edge(at(1), at(2), d);
    inst.demands.push_back({at(1), at(2), f1, ExplicitRoutes{{{at(1), at(2)}}}});
    return inst;
  }
  for (std::size_t j = 2; j <= n + 1; ++j) {
    inst.network.add_edge(at(1), at(j), d);
    inst.network.add_edge(at(j), at(n + 2), d);
  }
  for (std::size_t k = n + 2; k < 2 * n; ++k) inst.network.add_edge(at(k), at(k + 1), d);
  ExplicitRoutes routes;
  for (std::size_t j = 1; j <= n; ++j) {
    std::vector<NodeId> r{at(1), at(j + 1)};
    for (std::size_t k = n + 2; k <= 2 * n; ++k) r.push_back(at(k));
    routes.routes.push_back(std::move(r));
  }
  inst.demands.push_back({at(1), at(2 * n), f1, std::move(routes)});
  return inst;
}

enum class Prop5bForm { automatic, explicit_walk, analytic };

inline constexpr std::size_t kProp5bWalkLimit = 4;

/// The analytic covering family of the permutation-walk demand: the four
/// end singletons plus every n-subset of the clique {3..2n+2}.
inline std::vector<NodeSet> prop5b_family(std::size_t n) {
  using detail::at;
  const std::size_t nodes = 2 * n + 4;
  std::vector<NodeSet> sets;
  for (std::size_t k : {std::size_t{1}, std::size_t{2}, 2 * n + 3, 2 * n + 4}) sets.push_back(NodeSet(nodes, {at(k)}));
  std::vector<bool> pick(2 * n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n), true);
  do {
    NodeSet s(nodes);
    for (std::size_t i = 0; i < 2 * n; ++i)
      if (pick[i]) s.insert(at(3 + i));
    sets.push_back(std::move(s));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  std::sort(sets.begin(), sets.end());
  return sets;
}

/// 2n+4 nodes: 1 -(d-delta)- 2 -(2 delta)- 3, a clique on 3..2n+2 with edges
/// (d-delta)/n, 3 -(2 delta)- 2n+3 -(d-delta)- 2n+4. One demand 1 -> 2n+4
/// that drives through every permutation of the clique. Budget 6. The walk
/// is listed explicitly for n <= 4; larger n carry the covering family
/// directly.
inline Instance gen_prop5b(std::size_t n, double delta, double f1 = 1.0, double d = 1.0,
                           Prop5bForm form = Prop5bForm::automatic) {
  using detail::at;
  if (n < 2) throw ModelError("prop5b needs n >= 2");
  if (!(delta > 0.0 && delta < d / static_cast<double>(n * n)))
    throw ModelError("prop5b needs 0 < delta < d / n^2");
  if (form == Prop5bForm::automatic) form = n <= kProp5bWalkLimit ? Prop5bForm::explicit_walk : Prop5bForm::analytic;
  if (form == Prop5bForm::explicit_walk && n > kProp5bWalkLimit)
    throw EnumerationOverflow("permutation walk for n = " + std::to_string(n) + " is too long to list");

  Instance inst;
  inst.range = d;
  inst.placement.budget = 6;
  inst.network = detail::numbered(2 * n + 4);
  inst.network.add_edge(at(1), at(2), d - delta);
  inst.network.add_edge(at(2), at(3), 2 * delta);
  for (std::size_t i = 3; i <= 2 * n + 2; ++i)
    for (std::size_t j = i + 1; j <= 2 * n + 2; ++j) inst.network.add_edge(at(i), at(j), (d - delta) / n);
  inst.network.add_edge(at(3), at(2 * n + 3), 2 * delta);
  inst.network.add_edge(at(2 * n + 3), at(2 * n + 4), d - delta);

  if (form == Prop5bForm::analytic) {
    inst.demands.push_back({at(1), at(2 * n + 4), f1, CoverFamily{prop5b_family(n)}});
    return inst;
  }
  // Any n consecutive clique visits must be distinct nodes; consecutive
  // permutations that would break this are joined by a short bridge.
  std::vector<NodeId> walk{at(1), at(2)};
  std::vector<NodeId> perm(2 * n);
  std::iota(perm.begin(), perm.end(), at(3));
  const std::size_t start = walk.size();
  auto in_tail = [&](NodeId v) {
    const std::size_t from = std::max(start, walk.size() >= n - 1 ? walk.size() - (n - 1) : 0);
    return std::find(walk.begin() + static_cast<std::ptrdiff_t>(from), walk.end(), v) != walk.end();
  };
  do {
    const auto head = perm.begin() + static_cast<std::ptrdiff_t>(n - 1);
    auto in_head = [&](NodeId v) { return std::find(perm.begin(), head, v) != head; };
    while (walk.size() > start && std::any_of(perm.begin(), head, in_tail)) {
      NodeId pick = at(3);
      while (in_tail(pick) || in_head(pick)) ++pick;
      walk.push_back(pick);
    }
    walk.insert(walk.end(), perm.begin(), perm.end());
  } while (std::next_permutation(perm.begin(), perm.end()));
  walk.push_back(at(2 * n + 3));
  walk.push_back(at(2 * n + 4));
  inst.demands.push_back({at(1), at(2 * n + 4), f1, ExplicitRoutes{{std::move(walk)}}});
  return inst;
}

struct RandomSpec {
  std::uint64_t seed = 1;
  std::size_t nodes = 6;
  double density = 0.4;  // probability of each non-tree edge
  std::size_t demands = 3;
  std::vector<double> alphas{1.0, 1.2, 1.5};
  double range = 12.0;
  /// Probability that a non-tree edge is one-way.
  double directed_fraction = 0.0;
  std::size_t max_volume = 10;
  std::optional<std::size_t> budget;
};

/// Connected random network (random spanning tree plus extra edges), edge
/// lengths drawn from {d/4, d/3, d/2, 2d/3, d}, integer volumes. The same
/// spec always yields the same instance.
inline Instance gen_random(const RandomSpec& spec) {
  using detail::at;
  if (spec.nodes < 2) throw ModelError("random instance needs at least two nodes");
  if (spec.alphas.empty()) throw ModelError("random instance needs at least one alpha");
  std::mt19937_64 rng(spec.seed);
  auto below = [&](std::uint64_t k) { return static_cast<std::size_t>(rng() % k); };
  auto chance = [&](double p) { return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p; };
  const double d = spec.range;
  const double lengths[] = {d / 4, d / 3, d / 2, 2 * d / 3, d};

  Instance inst;
  inst.range = d;
  inst.placement.budget = spec.budget;
  inst.network = detail::numbered(spec.nodes);
  std::vector<std::vector<bool>> joined(spec.nodes, std::vector<bool>(spec.nodes, false));
  for (std::size_t v = 1; v < spec.nodes; ++v) {
    const std::size_t u = below(v);
    inst.network.add_edge(u, v, lengths[below(5)]);
    joined[u][v] = joined[v][u] = true;
  }
  for (std::size_t u = 0; u < spec.nodes; ++u)
    for (std::size_t v = u + 1; v < spec.nodes; ++v) {
      if (joined[u][v] || !chance(spec.density)) continue;
      const double len = lengths[below(5)];
      if (chance(spec.directed_fraction)) {
        if (chance(0.5)) inst.network.add_edge(u, v, len, true);
        else inst.network.add_edge(v, u, len, true);
      } else {
        inst.network.add_edge(u, v, len);
      }
      joined[u][v] = joined[v][u] = true;
    }
  for (std::size_t k = 0; k < spec.demands; ++k) {
    const std::size_t o = below(spec.nodes);
    std::size_t t = below(spec.nodes - 1);
    if (t >= o) ++t;
    const double alpha = spec.alphas[below(spec.alphas.size())];
    inst.demands.push_back({o, t, static_cast<double>(1 + below(spec.max_volume)), Deviation{alpha}});
  }
  return inst;
}

}  // namespace frlp::gen

#endif  // FRLP_GENERATORS_HPP
