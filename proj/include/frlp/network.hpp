#ifndef FRLP_NETWORK_HPP
#define FRLP_NETWORK_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "frlp/errors.hpp"
#include "frlp/node_set.hpp"

namespace frlp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
/// Absolute tolerance of every distance comparison. Worked examples sit on
/// the boundary (a gap of exactly the range is feasible).
inline constexpr double kDistanceTol = 1e-9;

enum class Variant { original, cyclic };

inline std::string_view to_string(Variant v) { return v == Variant::original ? "original" : "cyclic"; }

/// Which edges a traversal may use.
///  respect_direction: undirected edges both ways, directed edges forward only.
///  ignore_direction:  every edge both ways.
///  undirected_only:   only undirected edges (symmetric routing needs them).
enum class ArcMode { respect_direction, ignore_direction, undirected_only };

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double length = 0.0;
  bool directed = false;
};

struct Arc {
  NodeId to = 0;
  double length = 0.0;
  bool undirected = true;
};

class Network {
 public:
  Network() = default;

  NodeId add_node(std::string name) {
    if (name.empty()) name = std::to_string(names_.size() + 1);
    if (index_.contains(name)) throw LookupError("duplicate node name '" + name + "'");
    const NodeId id = names_.size();
    index_.emplace(name, id);
    names_.push_back(std::move(name));
    for (auto* adj : {&out_, &in_, &any_, &undirected_}) adj->emplace_back();
    return id;
  }

  /// Adds an edge; invariants (positive length, no self-loop) are checked by
  /// validate(), not here, so that loaders can report every violation at once.
  void add_edge(NodeId u, NodeId v, double length, bool directed = false) {
    check_node(u);
    check_node(v);
    edges_.push_back({u, v, length, directed});
    if (u == v || !(length > 0.0)) return;
    add_arc(out_[u], {v, length, !directed});
    add_arc(in_[v], {u, length, !directed});
    add_arc(any_[u], {v, length, !directed});
    add_arc(any_[v], {u, length, !directed});
    if (!directed) {
      add_arc(out_[v], {u, length, true});
      add_arc(in_[u], {v, length, true});
      add_arc(undirected_[u], {v, length, true});
      add_arc(undirected_[v], {u, length, true});
    }
  }

  std::size_t node_count() const noexcept { return names_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::string& name(NodeId v) const {
    check_node(v);
    return names_[v];
  }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<NodeId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  NodeId id(std::string_view name) const {
    auto v = find(name);
    if (!v) throw LookupError("unknown node '" + std::string(name) + "'");
    return *v;
  }

  /// Outgoing arcs under `mode`; parallel edges collapse to the shortest one.
  std::span<const Arc> arcs(NodeId v, ArcMode mode) const {
    check_node(v);
    switch (mode) {
      case ArcMode::respect_direction: return out_[v];
      case ArcMode::ignore_direction: return any_[v];
      case ArcMode::undirected_only: return undirected_[v];
    }
    return {};
  }
  /// Incoming arcs (reverse adjacency) under `mode`.
  std::span<const Arc> reverse_arcs(NodeId v, ArcMode mode) const {
    check_node(v);
    return mode == ArcMode::respect_direction ? std::span<const Arc>(in_[v]) : arcs(v, mode);
  }

  /// Length of the arc u->v under `mode`, if present.
  std::optional<double> arc_length(NodeId u, NodeId v, ArcMode mode) const {
    for (const Arc& a : arcs(u, mode))
      if (a.to == v) return a.length;
    return std::nullopt;
  }

  bool has_directed_edges() const noexcept {
    return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.directed; });
  }

  void check_node(NodeId v) const {
    if (v >= names_.size()) throw LookupError("unknown node id " + std::to_string(v));
  }

 private:
  static void add_arc(std::vector<Arc>& list, Arc arc) {
    for (Arc& a : list) {
      if (a.to == arc.to) {
        if (arc.length < a.length) a = arc;
        return;
      }
    }
    list.push_back(arc);
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Arc>> out_, in_, any_, undirected_;
};

/// Single-source Dijkstra. With `toward` set, distances are measured to the
/// source along reversed arcs (dist(v, source) for every v).
inline std::vector<double> distances_from(const Network& net, NodeId source, ArcMode mode,
                                          bool toward = false) {
  net.check_node(source);
  std::vector<double> dist(net.node_count(), kInfinity);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (const Arc& a : toward ? net.reverse_arcs(v, mode) : net.arcs(v, mode)) {
      const double nd = d + a.length;
      if (nd < dist[a.to]) {
        dist[a.to] = nd;
        heap.emplace(nd, a.to);
      }
    }
  }
  return dist;
}

/// Shortest walk length from `from` to `to`; nullopt when unreachable.
inline std::optional<double> shortest_distance(const Network& net, NodeId from, NodeId to,
                                               bool direction_aware = true) {
  net.check_node(to);
  const auto d = distances_from(net, from, direction_aware ? ArcMode::respect_direction
                                                           : ArcMode::ignore_direction)[to];
  if (d == kInfinity) return std::nullopt;
  return d;
}

/// Dense all-pairs table, row-major: at(u, v) = dist(u, v).
class DistanceTable {
 public:
  DistanceTable() = default;
  DistanceTable(const Network& net, ArcMode mode) : n_(net.node_count()), d_(n_ * n_) {
    for (NodeId s = 0; s < n_; ++s) {
      auto row = distances_from(net, s, mode);
      std::copy(row.begin(), row.end(), d_.begin() + static_cast<std::ptrdiff_t>(s * n_));
    }
  }
  double at(NodeId u, NodeId v) const { return d_[u * n_ + v]; }
  std::size_t size() const noexcept { return n_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

/// Deviation-threshold route set: walks no longer than alpha times the
/// shortest one.
struct Deviation {
  double alpha = 1.0;
};
/// Caller-supplied routes. Paths for the original variant; closed walks
/// starting and ending at the origin for the cyclic one.
struct ExplicitRoutes {
  std::vector<std::vector<NodeId>> routes;
};
/// Servedness given directly by an aggregated covering family (served iff
/// every member holds a station). Used when the route set is too large to
/// list, e.g. a walk through every permutation of a clique.
struct CoverFamily {
  std::vector<NodeSet> sets;
};

using RouteSpec = std::variant<Deviation, ExplicitRoutes, CoverFamily>;

struct Demand {
  NodeId origin = 0;
  NodeId destination = 0;
  double volume = 0.0;
  RouteSpec routes = Deviation{};

  bool uses_deviation() const { return std::holds_alternative<Deviation>(routes); }
  double alpha() const { return std::get<Deviation>(routes).alpha; }
};

struct PlacementConstraints {
  std::optional<std::size_t> budget;
  std::vector<NodeId> forced_open;
  std::vector<NodeId> forced_closed;
};

struct Instance {
  Network network;
  std::vector<Demand> demands;
  double range = 1.0;
  PlacementConstraints placement;
  Variant variant_default = Variant::original;

  std::size_t node_count() const noexcept { return network.node_count(); }
  double total_volume() const {
    double s = 0.0;
    for (const auto& q : demands) s += q.volume;
    return s;
  }
};

/// Arc mode used to route demands of `variant`.
inline ArcMode routing_mode(Variant variant) {
  return variant == Variant::original ? ArcMode::undirected_only : ArcMode::respect_direction;
}

namespace detail {

inline std::string demand_label(const Instance& inst, std::size_t qi) {
  const auto& q = inst.demands[qi];
  auto name = [&](NodeId v) {
    return v < inst.node_count() ? inst.network.name(v) : "#" + std::to_string(v);
  };
  return "demand " + std::to_string(qi) + " (" + name(q.origin) + "->" + name(q.destination) + ")";
}

/// Checks that consecutive nodes of `walk` are joined by an arc; returns the
/// total length, or nullopt on the first missing arc.
inline std::optional<double> walk_length(const Network& net, const std::vector<NodeId>& walk,
                                         ArcMode mode) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    if (walk[i] >= net.node_count() || walk[i + 1] >= net.node_count()) return std::nullopt;
    auto l = net.arc_length(walk[i], walk[i + 1], mode);
    if (!l) return std::nullopt;
    len += *l;
  }
  return len;
}

}  // namespace detail

/// Every invariant violation of `inst`; empty iff the instance is well-formed.
inline std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> out;
  const auto& net = inst.network;
  const std::size_t n = net.node_count();
  if (!(inst.range > 0.0) || !std::isfinite(inst.range)) out.push_back("range must be a positive finite number");
  for (std::size_t i = 0; i < net.edges().size(); ++i) {
    const Edge& e = net.edges()[i];
    const std::string tag = "edge " + std::to_string(i) + " (" + net.name(e.u) + "-" + net.name(e.v) + ")";
    if (!(e.length > 0.0) || !std::isfinite(e.length)) out.push_back(tag + ": length must be positive");
    if (e.u == e.v) out.push_back(tag + ": self-loop");
    if (e.length > inst.range + kDistanceTol) out.push_back(tag + ": longer than the travel range");
  }
  for (std::size_t qi = 0; qi < inst.demands.size(); ++qi) {
    const Demand& q = inst.demands[qi];
    const std::string tag = detail::demand_label(inst, qi);
    if (q.origin >= n || q.destination >= n) {
      out.push_back(tag + ": unknown node");
      continue;
    }
    if (q.origin == q.destination) out.push_back(tag + ": origin equals destination");
    if (!(q.volume >= 0.0) || !std::isfinite(q.volume)) out.push_back(tag + ": volume must be nonnegative");
    if (const auto* dev = std::get_if<Deviation>(&q.routes)) {
      if (!(dev->alpha >= 1.0) || !std::isfinite(dev->alpha)) out.push_back(tag + ": alpha must be >= 1");
    } else if (const auto* ex = std::get_if<ExplicitRoutes>(&q.routes)) {
      if (ex->routes.empty()) out.push_back(tag + ": empty explicit route list");
      for (std::size_t ri = 0; ri < ex->routes.size(); ++ri) {
        const auto& r = ex->routes[ri];
        const std::string rt = tag + " route " + std::to_string(ri);
        if (r.size() < 2 || r.front() != q.origin) {
          out.push_back(rt + ": must start at the origin");
          continue;
        }
        const bool closed = r.back() == q.origin;
        if (!closed && r.back() != q.destination) out.push_back(rt + ": must end at the destination or the origin");
        if (closed && std::find(r.begin(), r.end(), q.destination) == r.end())
          out.push_back(rt + ": closed route must visit the destination");
        if (!detail::walk_length(net, r, ArcMode::respect_direction))
          out.push_back(rt + ": consecutive nodes not joined by an edge");
        else if (inst.variant_default == Variant::original && !closed &&
                 !detail::walk_length(net, r, ArcMode::undirected_only))
          out.push_back(rt + ": original routing requires undirected edges");
      }
    } else {
      const auto& cover = std::get<CoverFamily>(q.routes);
      if (cover.sets.empty()) out.push_back(tag + ": empty covering family");
      for (const auto& s : cover.sets)
        if (s.empty() || s.universe() != n) out.push_back(tag + ": covering family has an empty or mis-sized set");
    }
  }
  const auto& p = inst.placement;
  for (NodeId v : p.forced_open)
    if (v >= n) out.push_back("placement: unknown forced-open node");
  for (NodeId v : p.forced_closed) {
    if (v >= n) out.push_back("placement: unknown forced-closed node");
    if (std::find(p.forced_open.begin(), p.forced_open.end(), v) != p.forced_open.end())
      out.push_back("placement: node " + (v < n ? net.name(v) : std::to_string(v)) +
                    " is both forced open and forced closed");
  }
  if (p.budget && p.forced_open.size() > *p.budget)
    out.push_back("placement: forced-open nodes exceed the budget");
  return out;
}

}  // namespace frlp

#endif  // FRLP_NETWORK_HPP
