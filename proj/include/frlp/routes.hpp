#ifndef FRLP_ROUTES_HPP
#define FRLP_ROUTES_HPP

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "frlp/errors.hpp"
#include "frlp/network.hpp"
#include "frlp/node_set.hpp"

namespace frlp {

enum class RouteKind { path, cycle };

/// A walk a driver is willing to use. Paths run origin -> destination and are
/// driven back along the same nodes; cycles start and end at the origin.
struct Route {
  RouteKind kind = RouteKind::path;
  std::vector<NodeId> visits;
  double length = 0.0;

  friend bool operator==(const Route&, const Route&) = default;
};

/// One period of the repeated closed walk: nodes p_0..p_{L-1} and the arc
/// lengths p_i -> p_{i+1 mod L}. A path p becomes p ++ reverse(p).
struct ClosedWalk {
  std::vector<NodeId> nodes;
  std::vector<double> arc_lengths;
  double total() const {
    double s = 0.0;
    for (double l : arc_lengths) s += l;
    return s;
  }
};

inline ClosedWalk closed_walk(const Network& net, const Route& route) {
  ClosedWalk cw;
  std::vector<NodeId> seq = route.visits;
  if (route.kind == RouteKind::path) {
    for (std::size_t i = route.visits.size(); i-- > 0;) seq.push_back(route.visits[i]);
    seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(route.visits.size()));
  }
  // seq is closed (first == last) for cycles and for mirrored paths.
  if (seq.size() < 2) return cw;
  cw.nodes.assign(seq.begin(), seq.end() - 1);
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    auto l = net.arc_length(seq[i], seq[i + 1], ArcMode::respect_direction);
    if (!l) throw LookupError("route steps " + net.name(seq[i]) + "->" + net.name(seq[i + 1]) + " without an edge");
    cw.arc_lengths.push_back(*l);
  }
  return cw;
}

/// Whether the route can be driven forever when charging is possible at
/// `stations`: some visited node holds a station, and every pair of
/// consecutive station visits along the repeated walk (including the wrap
/// into the next period) is at most `range` apart.
inline bool is_traversable(const Network& net, const Route& route, const NodeSet& stations, double range) {
  const ClosedWalk cw = closed_walk(net, route);
  if (cw.nodes.empty()) return false;
  double pos = 0.0, first = -1.0, last = -1.0;
  for (std::size_t i = 0; i < cw.nodes.size(); ++i) {
    if (stations.contains(cw.nodes[i])) {
      if (first < 0.0) first = pos;
      else if (pos - last > range + kDistanceTol) return false;
      last = pos;
    }
    pos += cw.arc_lengths[i];
  }
  if (first < 0.0) return false;
  return pos - last + first <= range + kDistanceTol;
}

/// Total length budget tau of the demand's route set under `variant`.
inline double route_budget(const Instance& inst, const Demand& q, Variant variant) {
  if (!q.uses_deviation()) throw ModelError("route budget is only defined for deviation demands");
  const ArcMode mode = routing_mode(variant);
  const double fwd = distances_from(inst.network, q.origin, mode)[q.destination];
  if (fwd == kInfinity)
    throw NoRouteError("destination " + inst.network.name(q.destination) + " unreachable from " +
                       inst.network.name(q.origin));
  if (variant == Variant::original) return q.alpha() * fwd;
  const double back = distances_from(inst.network, q.destination, mode)[q.origin];
  if (back == kInfinity)
    throw NoRouteError("origin " + inst.network.name(q.origin) + " unreachable from " +
                       inst.network.name(q.destination));
  return q.alpha() * (fwd + back);
}

struct EnumerationOptions {
  std::size_t max_routes = 1'000'000;
};

namespace detail {

/// Depth-first walk enumeration bounded by tau, pruned with the admissible
/// lower bound on the remaining length.
class WalkEnumerator {
 public:
  WalkEnumerator(const Network& net, const Demand& q, Variant variant, double tau, std::size_t cap,
                 std::string label)
      : net_(net), q_(q), variant_(variant), mode_(routing_mode(variant)), tau_(tau), cap_(cap),
        label_(std::move(label)) {
    to_dest_ = distances_from(net, q.destination, mode_, /*toward=*/true);
    to_origin_ = distances_from(net, q.origin, mode_, /*toward=*/true);
  }

  std::vector<Route> run() {
    walk_.assign(1, q_.origin);
    extend(q_.origin, 0.0, false);
    return std::move(out_);
  }

 private:
  double remaining_bound(NodeId v, bool seen_dest) const {
    if (variant_ == Variant::original) return to_dest_[v];
    if (seen_dest) return to_origin_[v];
    return to_dest_[v] + to_origin_[q_.destination];
  }

  void record(double length) {
    if (variant_ == Variant::cyclic) {
      // Undirected closed walks are listed once per reversal pair.
      bool reversible = true;
      for (std::size_t i = 0; i + 1 < walk_.size() && reversible; ++i)
        reversible = net_.arc_length(walk_[i + 1], walk_[i], mode_).has_value();
      if (reversible && std::lexicographical_compare(walk_.rbegin(), walk_.rend(), walk_.begin(), walk_.end()))
        return;
    }
    if (out_.size() >= cap_)
      throw EnumerationOverflow("route enumeration for " + label_ + " exceeded " + std::to_string(cap_) + " routes");
    out_.push_back({variant_ == Variant::original ? RouteKind::path : RouteKind::cycle, walk_, length});
  }

  void extend(NodeId v, double length, bool seen_dest) {
    for (const Arc& a : net_.arcs(v, mode_)) {
      const double nl = length + a.length;
      const bool nd = seen_dest || a.to == q_.destination;
      if (nl + remaining_bound(a.to, nd) > tau_ + kDistanceTol) continue;
      walk_.push_back(a.to);
      if (variant_ == Variant::original ? a.to == q_.destination : (nd && a.to == q_.origin)) record(nl);
      extend(a.to, nl, nd);
      walk_.pop_back();
    }
  }

  const Network& net_;
  const Demand& q_;
  Variant variant_;
  ArcMode mode_;
  double tau_;
  std::size_t cap_;
  std::string label_;
  std::vector<double> to_dest_, to_origin_;
  std::vector<NodeId> walk_;
  std::vector<Route> out_;
};

}  // namespace detail

/// Explicit route list interpreted under `variant`: paths become their
/// mirrored cycles for cyclic routing.
inline std::vector<Route> explicit_routes(const Instance& inst, const Demand& q, Variant variant) {
  const auto& ex = std::get<ExplicitRoutes>(q.routes);
  std::vector<Route> out;
  for (const auto& visits : ex.routes) {
    const bool closed = visits.size() >= 2 && visits.back() == q.origin;
    Route r;
    if (closed) {
      if (variant == Variant::original)
        throw ModelError("closed explicit route cannot be used with original routing");
      r.kind = RouteKind::cycle;
      r.visits = visits;
    } else if (variant == Variant::cyclic) {
      r.kind = RouteKind::cycle;
      r.visits = visits;
      for (std::size_t i = visits.size() - 1; i-- > 0;) r.visits.push_back(visits[i]);
    } else {
      r.kind = RouteKind::path;
      r.visits = visits;
    }
    auto len = detail::walk_length(inst.network, r.visits, ArcMode::respect_direction);
    if (!len) throw LookupError("explicit route leaves the network");
    r.length = *len;
    out.push_back(std::move(r));
  }
  return out;
}

/// The admissible route set of demand `q` under `variant`: every walk
/// (original) or closed walk through the destination (cyclic) within the
/// deviation budget, or the explicit list.
inline std::vector<Route> enumerate_routes(const Instance& inst, const Demand& q, Variant variant,
                                           const EnumerationOptions& opts = {}) {
  if (std::holds_alternative<ExplicitRoutes>(q.routes)) return explicit_routes(inst, q, variant);
  if (std::holds_alternative<CoverFamily>(q.routes))
    throw ModelError("demand is specified by a covering family and has no route list");
  const double tau = route_budget(inst, q, variant);
  const std::string label = inst.network.name(q.origin) + "->" + inst.network.name(q.destination);
  return detail::WalkEnumerator(inst.network, q, variant, tau, opts.max_routes, label).run();
}

}  // namespace frlp

#endif  // FRLP_ROUTES_HPP
