#ifndef FRLP_FEASIBILITY_HPP
#define FRLP_FEASIBILITY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "frlp/covering.hpp"
#include "frlp/errors.hpp"
#include "frlp/network.hpp"
#include "frlp/node_set.hpp"
#include "frlp/routes.hpp"

namespace frlp {

/// Resource state of a partial closed walk from the origin.
struct Label {
  bool charged = false;     // some station visited
  bool at_dest = false;     // destination visited
  double l_start = 0.0;     // distance since the origin
  double l_charge = 0.0;    // distance since the last station
  double gamma_end = kInfinity;  // distance from the origin to the first station
  NodeId node = 0;

  bool same_state(const Label& o) const {
    return charged == o.charged && at_dest == o.at_dest && node == o.node && l_start == o.l_start &&
           l_charge == o.l_charge && gamma_end == o.gamma_end;
  }
};

inline std::string to_string(const Label& l) {
  auto num = [](double v) {
    if (v == kInfinity) return std::string("inf");
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  };
  return "(" + std::to_string(int(l.charged)) + "," + std::to_string(int(l.at_dest)) + "," + num(l.l_start) + "," +
         num(l.l_charge) + "," + num(l.gamma_end) + ")";
}

/// Resource extension of `label` over the arc label.node -> to. Returns
/// nullopt when the budget or the range would be exceeded.
inline std::optional<Label> extend_label(const Label& label, NodeId to, double arc_length, NodeId destination,
                                         const NodeSet& stations, double range, double tau) {
  if (label.l_start + arc_length > tau + kDistanceTol) return std::nullopt;
  if (label.l_charge + arc_length > range + kDistanceTol) return std::nullopt;
  const bool station = stations.contains(to);
  Label out;
  out.node = to;
  out.charged = label.charged || station;
  out.at_dest = label.at_dest || to == destination;
  out.l_start = label.l_start + arc_length;
  out.l_charge = station ? 0.0 : label.l_charge + arc_length;
  out.gamma_end = (!label.charged && station) ? label.l_start + arc_length : label.gamma_end;
  return out;
}

struct LabelingOptions {
  bool dominance = true;
  /// Drop labels whose l_start plus score already exceeds tau.
  bool completion_bound = true;
  std::size_t max_labels = 20'000'000;
};

struct CycleQuery {
  const Instance& instance;
  const Demand& demand;
  NodeSet stations;
  std::optional<double> tau;  // route_budget(cyclic) when unset
  LabelingOptions options{};
};

struct TraceStep {
  Label selected;
  std::vector<Label> created;
};

/// Extraction log of one run; `sink` is the label that reached the sink.
struct LabelTrace {
  std::vector<TraceStep> steps;
  std::optional<Label> sink;
};

namespace detail {

class CycleLabeler {
 public:
  CycleLabeler(const CycleQuery& q, LabelTrace* trace)
      : net_(q.instance.network), stations_(q.stations), range_(q.instance.range), opts_(q.options),
        origin_(q.demand.origin), dest_(q.demand.destination), trace_(trace) {
    tau_ = q.tau ? *q.tau : route_budget(q.instance, q.demand, Variant::cyclic);
    to_dest_ = distances_from(net_, dest_, ArcMode::respect_direction, true);
    to_origin_ = distances_from(net_, origin_, ArcMode::respect_direction, true);
    at_node_.resize(net_.node_count());
  }

  std::optional<Route> run() {
    Label seed;
    seed.node = origin_;
    if (stations_.contains(origin_)) {
      seed.charged = true;
      seed.gamma_end = 0.0;
    }
    push(seed, kNone);
    while (!heap_.empty()) {
      const std::size_t id = heap_.top().id;
      heap_.pop();
      Entry& e = store_[id];
      if (e.dead) continue;
      e.extracted = true;
      const Label cur = e.label;
      TraceStep* step = nullptr;
      if (trace_) {
        trace_->steps.push_back({cur, {}});
        step = &trace_->steps.back();
      }
      if (cur.node == origin_ && cur.at_dest && cur.l_charge + cur.gamma_end <= range_ + kDistanceTol) {
        if (trace_) trace_->sink = cur;
        return rebuild(id);
      }
      for (const Arc& a : net_.arcs(cur.node, ArcMode::respect_direction)) {
        auto next = extend_label(cur, a.to, a.length, dest_, stations_, range_, tau_);
        if (!next) continue;
        if (opts_.completion_bound && next->l_start + score(*next) > tau_ + kDistanceTol) continue;
        if (push(*next, id) && step) step->created.push_back(*next);
      }
    }
    return std::nullopt;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  struct Entry {
    Label label;
    std::size_t parent;
    bool extracted = false;
    bool dead = false;
  };
  struct HeapItem {
    double score;
    std::uint64_t seq;
    std::size_t id;
    bool operator>(const HeapItem& o) const {
      if (score != o.score) return score > o.score;
      return seq > o.seq;
    }
  };

  double score(const Label& l) const {
    return l.at_dest ? to_origin_[l.node] : to_dest_[l.node] + to_origin_[dest_];
  }

  static bool dominates(const Label& a, const Label& b) {
    return a.at_dest >= b.at_dest && a.l_start <= b.l_start + kDistanceTol &&
           a.l_charge <= b.l_charge + kDistanceTol &&
           (a.gamma_end == kInfinity ? b.gamma_end == kInfinity : a.gamma_end <= b.gamma_end + kDistanceTol);
  }

  bool push(const Label& l, std::size_t parent) {
    auto& bucket = at_node_[l.node];
    for (std::size_t other : bucket) {
      const Entry& e = store_[other];
      if (e.dead) continue;
      if (e.label.same_state(l)) return false;
      if (opts_.dominance && dominates(e.label, l)) return false;
    }
    if (opts_.dominance) {
      for (std::size_t other : bucket) {
        Entry& e = store_[other];
        if (!e.dead && !e.extracted && dominates(l, e.label)) e.dead = true;
      }
      std::erase_if(bucket, [&](std::size_t i) { return store_[i].dead; });
    }
    if (store_.size() >= opts_.max_labels)
      throw NumericalFailure("labeling exceeded " + std::to_string(opts_.max_labels) + " labels");
    const std::size_t id = store_.size();
    store_.push_back({l, parent});
    bucket.push_back(id);
    heap_.push({score(l), seq_++, id});
    return true;
  }

  Route rebuild(std::size_t id) const {
    Route r;
    r.kind = RouteKind::cycle;
    r.length = store_[id].label.l_start;
    for (std::size_t i = id; i != kNone; i = store_[i].parent) r.visits.push_back(store_[i].label.node);
    std::reverse(r.visits.begin(), r.visits.end());
    return r;
  }

  const Network& net_;
  const NodeSet& stations_;
  double range_;
  LabelingOptions opts_;
  NodeId origin_, dest_;
  LabelTrace* trace_;
  double tau_ = 0.0;
  std::vector<double> to_dest_, to_origin_;
  std::vector<Entry> store_;
  std::vector<std::vector<std::size_t>> at_node_;
  std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> heap_;
  std::uint64_t seq_ = 0;
};

}  // namespace detail

/// Best-first labeling search for a closed walk through the destination,
/// of length at most tau, that can be repeated with the given stations.
inline std::optional<Route> find_traversable_cycle(const CycleQuery& query, LabelTrace* trace = nullptr) {
  if (query.demand.origin == query.demand.destination) return std::nullopt;
  return detail::CycleLabeler(query, trace).run();
}

/// Original routing: a walk origin -> destination of length at most
/// `tau_path` whose out-and-back repetition never runs dry. Searched as a
/// shortest path over origin, stations and destination, leaving half
/// charged and arriving with half a charge to spare.
inline std::optional<Route> find_traversable_path(const Instance& inst, const Demand& q, const NodeSet& stations,
                                                  double tau_path) {
  const Network& net = inst.network;
  const double d = inst.range;
  const ArcMode mode = ArcMode::undirected_only;
  const std::vector<NodeId> st = stations.members();
  const std::size_t k = st.size();
  if (k == 0) return std::nullopt;
  // Refueling network: 0 = source, 1..k = stations, k+1 = sink.
  std::vector<std::vector<double>> dist_from(k + 1);
  dist_from[0] = distances_from(net, q.origin, mode);
  for (std::size_t i = 0; i < k; ++i) dist_from[i + 1] = distances_from(net, st[i], mode);
  auto point = [&](std::size_t v) { return v == 0 ? q.origin : v == k + 1 ? q.destination : st[v - 1]; };
  auto cap = [&](std::size_t a, std::size_t b) { return (a == 0 || b == k + 1) ? d / 2.0 : d; };

  std::vector<double> best(k + 2, kInfinity);
  std::vector<std::size_t> prev(k + 2, k + 2);
  std::vector<bool> done(k + 2, false);
  best[0] = 0.0;
  for (;;) {
    std::size_t u = k + 2;
    for (std::size_t v = 0; v < k + 2; ++v)
      if (!done[v] && best[v] < kInfinity && (u == k + 2 || best[v] < best[u])) u = v;
    if (u == k + 2 || u == k + 1) break;
    done[u] = true;
    for (std::size_t v = 1; v < k + 2; ++v) {
      if (done[v] || (u == 0 && v == k + 1)) continue;
      const double len = dist_from[u][point(v)];
      if (len > cap(u, v) + kDistanceTol) continue;
      if (best[u] + len < best[v]) {
        best[v] = best[u] + len;
        prev[v] = u;
      }
    }
  }
  if (best[k + 1] > tau_path + kDistanceTol) return std::nullopt;

  std::vector<std::size_t> hops;
  for (std::size_t v = k + 1; v != k + 2; v = prev[v]) hops.push_back(v);
  std::reverse(hops.begin(), hops.end());
  Route r;
  r.kind = RouteKind::path;
  r.visits.push_back(q.origin);
  for (std::size_t h = 0; h + 1 < hops.size(); ++h) {
    // Shortest G-path from point(hops[h]) to point(hops[h+1]), traced back
    // through the distance labels of the target.
    const NodeId from = point(hops[h]);
    const NodeId to = point(hops[h + 1]);
    const auto toward = distances_from(net, to, mode, true);
    NodeId cur = from;
    while (cur != to) {
      const NodeId at = cur;
      for (const Arc& a : net.arcs(at, mode)) {
        if (std::abs(a.length + toward[a.to] - toward[at]) <= kDistanceTol * (1.0 + toward[at])) {
          cur = a.to;
          break;
        }
      }
      if (cur == at) throw NumericalFailure("could not trace a shortest path");
      r.visits.push_back(cur);
    }
  }
  r.length = best[k + 1];
  return r;
}

/// True iff some route of `q` can be repeated with the given stations.
inline bool is_served(const Instance& inst, const Demand& q, const NodeSet& stations, Variant variant,
                      const LabelingOptions& options = {}) {
  if (const auto* cover = std::get_if<CoverFamily>(&q.routes)) return hits_all(cover->sets, stations);
  if (std::holds_alternative<ExplicitRoutes>(q.routes)) {
    for (const Route& r : explicit_routes(inst, q, variant))
      if (is_traversable(inst.network, r, stations, inst.range)) return true;
    return false;
  }
  if (stations.empty()) return false;
  if (variant == Variant::original)
    return find_traversable_path(inst, q, stations, route_budget(inst, q, Variant::original)).has_value();
  return find_traversable_cycle({inst, q, stations, std::nullopt, options}).has_value();
}

}  // namespace frlp

#endif  // FRLP_FEASIBILITY_HPP
