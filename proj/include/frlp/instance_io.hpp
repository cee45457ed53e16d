#ifndef FRLP_INSTANCE_IO_HPP
#define FRLP_INSTANCE_IO_HPP

// JSON instance format:
//
//   { "range": 10, "variant": "original" | "cyclic",
//     "nodes": ["1", "2", ...],
//     "edges": [ {"u": "1", "v": "2", "length": 5, "directed": false}, ... ],
//     "demands": [ {"origin": "1", "destination": "2", "volume": 1,
//                   "alpha": 1.5 | "routes": [["1","2"], ...] | "cover": [["1"], ...]} ],
//     "placement": {"budget": 2, "open": ["3"], "closed": []} }
//
// Node references may be strings or integers; integers are read as names.

#include <set>
#include <utility>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "frlp/errors.hpp"
#include "frlp/network.hpp"

namespace frlp {

/// Pruning actions taken while loading (edges longer than the range,
/// routes through them, demands left without any route).
struct ParseReport {
  std::vector<std::string> pruned;
};

namespace detail {

using nlohmann::json;

inline std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline std::string node_ref(const json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ParseError(where, "node reference must be a string or an integer");
}

inline const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where, std::string("missing key '") + key + "'");
  return *it;
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where, "expected a number");
  return j.get<double>();
}

inline NodeId resolve(const Network& net, const json& j, const std::string& where) {
  const auto name = node_ref(j, where);
  auto id = net.find(name);
  if (!id) throw ParseError(where, "unknown node '" + name + "'");
  return *id;
}

inline std::vector<NodeId> node_list(const Network& net, const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array of nodes");
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(resolve(net, j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

/// Parses and validates an instance document. Long edges and unroutable
/// demands are pruned (listed in `report`); other violations throw
/// ValidationError with the complete list.
inline Instance parse_instance(std::string_view document, ParseReport* report = nullptr) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ParseError(detail::line_col(document, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  if (!doc.is_object()) throw ParseError("$", "document must be a JSON object");

  Instance inst;
  ParseReport local;
  ParseReport& rep = report ? *report : local;
  std::vector<std::string> violations;
  std::set<std::pair<NodeId, NodeId>> pruned_pairs;

  inst.range = detail::number(detail::require(doc, "range", "$"), "$.range");
  if (auto it = doc.find("variant"); it != doc.end()) {
    if (*it == "original") inst.variant_default = Variant::original;
    else if (*it == "cyclic") inst.variant_default = Variant::cyclic;
    else throw ParseError("$.variant", "expected \"original\" or \"cyclic\"");
  }

  const json& nodes = detail::require(doc, "nodes", "$");
  if (!nodes.is_array()) throw ParseError("$.nodes", "expected an array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto where = "$.nodes[" + std::to_string(i) + "]";
    const auto name = detail::node_ref(nodes[i], where);
    if (inst.network.find(name)) throw ParseError(where, "duplicate node '" + name + "'");
    inst.network.add_node(name);
  }

  if (auto it = doc.find("edges"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("$.edges", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto where = "$.edges[" + std::to_string(i) + "]";
      const json& e = (*it)[i];
      const NodeId u = detail::resolve(inst.network, detail::require(e, "u", where), where + ".u");
      const NodeId v = detail::resolve(inst.network, detail::require(e, "v", where), where + ".v");
      const double len = detail::number(detail::require(e, "length", where), where + ".length");
      bool directed = false;
      if (auto d = e.find("directed"); d != e.end()) {
        if (!d->is_boolean()) throw ParseError(where + ".directed", "expected a boolean");
        directed = d->get<bool>();
      }
      const std::string tag = where + " (" + inst.network.name(u) + "-" + inst.network.name(v) + ")";
      if (!(len > 0.0) || !std::isfinite(len)) {
        violations.push_back(tag + ": length must be positive");
        continue;
      }
      if (u == v) {
        violations.push_back(tag + ": self-loop");
        continue;
      }
      if (inst.range > 0.0 && len > inst.range + kDistanceTol) {
        pruned_pairs.insert({std::min(u, v), std::max(u, v)});
        rep.pruned.push_back("removed " + tag + ": length " + std::to_string(len) + " exceeds range " +
                             std::to_string(inst.range));
        continue;
      }
      inst.network.add_edge(u, v, len, directed);
    }
  }

  if (auto it = doc.find("placement"); it != doc.end()) {
    const json& p = *it;
    if (!p.is_object()) throw ParseError("$.placement", "expected an object");
    if (auto b = p.find("budget"); b != p.end() && !b->is_null()) {
      if (!b->is_number_integer() || b->get<long long>() < 0)
        throw ParseError("$.placement.budget", "expected a nonnegative integer");
      inst.placement.budget = static_cast<std::size_t>(b->get<long long>());
    }
    if (auto o = p.find("open"); o != p.end())
      inst.placement.forced_open = detail::node_list(inst.network, *o, "$.placement.open");
    if (auto c = p.find("closed"); c != p.end())
      inst.placement.forced_closed = detail::node_list(inst.network, *c, "$.placement.closed");
  }

  if (auto it = doc.find("demands"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("$.demands", "expected an array");
    const ArcMode mode = routing_mode(inst.variant_default);
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto where = "$.demands[" + std::to_string(i) + "]";
      const json& dj = (*it)[i];
      Demand q;
      q.origin = detail::resolve(inst.network, detail::require(dj, "origin", where), where + ".origin");
      q.destination =
          detail::resolve(inst.network, detail::require(dj, "destination", where), where + ".destination");
      q.volume = detail::number(detail::require(dj, "volume", where), where + ".volume");
      const int kinds = static_cast<int>(dj.contains("alpha")) + static_cast<int>(dj.contains("routes")) +
                        static_cast<int>(dj.contains("cover"));
      if (kinds != 1) throw ParseError(where, "exactly one of 'alpha', 'routes' or 'cover' is required");
      const std::string tag = where + " (" + inst.network.name(q.origin) + "->" +
                              inst.network.name(q.destination) + ")";
      if (dj.contains("alpha")) {
        q.routes = Deviation{detail::number(dj["alpha"], where + ".alpha")};
        if (q.origin != q.destination) {
          const auto fwd = distances_from(inst.network, q.origin, mode)[q.destination];
          const auto back = distances_from(inst.network, q.destination, mode)[q.origin];
          if (fwd == kInfinity || back == kInfinity) {
            rep.pruned.push_back("removed " + tag + ": destination unreachable, empty route set");
            continue;
          }
        }
      } else if (dj.contains("routes")) {
        const json& rj = dj["routes"];
        if (!rj.is_array()) throw ParseError(where + ".routes", "expected an array of node lists");
        ExplicitRoutes ex;
        for (std::size_t r = 0; r < rj.size(); ++r) {
          auto route = detail::node_list(inst.network, rj[r], where + ".routes[" + std::to_string(r) + "]");
          bool uses_pruned = false;
          for (std::size_t k = 0; k + 1 < route.size(); ++k)
            if (pruned_pairs.contains({std::min(route[k], route[k + 1]), std::max(route[k], route[k + 1])}) &&
                !inst.network.arc_length(route[k], route[k + 1], ArcMode::ignore_direction))
              uses_pruned = true;
          if (uses_pruned) {
            rep.pruned.push_back("removed " + where + ".routes[" + std::to_string(r) + "]: traverses a removed edge");
            continue;
          }
          ex.routes.push_back(std::move(route));
        }
        if (ex.routes.empty() && !rj.empty()) {
          rep.pruned.push_back("removed " + tag + ": no route left after pruning");
          continue;
        }
        q.routes = std::move(ex);
      } else {
        const json& cj = dj["cover"];
        if (!cj.is_array()) throw ParseError(where + ".cover", "expected an array of node lists");
        CoverFamily cover;
        for (std::size_t s = 0; s < cj.size(); ++s)
          cover.sets.push_back(NodeSet::of(
              inst.node_count(), detail::node_list(inst.network, cj[s], where + ".cover[" + std::to_string(s) + "]")));
        q.routes = std::move(cover);
      }
      inst.demands.push_back(std::move(q));
    }
  }

  auto more = validate_instance(inst);
  violations.insert(violations.end(), more.begin(), more.end());
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return inst;
}

/// Emits the document format read by parse_instance.
inline std::string serialize_instance(const Instance& inst, int indent = 2) {
  using detail::json;
  const auto& net = inst.network;
  json doc;
  doc["range"] = inst.range;
  doc["variant"] = std::string(to_string(inst.variant_default));
  doc["nodes"] = net.names();
  json edges = json::array();
  for (const Edge& e : net.edges()) {
    json je{{"u", net.name(e.u)}, {"v", net.name(e.v)}, {"length", e.length}};
    if (e.directed) je["directed"] = true;
    edges.push_back(std::move(je));
  }
  doc["edges"] = std::move(edges);
  auto names_of = [&](const auto& ids) {
    json arr = json::array();
    for (NodeId v : ids) arr.push_back(net.name(v));
    return arr;
  };
  json demands = json::array();
  for (const Demand& q : inst.demands) {
    json jq{{"origin", net.name(q.origin)}, {"destination", net.name(q.destination)}, {"volume", q.volume}};
    if (const auto* dev = std::get_if<Deviation>(&q.routes)) {
      jq["alpha"] = dev->alpha;
    } else if (const auto* ex = std::get_if<ExplicitRoutes>(&q.routes)) {
      json rs = json::array();
      for (const auto& r : ex->routes) rs.push_back(names_of(r));
      jq["routes"] = std::move(rs);
    } else {
      json cs = json::array();
      for (const auto& s : std::get<CoverFamily>(q.routes).sets) cs.push_back(names_of(s.members()));
      jq["cover"] = std::move(cs);
    }
    demands.push_back(std::move(jq));
  }
  doc["demands"] = std::move(demands);
  json placement = json::object();
  if (inst.placement.budget) placement["budget"] = *inst.placement.budget;
  placement["open"] = names_of(inst.placement.forced_open);
  placement["closed"] = names_of(inst.placement.forced_closed);
  doc["placement"] = std::move(placement);
  return doc.dump(indent);
}

}  // namespace frlp

#endif  // FRLP_INSTANCE_IO_HPP
