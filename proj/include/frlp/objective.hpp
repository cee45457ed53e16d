#ifndef FRLP_OBJECTIVE_HPP
#define FRLP_OBJECTIVE_HPP

#include <cstddef>
#include <optional>
#include <string>

#include "frlp/errors.hpp"
#include "frlp/network.hpp"

namespace frlp {

enum class ObjectiveKind { max_cover, min_stations };

/// Serve the most volume with at most `budget` stations, or serve at least
/// `coverage` of the volume with the fewest stations.
struct Objective {
  ObjectiveKind kind = ObjectiveKind::max_cover;
  std::optional<std::size_t> budget;
  double coverage = 1.0;

  static Objective max_cover(std::size_t budget) { return {ObjectiveKind::max_cover, budget, 1.0}; }
  static Objective min_stations(double coverage = 1.0) { return {ObjectiveKind::min_stations, std::nullopt, coverage}; }

  bool maximizing() const noexcept { return kind == ObjectiveKind::max_cover; }
};

inline std::string to_string(const Objective& o) {
  if (o.kind == ObjectiveKind::max_cover)
    return "maxcover(B=" + (o.budget ? std::to_string(*o.budget) : std::string("?")) + ")";
  return "minstations(rho=" + std::to_string(o.coverage) + ")";
}

/// Budget in force for `o` on `inst`: the objective's own, else the
/// instance placement budget.
inline std::optional<std::size_t> effective_budget(const Instance& inst, const Objective& o) {
  if (o.budget) return o.budget;
  return inst.placement.budget;
}

inline void check_objective(const Instance& inst, const Objective& o) {
  if (o.kind == ObjectiveKind::max_cover && !effective_budget(inst, o))
    throw ModelError("max-cover needs a station budget");
  if (o.kind == ObjectiveKind::min_stations && !(o.coverage > 0.0 && o.coverage <= 1.0))
    throw ModelError("coverage fraction must lie in (0, 1]");
  if (auto b = effective_budget(inst, o); b && *b > inst.node_count())
    throw ModelError("budget exceeds the number of nodes");
}

}  // namespace frlp

#endif  // FRLP_OBJECTIVE_HPP
