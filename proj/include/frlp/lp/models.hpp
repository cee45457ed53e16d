#ifndef FRLP_LP_MODELS_HPP
#define FRLP_LP_MODELS_HPP

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "frlp/covering.hpp"
#include "frlp/errors.hpp"
#include "frlp/feasibility.hpp"
#include "frlp/lp/simplex.hpp"
#include "frlp/network.hpp"
#include "frlp/routes.hpp"

namespace frlp {

/// Route list and covering families of one demand. Cover-only demands have
/// no routes; a demand without any route gets the family {{}}, which no
/// station set hits.
struct DemandFamilies {
  std::vector<Route> routes;
  std::vector<CutSetFamily> per_route;
  CutSetFamily aggregated;  // minimal
  bool from_routes = true;
};

struct FamilyOptions {
  EnumerationOptions enumeration{};
  AggregationOptions aggregation{};
};

inline DemandFamilies demand_families(const Instance& inst, const Demand& q, Variant variant,
                                      const FamilyOptions& opts = {}) {
  DemandFamilies out;
  if (const auto* cover = std::get_if<CoverFamily>(&q.routes)) {
    out.from_routes = false;
    out.aggregated = minimalize({cover->sets, FamilyOrigin::aggregated, false});
    return out;
  }
  out.routes = enumerate_routes(inst, q, variant, opts.enumeration);
  for (const Route& r : out.routes) out.per_route.push_back(cut_sets_for_cycle(inst.network, r, inst.range));
  if (out.routes.empty()) {
    out.aggregated = {{NodeSet(inst.node_count())}, FamilyOrigin::aggregated, true};
  } else {
    out.aggregated = aggregate_cut_sets(out.per_route, opts.aggregation);
  }
  return out;
}

inline std::vector<DemandFamilies> build_families(const Instance& inst, Variant variant,
                                                  const FamilyOptions& opts = {}) {
  std::vector<DemandFamilies> out;
  out.reserve(inst.demands.size());
  for (const Demand& q : inst.demands) out.push_back(demand_families(inst, q, variant, opts));
  return out;
}

enum class Formulation { disagg, agg, min_stations, max_cover_budget };

inline const char* to_string(Formulation f) {
  switch (f) {
    case Formulation::disagg: return "disagg";
    case Formulation::agg: return "agg";
    case Formulation::min_stations: return "min-stations";
    case Formulation::max_cover_budget: return "max-cover";
  }
  return "?";
}

enum class VarRole { station, served, route };

struct VarInfo {
  VarRole role;
  std::size_t index;   // node, demand or route position within its demand
  std::size_t demand;  // owning demand (served / route)
};

struct MipModel {
  lp::LinearProgram lp;
  std::vector<bool> integer;
  std::vector<VarInfo> roles;
  Formulation tag = Formulation::agg;
  std::vector<std::size_t> station_var;                // node -> variable
  std::vector<std::optional<std::size_t>> served_var;  // demand -> y variable
  std::vector<std::vector<std::size_t>> route_vars;    // demand -> z variables
};

struct ModelOptions {
  /// Overrides the instance budget (required for max_cover_budget when the
  /// instance has none).
  std::optional<std::size_t> budget;
  /// Fraction of the total volume that min_stations must serve.
  double coverage = 1.0;
  /// Integrality markers on z / y (x is always integral).
  bool integral_aux = true;
};

namespace detail {

inline std::vector<lp::Term> set_terms(const MipModel& m, const NodeSet& s) {
  std::vector<lp::Term> t;
  for (NodeId j : s.members()) t.push_back({m.station_var[j], 1.0});
  return t;
}

}  // namespace detail

/// Covering model of `tag` over the families of every demand. Covering rows
/// read sum_{j in S} x_j - y >= 0 (or >= 1 when y is fixed to one).
inline MipModel build_model(const Instance& inst, Formulation tag, const std::vector<DemandFamilies>& families,
                            const ModelOptions& opts = {}) {
  if (families.size() != inst.demands.size()) throw ModelError("one family entry per demand is required");
  MipModel m;
  m.tag = tag;
  m.lp.sense = tag == Formulation::min_stations ? lp::Sense::minimize : lp::Sense::maximize;
  const std::size_t n = inst.node_count();
  for (NodeId j = 0; j < n; ++j) {
    m.station_var.push_back(
        m.lp.add_variable(tag == Formulation::min_stations ? 1.0 : 0.0, 0.0, 1.0, "x_" + inst.network.name(j)));
    m.integer.push_back(true);
    m.roles.push_back({VarRole::station, j, 0});
  }
  for (NodeId j : inst.placement.forced_open) m.lp.lower[m.station_var[j]] = 1.0;
  for (NodeId j : inst.placement.forced_closed) m.lp.upper[m.station_var[j]] = 0.0;

  m.served_var.assign(inst.demands.size(), std::nullopt);
  m.route_vars.assign(inst.demands.size(), {});

  const bool fix_served = tag == Formulation::min_stations && opts.coverage >= 1.0;
  for (std::size_t qi = 0; qi < inst.demands.size(); ++qi) {
    const double f = inst.demands[qi].volume;
    const DemandFamilies& fam = families[qi];
    const std::string qn = std::to_string(qi);
    if (tag == Formulation::disagg) {
      if (!fam.from_routes) throw ModelError("disaggregated model needs route families for demand " + qn);
      std::vector<lp::Term> convexity;
      for (std::size_t r = 0; r < fam.routes.size(); ++r) {
        const std::size_t z = m.lp.add_variable(f, 0.0, 1.0, "z_" + qn + "_" + std::to_string(r));
        m.integer.push_back(opts.integral_aux);
        m.roles.push_back({VarRole::route, r, qi});
        m.route_vars[qi].push_back(z);
        convexity.push_back({z, 1.0});
      }
      m.lp.add_row(convexity, lp::Relation::less_equal, 1.0, "routes_" + qn);
      for (std::size_t r = 0; r < fam.routes.size(); ++r)
        for (const NodeSet& s : fam.per_route[r].sets) {
          auto terms = detail::set_terms(m, s);
          terms.push_back({m.route_vars[qi][r], -1.0});
          m.lp.add_row(std::move(terms), lp::Relation::greater_equal, 0.0, "cover_" + qn);
        }
      continue;
    }
    if (fix_served) {
      for (const NodeSet& s : fam.aggregated.sets)
        m.lp.add_row(detail::set_terms(m, s), lp::Relation::greater_equal, 1.0, "cover_" + qn);
      continue;
    }
    const std::size_t y = m.lp.add_variable(tag == Formulation::min_stations ? 0.0 : f, 0.0, 1.0, "y_" + qn);
    m.integer.push_back(opts.integral_aux);
    m.roles.push_back({VarRole::served, qi, qi});
    m.served_var[qi] = y;
    for (const NodeSet& s : fam.aggregated.sets) {
      auto terms = detail::set_terms(m, s);
      terms.push_back({y, -1.0});
      m.lp.add_row(std::move(terms), lp::Relation::greater_equal, 0.0, "cover_" + qn);
    }
  }

  if (tag == Formulation::min_stations && !fix_served) {
    std::vector<lp::Term> cov;
    for (std::size_t qi = 0; qi < inst.demands.size(); ++qi)
      cov.push_back({*m.served_var[qi], inst.demands[qi].volume});
    m.lp.add_row(std::move(cov), lp::Relation::greater_equal, opts.coverage * inst.total_volume(), "coverage");
  }

  std::optional<std::size_t> budget = opts.budget ? opts.budget : inst.placement.budget;
  if (tag == Formulation::max_cover_budget && !budget) throw ModelError("max-cover model needs a station budget");
  if (budget) {
    std::vector<lp::Term> all;
    for (NodeId j = 0; j < n; ++j) all.push_back({m.station_var[j], 1.0});
    m.lp.add_row(std::move(all), lp::Relation::less_equal, static_cast<double>(*budget), "budget");
  }
  return m;
}

/// Optimum of the continuous relaxation.
inline double lp_bound(const MipModel& model) {
  const auto sol = lp::solve_lp(model.lp);
  if (sol.status == lp::Status::infeasible) throw InfeasibleError("relaxation is infeasible", {});
  if (sol.status == lp::Status::unbounded) throw NumericalFailure("relaxation is unbounded");
  return sol.objective;
}

inline double set_sum(const NodeSet& s, const std::vector<double>& x) {
  double v = 0.0;
  for (NodeId j : s.members()) v += x[j];
  return v;
}

/// Per-demand value of the disaggregated relaxation at `x`, by the simplex.
inline double eval_v_disagg(const Demand& q, const DemandFamilies& fam, const std::vector<double>& x) {
  if (!fam.from_routes) return q.volume * std::min(1.0, min_cover_sum(fam.aggregated.sets, x));
  if (fam.routes.empty()) return 0.0;
  lp::LinearProgram p;
  p.sense = lp::Sense::maximize;
  std::vector<lp::Term> convexity;
  for (std::size_t r = 0; r < fam.routes.size(); ++r) {
    // z_r <= min(1, min_S x(S)); the row form keeps the LP faithful.
    const std::size_t z = p.add_variable(q.volume, 0.0, 1.0);
    convexity.push_back({z, 1.0});
    for (const NodeSet& s : fam.per_route[r].sets) p.add_row({{z, 1.0}}, lp::Relation::less_equal, set_sum(s, x));
  }
  p.add_row(std::move(convexity), lp::Relation::less_equal, 1.0);
  return lp::solve_lp(p).objective;
}

inline double eval_v_disagg(const Instance& inst, const std::vector<DemandFamilies>& families,
                            const std::vector<double>& x) {
  double v = 0.0;
  for (std::size_t qi = 0; qi < inst.demands.size(); ++qi) v += eval_v_disagg(inst.demands[qi], families[qi], x);
  return v;
}

/// f * min(1, min_{S in H} x(S)).
inline double eval_v_agg(const Demand& q, const CutSetFamily& h, const std::vector<double>& x) {
  return q.volume * std::min(1.0, min_cover_sum(h.sets, x));
}

inline double eval_v_agg(const Instance& inst, const std::vector<DemandFamilies>& families,
                         const std::vector<double>& x) {
  double v = 0.0;
  for (std::size_t qi = 0; qi < inst.demands.size(); ++qi) v += eval_v_agg(inst.demands[qi], families[qi].aggregated, x);
  return v;
}

inline constexpr std::size_t kTightMaxNodes = 20;

/// Servedness of one demand over every station subset (bit j = node j),
/// and the concave envelope LP over those 0/1 points.
class TightEvaluator {
 public:
  /// Served table from is_served (cover-only demands use a superset sweep).
  TightEvaluator(const Instance& inst, const Demand& q, Variant variant) : n_(inst.node_count()), f_(q.volume) {
    check_size();
    const std::size_t full = std::size_t{1} << n_;
    served_.assign(full, 0);
    if (const auto* cover = std::get_if<CoverFamily>(&q.routes)) {
      fill_from_family(cover->sets);
      return;
    }
    for (std::size_t mask = 0; mask < full; ++mask)
      served_[mask] = is_served(inst, q, NodeSet::from_mask(n_, mask), variant) ? 1 : 0;
  }
  /// Served table from a covering family (served iff every member is hit).
  TightEvaluator(std::size_t nodes, double volume, const CutSetFamily& family) : n_(nodes), f_(volume) {
    check_size();
    served_.assign(std::size_t{1} << n_, 0);
    fill_from_family(family.sets);
  }

  std::size_t nodes() const noexcept { return n_; }
  double volume() const noexcept { return f_; }
  bool served(std::uint64_t mask) const { return served_[mask] != 0; }

  /// max sum a_i v(b_i) s.t. sum a_i b_i = x, sum a_i = 1, a >= 0, by
  /// column generation over all 2^n columns.
  double value(const std::vector<double>& x, std::size_t* columns = nullptr) const {
    if (x.size() != n_) throw DimensionError("station vector has the wrong length");
    lp::LinearProgram p;
    p.sense = lp::Sense::maximize;
    for (std::size_t j = 0; j <= n_; ++j) p.add_row({}, lp::Relation::equal, j < n_ ? x[j] : 1.0);
    // Staircase start: nested top-k sets of x in decreasing order.
    std::vector<std::size_t> order(n_);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
    std::uint64_t mask = 0;
    add_column(p, mask);
    for (std::size_t k = 0; k < n_; ++k) {
      mask |= std::uint64_t{1} << order[k];
      add_column(p, mask);
    }
    std::vector<double> sums(served_.size());
    lp::ColumnSource source = [&](const std::vector<double>& y, double scale) -> std::optional<lp::GeneratedColumn> {
      sums[0] = 0.0;
      double best = -1e-9;
      std::optional<std::uint64_t> pick;
      for (std::size_t m = 0; m < sums.size(); ++m) {
        if (m) sums[m] = sums[m & (m - 1)] + y[static_cast<std::size_t>(std::countr_zero(m))];
        const double rc = scale * (served_[m] ? f_ : 0.0) - sums[m] - y[n_];
        if (rc < best) {
          best = rc;
          pick = m;
        }
      }
      if (!pick) return std::nullopt;
      return column(*pick);
    };
    const auto sol = lp::solve_lp(p, {}, &source);
    if (sol.status != lp::Status::optimal) throw NumericalFailure("envelope LP not solved to optimality");
    if (columns) *columns = sol.generated.size();
    return sol.objective;
  }

 private:
  void check_size() const {
    if (n_ > kTightMaxNodes)
      throw DimensionError("tight value needs 2^" + std::to_string(n_) + " columns; limit is 2^" +
                           std::to_string(kTightMaxNodes));
  }

  void fill_from_family(const std::vector<NodeSet>& sets) {
    // contains[m]: m includes some member. served(m) iff the complement of m
    // includes none.
    const std::size_t full = served_.size();
    std::vector<std::uint8_t> contains(full, 0);
    for (const NodeSet& s : sets) contains[s.low_word()] = 1;
    for (std::size_t b = 0; b < n_; ++b)
      for (std::size_t m = 0; m < full; ++m)
        if (m >> b & 1U) contains[m] |= contains[m ^ (std::size_t{1} << b)];
    for (std::size_t m = 0; m < full; ++m) served_[m] = contains[(full - 1) & ~m] ? 0 : 1;
  }

  lp::GeneratedColumn column(std::uint64_t mask) const {
    lp::GeneratedColumn c;
    for (std::size_t j = 0; j < n_; ++j)
      if (mask >> j & 1U) c.terms.push_back({j, 1.0});
    c.terms.push_back({n_, 1.0});
    c.cost = served_[mask] ? f_ : 0.0;
    return c;
  }

  void add_column(lp::LinearProgram& p, std::uint64_t mask) const {
    const auto c = column(mask);
    const std::size_t v = p.add_variable(c.cost, 0.0, lp::kInf);
    for (const auto& t : c.terms) p.rows[t.index].terms.push_back({v, t.coef});
  }

  std::size_t n_;
  double f_;
  std::vector<std::uint8_t> served_;
};

inline double eval_v_tight(const std::vector<TightEvaluator>& evaluators, const std::vector<double>& x) {
  double v = 0.0;
  for (const auto& e : evaluators) v += e.value(x);
  return v;
}

inline double eval_v_tight(const Instance& inst, Variant variant, const std::vector<double>& x) {
  double v = 0.0;
  for (const Demand& q : inst.demands) v += TightEvaluator(inst, q, variant).value(x);
  return v;
}

/// max over the placement polytope (box, fixings, budget) of sum_q v_tight_q,
/// as one column-generation LP with a convexity block per demand.
inline double tight_bound(const Instance& inst, const std::vector<TightEvaluator>& evaluators,
                          std::optional<std::size_t> budget = std::nullopt) {
  const std::size_t n = inst.node_count();
  const std::size_t nq = evaluators.size();
  lp::LinearProgram p;
  p.sense = lp::Sense::maximize;
  std::vector<std::size_t> xv(n);
  for (NodeId j = 0; j < n; ++j) xv[j] = p.add_variable(0.0, 0.0, 1.0);
  for (NodeId j : inst.placement.forced_open) p.lower[xv[j]] = 1.0;
  for (NodeId j : inst.placement.forced_closed) p.upper[xv[j]] = 0.0;
  // Block q: rows q*(n+1)+j read sum a b_j - x_j = 0, row q*(n+1)+n is convexity.
  for (std::size_t q = 0; q < nq; ++q) {
    for (NodeId j = 0; j < n; ++j) p.add_row({{xv[j], -1.0}}, lp::Relation::equal, 0.0);
    p.add_row({}, lp::Relation::equal, 1.0);
  }
  if (!budget) budget = inst.placement.budget;
  if (budget) {
    std::vector<lp::Term> all;
    for (NodeId j = 0; j < n; ++j) all.push_back({xv[j], 1.0});
    p.add_row(std::move(all), lp::Relation::less_equal, static_cast<double>(*budget));
  }
  // Start every block with the empty set; the generator adds the rest.
  for (std::size_t q = 0; q < nq; ++q) {
    const std::size_t a = p.add_variable(evaluators[q].served(0) ? evaluators[q].volume() : 0.0);
    p.rows[q * (n + 1) + n].terms.push_back({a, 1.0});
  }
  const std::size_t full = std::size_t{1} << n;
  std::vector<double> sums(full);
  lp::ColumnSource source = [&](const std::vector<double>& y, double scale) -> std::optional<lp::GeneratedColumn> {
    double best = -1e-9;
    std::optional<std::pair<std::size_t, std::size_t>> pick;
    for (std::size_t q = 0; q < nq; ++q) {
      const std::size_t base = q * (n + 1);
      sums[0] = 0.0;
      for (std::size_t m = 0; m < full; ++m) {
        if (m) sums[m] = sums[m & (m - 1)] + y[base + static_cast<std::size_t>(std::countr_zero(m))];
        const double rc = scale * (evaluators[q].served(m) ? evaluators[q].volume() : 0.0) - sums[m] - y[base + n];
        if (rc < best) {
          best = rc;
          pick = std::make_pair(q, m);
        }
      }
    }
    if (!pick) return std::nullopt;
    const auto [q, m] = *pick;
    lp::GeneratedColumn c;
    for (std::size_t j = 0; j < n; ++j)
      if (m >> j & 1U) c.terms.push_back({q * (n + 1) + j, 1.0});
    c.terms.push_back({q * (n + 1) + n, 1.0});
    c.cost = evaluators[q].served(m) ? evaluators[q].volume() : 0.0;
    return c;
  };
  const auto sol = lp::solve_lp(p, {}, &source);
  if (sol.status != lp::Status::optimal) throw NumericalFailure("tight bound LP not solved to optimality");
  return sol.objective;
}

}  // namespace frlp

#endif  // FRLP_LP_MODELS_HPP
