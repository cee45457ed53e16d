#ifndef FRLP_TESTS_SUPPORT_HPP
#define FRLP_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "frlp/frlp.hpp"

namespace frlp::fixtures {

inline NodeSet named_set(const Instance& inst, std::initializer_list<const char*> names) {
  NodeSet s(inst.node_count());
  for (const char* n : names) s.insert(inst.network.id(n));
  return s;
}

/// Sets as sorted vectors of 1-based node names, for readable equality.
inline std::set<std::vector<int>> as_int_sets(const std::vector<NodeSet>& sets) {
  std::set<std::vector<int>> out;
  for (const auto& s : sets) {
    std::vector<int> v;
    for (NodeId j : s.members()) v.push_back(static_cast<int>(j) + 1);
    out.insert(v);
  }
  return out;
}

inline std::vector<int> as_ints(const std::vector<NodeId>& walk) {
  std::vector<int> v;
  for (NodeId j : walk) v.push_back(static_cast<int>(j) + 1);
  return v;
}

/// Small random instance of the shared test pool.
inline Instance pool_instance(std::uint64_t seed, std::size_t max_nodes = 8, std::size_t max_demands = 4) {
  std::mt19937_64 rng(seed * 7919 + 17);
  gen::RandomSpec spec;
  spec.seed = seed;
  spec.nodes = 4 + static_cast<std::size_t>(rng() % (max_nodes - 3));
  spec.demands = 1 + static_cast<std::size_t>(rng() % max_demands);
  spec.density = 0.25 + 0.1 * static_cast<double>(rng() % 4);
  return gen::gen_random(spec);
}

/// Uniform x in [0,1]^n, scaled into the cardinality budget.
inline std::vector<double> random_point(std::mt19937_64& rng, std::size_t n, double budget) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(n);
  double s = 0.0;
  for (auto& v : x) s += (v = u(rng));
  if (s > budget)
    for (auto& v : x) v *= budget / s;
  return x;
}

/// Concave envelope at x by an LP listing all 2^n columns up front.
inline double envelope_full_lp(std::size_t n, double volume, const std::vector<bool>& served,
                               const std::vector<double>& x) {
  lp::LinearProgram p;
  p.sense = lp::Sense::maximize;
  for (std::size_t j = 0; j <= n; ++j) p.add_row({}, lp::Relation::equal, j < n ? x[j] : 1.0);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    const std::size_t v = p.add_variable(served[m] ? volume : 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (m >> j & 1U) p.rows[j].terms.push_back({v, 1.0});
    p.rows[n].terms.push_back({v, 1.0});
  }
  return lp::solve_lp(p).objective;
}

}  // namespace frlp::fixtures

#endif
