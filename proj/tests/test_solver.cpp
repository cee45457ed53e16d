#include <gtest/gtest.h>

#include "support.hpp"

using namespace frlp;

TEST(Solver, Fig7MinStations) {
  const Instance inst = gen::gen_example("fig7");
  for (auto v : {Variant::original, Variant::cyclic}) {
    const auto sol = solve({inst, v, Objective::min_stations()});
    EXPECT_TRUE(sol.optimal);
    EXPECT_DOUBLE_EQ(sol.objective, 1.0);
    EXPECT_EQ(sol.stations.count(), 1U);
    EXPECT_TRUE(sol.served[0]);
  }
}

TEST(Solver, Fig7ForcedStationFour) {
  Instance inst = gen::gen_example("fig7");
  inst.placement.forced_closed = {0, 1, 2};
  EXPECT_THROW(solve({inst, Variant::original, Objective::min_stations()}), InfeasibleError);
  const auto sol = solve({inst, Variant::cyclic, Objective::min_stations()});
  EXPECT_EQ(sol.stations, NodeSet(4, {3}));
}

TEST(Solver, ReevaluateExample3) {
  const Instance inst = gen::gen_example("fig7");
  EXPECT_DOUBLE_EQ(reevaluate(inst, NodeSet(4, {3}), Variant::original), 0.0);
  EXPECT_DOUBLE_EQ(reevaluate(inst, NodeSet(4, {3}), Variant::cyclic), 1.0);
}

TEST(Solver, SeparationCutOnFig7) {
  const Instance inst = gen::gen_example("fig7");
  // Original routing with station 4 only: the demand is falsely claimed.
  const auto cuts = separate(inst, Variant::original, NodeSet(4, {3}), {true});
  ASSERT_EQ(cuts.size(), 1U);
  EXPECT_EQ(cuts[0].demand, 0U);
  EXPECT_FALSE(cuts[0].set.contains(3));
  EXPECT_FALSE(is_served(inst, inst.demands[0], cuts[0].set.complement(), Variant::original));
  for (NodeId j : cuts[0].set.members()) {
    NodeSet open = cuts[0].set.complement();
    open.insert(j);
    EXPECT_TRUE(is_served(inst, inst.demands[0], open, Variant::original));
  }
  // Cyclic routing: the claim holds through cycle (1,3,2,3,1).
  EXPECT_TRUE(separate(inst, Variant::cyclic, NodeSet(4, {2}), {true}).empty());
}

TEST(Solver, CutsAreValidAndMinimal) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance inst = fixtures::pool_instance(seed, 7, 3);
    const std::size_t n = inst.node_count();
    const std::vector<bool> claimed(inst.demands.size(), true);
    for (auto v : {Variant::original, Variant::cyclic})
      for (std::uint64_t m = 0; m < (1ULL << n); m += 5) {
        const auto st = NodeSet::from_mask(n, m);
        for (const Cut& c : separate(inst, v, st, claimed)) {
          const Demand& q = inst.demands[c.demand];
          EXPECT_FALSE(c.set.intersects(st));
          // Valid: opening everything outside the cut leaves q unserved.
          EXPECT_FALSE(oracle::exhaustive_served(inst, q, c.set.complement(), v));
          // Minimal: dropping any node from the cut breaks validity.
          for (NodeId j : c.set.members()) {
            NodeSet open = c.set.complement();
            open.insert(j);
            EXPECT_TRUE(oracle::exhaustive_served(inst, q, open, v));
          }
        }
      }
  }
}

TEST(Solver, MatchesOracleOnSmallPool) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Instance inst = fixtures::pool_instance(seed, 8, 4);
    for (auto v : {Variant::original, Variant::cyclic}) {
      for (std::size_t b = 1; b <= 3; ++b) {
        const auto sol = solve({inst, v, Objective::max_cover(b)});
        const auto ref = oracle::brute_force_solve(inst, v, Objective::max_cover(b));
        EXPECT_DOUBLE_EQ(sol.objective, ref.objective) << seed << " " << to_string(v) << " B=" << b;
        EXPECT_LE(sol.stations.count(), b);
        EXPECT_DOUBLE_EQ(reevaluate(inst, sol.stations, v), sol.objective);
      }
      const auto sol = solve({inst, v, Objective::min_stations()});
      EXPECT_DOUBLE_EQ(sol.objective, oracle::brute_force_solve(inst, v, Objective::min_stations()).objective);
    }
  }
}

TEST(Solver, PartialCoverage) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance inst = fixtures::pool_instance(seed, 8, 4);
    const Objective o = Objective::min_stations(0.5);
    const auto sol = solve({inst, Variant::cyclic, o});
    EXPECT_DOUBLE_EQ(sol.objective, oracle::brute_force_solve(inst, Variant::cyclic, o).objective);
    EXPECT_GE(reevaluate(inst, sol.stations, Variant::cyclic), 0.5 * inst.total_volume() - 1e-9);
  }
}

TEST(Solver, ForcedPlacementsHonoured) {
  Instance inst = fixtures::pool_instance(3, 8, 4);
  inst.placement.forced_open = {0};
  inst.placement.forced_closed = {1};
  const auto sol = solve({inst, Variant::cyclic, Objective::max_cover(2)});
  EXPECT_TRUE(sol.stations.contains(0));
  EXPECT_FALSE(sol.stations.contains(1));
  EXPECT_DOUBLE_EQ(sol.objective, oracle::brute_force_solve(inst, Variant::cyclic, Objective::max_cover(2)).objective);
}

TEST(Solver, UnservableDemandNamedInError) {
  Instance inst = gen::gen_example("fig7");
  inst.network.add_node("5");
  inst.demands.push_back({0, 4, 1.0, ExplicitRoutes{{}}});
  try {
    solve({inst, Variant::cyclic, Objective::min_stations()});
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.demands(), std::vector<std::size_t>{1});
  }
}

TEST(Solver, NodeLimitStopsEarly) {
  const Instance inst = fixtures::pool_instance(7, 8, 4);
  SolveLimits lim;
  lim.max_nodes = 0;
  const auto sol = solve({inst, Variant::cyclic, Objective::max_cover(2), lim});
  const double opt = oracle::brute_force_solve(inst, Variant::cyclic, Objective::max_cover(2)).objective;
  EXPECT_LE(sol.objective, opt + 1e-9);
  EXPECT_GE(sol.bound, opt - 1e-9);
}

TEST(Solver, Deterministic) {
  const Instance inst = fixtures::pool_instance(11, 8, 4);
  const auto a = solve({inst, Variant::cyclic, Objective::max_cover(2)});
  const auto b = solve({inst, Variant::cyclic, Objective::max_cover(2)});
  EXPECT_EQ(a.stations, b.stations);
  EXPECT_EQ(a.cuts, b.cuts);
  EXPECT_EQ(a.stats.bb_nodes, b.stats.bb_nodes);
}
