#include <gtest/gtest.h>

#include "support.hpp"

using namespace frlp;
using frlp::fixtures::as_ints;

namespace {

struct Tuple {
  int charged, at_dest;
  double l_start, l_charge, gamma;
};

void expect_label(const Label& l, const Tuple& t) {
  EXPECT_EQ(int(l.charged), t.charged);
  EXPECT_EQ(int(l.at_dest), t.at_dest);
  EXPECT_DOUBLE_EQ(l.l_start, t.l_start);
  EXPECT_DOUBLE_EQ(l.l_charge, t.l_charge);
  EXPECT_EQ(l.gamma_end, t.gamma);
}

}  // namespace

TEST(Feasibility, Example3Verdicts) {
  const Instance inst = gen::gen_example("fig7");
  const Demand& q = inst.demands[0];
  const NodeSet s4(4, {3});
  EXPECT_FALSE(is_served(inst, q, s4, Variant::original));
  EXPECT_TRUE(is_served(inst, q, s4, Variant::cyclic));
  const auto w = find_traversable_cycle({inst, q, s4});
  ASSERT_TRUE(w);
  EXPECT_EQ(as_ints(w->visits), (std::vector<int>{1, 2, 4, 1}));
  EXPECT_NEAR(w->length, inst.range, 1e-9);
}

TEST(Feasibility, AllStationsServeWhenRoutesExist) {
  for (const char* name : {"fig2", "fig7", "fig8"}) {
    const Instance inst = gen::gen_example(name);
    for (auto v : {Variant::original, Variant::cyclic})
      EXPECT_TRUE(is_served(inst, inst.demands[0], NodeSet::full(inst.node_count()), v)) << name;
  }
}

TEST(Feasibility, NoStationsNeverServe) {
  const Instance inst = gen::gen_example("fig7");
  for (auto v : {Variant::original, Variant::cyclic}) EXPECT_FALSE(is_served(inst, inst.demands[0], NodeSet(4), v));
}

TEST(Feasibility, Fig8TraceReplay) {
  const Instance inst = gen::gen_example("fig8");
  const double d = inst.range;
  LabelTrace trace;
  LabelingOptions opts;
  opts.dominance = false;
  opts.completion_bound = false;
  const auto w = find_traversable_cycle({inst, inst.demands[0], NodeSet(3, {2}), std::nullopt, opts}, &trace);
  ASSERT_TRUE(w);
  const std::vector<Tuple> selected{{0, 0, 0, 0, kInfinity},
                                    {0, 1, d / 3, d / 3, kInfinity},
                                    {0, 1, 2 * d / 3, 2 * d / 3, kInfinity},
                                    {1, 1, 2 * d / 3, 0, 2 * d / 3},
                                    {1, 1, d, d / 3, 2 * d / 3}};
  const std::vector<int> nodes{1, 2, 1, 3, 1};
  ASSERT_EQ(trace.steps.size(), selected.size());
  for (std::size_t i = 0; i < selected.size(); ++i) {
    expect_label(trace.steps[i].selected, selected[i]);
    EXPECT_EQ(trace.steps[i].selected.node + 1, NodeId(nodes[i]));
  }
  ASSERT_TRUE(trace.sink);
  expect_label(*trace.sink, {1, 1, d, d / 3, 2 * d / 3});
  EXPECT_EQ(to_string(*trace.sink), "(1,1,3,1,2)");
  EXPECT_EQ(as_ints(w->visits), (std::vector<int>{1, 2, 3, 1}));
}

TEST(Feasibility, ExtendLabel) {
  const NodeSet st(3, {2});
  Label l;
  auto a = extend_label(l, 1, 1.0, 1, st, 3.0, 3.0);
  ASSERT_TRUE(a);
  expect_label(*a, {0, 1, 1, 1, kInfinity});
  auto b = extend_label(*a, 2, 1.0, 1, st, 3.0, 3.0);
  ASSERT_TRUE(b);
  expect_label(*b, {1, 1, 2, 0, 2});
  EXPECT_FALSE(extend_label(*b, 0, 1.5, 1, st, 3.0, 3.0));  // over tau
  EXPECT_FALSE(extend_label(*a, 0, 2.5, 1, st, 3.0, 9.0));  // over range
}

TEST(Feasibility, CycleWitnessesAreTraversableAndWithinBudget) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Instance inst = fixtures::pool_instance(seed, 7, 2);
    const std::size_t n = inst.node_count();
    for (const auto& q : inst.demands) {
      const double tau = route_budget(inst, q, Variant::cyclic);
      for (std::uint64_t m = 1; m < (1ULL << n); m += 3) {
        const auto s = NodeSet::from_mask(n, m);
        if (auto w = find_traversable_cycle({inst, q, s})) {
          EXPECT_TRUE(is_traversable(inst.network, *w, s, inst.range));
          EXPECT_LE(w->length, tau + 1e-9);
          EXPECT_EQ(w->visits.front(), q.origin);
          EXPECT_EQ(w->visits.back(), q.origin);
        }
        if (auto p = find_traversable_path(inst, q, s, route_budget(inst, q, Variant::original))) {
          EXPECT_TRUE(is_traversable(inst.network, *p, s, inst.range));
          EXPECT_EQ(p->visits.back(), q.destination);
        }
      }
    }
  }
}

TEST(Feasibility, AgreesWithExhaustiveRoutes) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Instance inst = fixtures::pool_instance(seed, 7, 2);
    const std::size_t n = inst.node_count();
    for (const auto& q : inst.demands)
      for (auto v : {Variant::original, Variant::cyclic}) {
        const auto routes = enumerate_routes(inst, q, v);
        for (std::uint64_t m = 0; m < (1ULL << n); ++m) {
          const auto s = NodeSet::from_mask(n, m);
          bool expected = false;
          for (const auto& r : routes) expected = expected || is_traversable(inst.network, r, s, inst.range);
          ASSERT_EQ(is_served(inst, q, s, v), expected) << "seed " << seed << " " << to_string(v) << " mask " << m;
        }
      }
  }
}

TEST(Feasibility, PruningOptionsDoNotChangeVerdicts) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance inst = fixtures::pool_instance(seed, 7, 2);
    const std::size_t n = inst.node_count();
    LabelingOptions plain;
    plain.dominance = false;
    plain.completion_bound = false;
    for (const auto& q : inst.demands)
      for (std::uint64_t m = 0; m < (1ULL << n); ++m) {
        const auto s = NodeSet::from_mask(n, m);
        ASSERT_EQ(is_served(inst, q, s, Variant::cyclic), is_served(inst, q, s, Variant::cyclic, plain));
      }
  }
}

TEST(Feasibility, DirectedArcsRespectedInCyclicRouting) {
  Instance inst;
  inst.range = 11;
  for (const char* n : {"a", "b", "c"}) inst.network.add_node(n);
  inst.network.add_edge(0, 1, 4, true);
  inst.network.add_edge(1, 2, 4, true);
  inst.network.add_edge(2, 0, 4, true);
  inst.demands.push_back({0, 1, 1.0, Deviation{1.0}});
  EXPECT_FALSE(is_served(inst, inst.demands[0], NodeSet(3, {2}), Variant::cyclic));
  const auto w = find_traversable_cycle({inst, inst.demands[0], NodeSet(3, {0, 2})});
  ASSERT_TRUE(w);
  EXPECT_EQ(as_ints(w->visits), (std::vector<int>{1, 2, 3, 1}));
  EXPECT_THROW(is_served(inst, inst.demands[0], NodeSet(3, {0, 2}), Variant::original), NoRouteError);
}
