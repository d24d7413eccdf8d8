#include <gtest/gtest.h>

#include "bqpmc/netflow.hpp"
#include "brute.hpp"

using namespace bqpmc;

TEST(Circulation, NonnegativeCostsGiveZeroFlow) {
  Network n(3);
  n.add_arc(0, 1, 2, 1.0);
  n.add_arc(1, 2, 2, 0.0);
  n.add_arc(2, 0, 2, 3.0);
  FlowSolution s = min_cost_circulation(n);
  EXPECT_EQ(s.cost, 0.0);
  for (int f : s.flow) EXPECT_EQ(f, 0);
}

TEST(Circulation, ThreeCycle) {
  Network n(3);
  n.add_arc(0, 1, 1, -2.0);
  n.add_arc(1, 2, 1, 1.0);
  n.add_arc(2, 0, 1, -1.0);
  FlowSolution s = min_cost_circulation(n);
  EXPECT_EQ(s.cost, -2.0);
  EXPECT_EQ(s.flow, (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(brute::circulation(n), -2.0);
}

TEST(Circulation, MatchesEnumerationOnRandomNetworks) {
  SplitMix64 rng(31);
  for (int t = 0; t < 300; ++t) {
    Network n = brute::random_network(rng);
    FlowSolution s = min_cost_circulation(n);
    ASSERT_TRUE(brute::is_circulation(n, s)) << t;
    EXPECT_LE(s.cost, 0.0);
    EXPECT_NEAR(s.cost, brute::circulation(n), 1e-9) << t;
  }
}

TEST(MinCostFlow, RespectsRequestedAmount) {
  Network n(4);
  n.add_arc(0, 1, 1, 1.0);
  n.add_arc(0, 2, 1, 2.0);
  n.add_arc(1, 3, 1, 0.0);
  n.add_arc(2, 3, 1, 0.0);
  auto one = min_cost_flow(n, FlowRequest{0, 3, 1, 1, false});
  ASSERT_TRUE(one);
  EXPECT_EQ(one->amount, 1);
  EXPECT_EQ(one->solution.cost, 1.0);
  auto two = min_cost_flow(n, FlowRequest{0, 3, 2, 2, false});
  ASSERT_TRUE(two);
  EXPECT_EQ(two->solution.cost, 3.0);
  EXPECT_FALSE(min_cost_flow(n, FlowRequest{0, 3, 3, 3, false}));
  auto lazy = min_cost_flow(n, FlowRequest{0, 3, 0, INT_MAX, true});
  ASSERT_TRUE(lazy);
  EXPECT_EQ(lazy->amount, 0);
}

TEST(Assignment, SingleSlotPicksRowMaximum) {
  std::vector<std::vector<double>> w{{1.0}, {5.0}, {2.0}};
  Assignment a = h_cardinality_assignment(w, 1);
  EXPECT_EQ(a.pairs, (std::vector<std::pair<int, int>>{{1, 0}}));
  EXPECT_EQ(a.value, 5.0);
}

TEST(Assignment, MatchesBruteForce) {
  SplitMix64 rng(8);
  for (int t = 0; t < 200; ++t) {
    int rows = 1 + static_cast<int>(rng.below(6)), cols = 1 + static_cast<int>(rng.below(4));
    std::vector<std::vector<double>> w(rows, std::vector<double>(cols));
    for (auto& r : w)
      for (auto& v : r) v = static_cast<double>(static_cast<int>(rng.below(21)) - 10);
    int h = static_cast<int>(rng.below(std::min(rows, cols) + 1));
    Assignment a = h_cardinality_assignment(w, h);
    EXPECT_EQ(static_cast<int>(a.pairs.size()), h);
    std::set<int> rs, cs;
    for (auto [r, c] : a.pairs) {
      rs.insert(r);
      cs.insert(c);
    }
    EXPECT_EQ(static_cast<int>(rs.size()), h);
    EXPECT_EQ(static_cast<int>(cs.size()), h);
    EXPECT_NEAR(a.value, brute::assignment(w, h), 1e-9) << t;
  }
}

TEST(Assignment, InfeasibleCardinality) {
  std::vector<std::vector<double>> w{{1.0, 2.0}};
  EXPECT_THROW(h_cardinality_assignment(w, 2), std::invalid_argument);
  EXPECT_THROW(h_cardinality_assignment(w, -1), std::invalid_argument);
}

TEST(IntegerMccp, ZeroCostsGiveMinimalSupport) {
  ArrowCopyData d{{0, 0}, {{0, 0}, {0, 0}}, {0, 0}, {0, 0}, {{0, 0}, {0, 0}}};
  auto s = solve_integer_mccp(d);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->cost, 0.0);
  int nb = 0, nr = 0;
  for (int b : s->b) nb += b;
  for (int r : s->r) nr += r;
  EXPECT_GE(nb, 1);
  EXPECT_GE(nr, 1);
}

TEST(IntegerMccp, MatchesEnumeration) {
  SplitMix64 rng(12);
  int feasible = 0;
  for (int t = 0; t < 400; ++t) {
    ArrowCopyData d = brute::random_mccp(rng);
    auto got = solve_integer_mccp(d);
    auto want = brute::integer_mccp(d);
    ASSERT_EQ(got.has_value(), want.has_value()) << t;
    if (!want) continue;
    ++feasible;
    EXPECT_NEAR(got->cost, *want, 1e-9) << t;
    int nb = 0;
    for (std::size_t j = 0; j < got->b.size(); ++j) {
      nb += got->b[j];
      if (got->b[j]) EXPECT_GE(got->u_js[j], 1);
      else EXPECT_EQ(got->u_js[j], 0);
    }
    EXPECT_GE(nb, d.min_b);
    for (std::size_t i = 0; i < got->r.size(); ++i)
      for (std::size_t j = 0; j < got->b.size(); ++j) EXPECT_EQ(got->p[i][j], got->r[i] * got->b[j]);
    for (int u : got->u_si) EXPECT_LE(u, 1);
  }
  EXPECT_GT(feasible, 200);
}

TEST(IntegerMccp, Errors) {
  ArrowCopyData empty;
  EXPECT_THROW(solve_integer_mccp(empty), std::invalid_argument);
  ArrowCopyData d{{0}, {{0, 0}}, {0, 0}, {0}, {{0, 0}}};
  d.min_b = 2;
  EXPECT_FALSE(solve_integer_mccp(d));  // one I2 node cannot serve two Y nodes
  d.node_limit = 0;
  d.min_b = 1;
  EXPECT_THROW(solve_integer_mccp(d), std::runtime_error);
}
