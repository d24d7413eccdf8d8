#include <gtest/gtest.h>

#include "bqpmc/core.hpp"
#include "bqpmc/io.hpp"

using namespace bqpmc;

namespace {

Instance load(const std::string& name) { return io::read_instance(std::string(BQPMC_DATA_DIR) + "/" + name); }

std::set<std::string> names(const Instance& inst, const std::vector<NodeId>& nodes) {
  std::set<std::string> out;
  for (auto n : nodes) out.insert(n.side == Side::X ? inst.x_name(n.index) : inst.y_name(n.index));
  return out;
}

}  // namespace

TEST(Instance, VariableCounts) {
  EXPECT_EQ(fixtures::inst_a().num_vars(), 11);
  EXPECT_EQ(fixtures::inst_b().num_vars(), 5);
  Instance c = fixtures::inst_c();
  EXPECT_EQ(c.num_vars(), 3 + 2 + 4);
  EXPECT_FALSE(c.is_complete());
}

TEST(Instance, FixtureFilesMatchBuiltIns) {
  for (auto [file, inst] : {std::pair{"inst_a.json", fixtures::inst_a()}, std::pair{"inst_b.json", fixtures::inst_b()},
                            std::pair{"inst_c.json", fixtures::inst_c()}}) {
    Instance f = load(file);
    EXPECT_EQ(f.num_vars(), inst.num_vars()) << file;
    for (int k = 0; k < inst.num_vars(); ++k) EXPECT_EQ(f.var_name(VarId{k}), inst.var_name(VarId{k})) << file;
  }
}

TEST(Instance, CanonicalVariableOrder) {
  Instance a = fixtures::inst_a();
  std::vector<std::string> want{"x:i1", "x:i2", "x:i3", "y:j1", "y:j2", "z:i1:j1", "z:i1:j2",
                                "z:i2:j1", "z:i2:j2", "z:i3:j1", "z:i3:j2"};
  for (int k = 0; k < a.num_vars(); ++k) EXPECT_EQ(a.var_name(VarId{k}), want[k]);
  for (const auto& n : want) EXPECT_EQ(a.var_name(a.parse_var(n)), n);
}

TEST(Instance, RejectsOverlapAndDanglingEdges) {
  EXPECT_THROW(Instance::build({{"i1", "i2"}, {"i2"}}, {"j1"}, EdgeSpec::complete_graph()), std::invalid_argument);
  EXPECT_THROW(Instance::build({{"i1"}}, {"j1"}, EdgeSpec::list({{"i1", "j9"}})), std::invalid_argument);
  EXPECT_THROW(Instance::build({{}}, {"j1"}, EdgeSpec::complete_graph()), std::invalid_argument);
}

TEST(Instance, SerializationRoundTrip) {
  for (const Instance& inst : {fixtures::inst_a(), fixtures::inst_c()}) {
    Instance back = io::instance_from_json(io::instance_to_json(inst));
    ASSERT_EQ(back.num_vars(), inst.num_vars());
    for (int k = 0; k < inst.num_vars(); ++k) EXPECT_EQ(back.var_name(VarId{k}), inst.var_name(VarId{k}));
  }
}

TEST(Neighbourhood, Examples) {
  Instance b = fixtures::inst_b(), c = fixtures::inst_c();
  EXPECT_EQ(names(b, neighbourhood(b, NodeId{Side::X, 0})), std::set<std::string>{"j1"});
  EXPECT_EQ(names(c, neighbourhood(c, NodeId{Side::X, 0})), std::set<std::string>{"j1"});
  EXPECT_EQ(names(c, neighbourhood(c, NodeId{Side::Y, 0})), (std::set<std::string>{"i1", "i2", "i3"}));
  EXPECT_THROW(neighbourhood(c, NodeId{Side::X, 7}), std::out_of_range);
}

TEST(SubsetUniform, Examples) {
  EXPECT_TRUE(is_subset_uniform(fixtures::inst_a()));
  EXPECT_TRUE(is_subset_uniform(fixtures::inst_c()));
  Instance c2 = Instance::build({{"i1", "i2"}, {"i3"}}, {"j1", "j2"},
                                EdgeSpec::list({{"i1", "j1"}, {"i2", "j1"}, {"i3", "j1"}, {"i3", "j2"}, {"i2", "j2"}}));
  EXPECT_FALSE(is_subset_uniform(c2));
  EXPECT_THROW(dependency_graph(c2), std::invalid_argument);
}

TEST(DependencyGraph, Examples) {
  DepGraph c = dependency_graph(fixtures::inst_c());
  EXPECT_EQ(c.edges, (std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {1, 1}}));
  EXPECT_TRUE(c.is_acyclic());
  DepGraph a = dependency_graph(fixtures::inst_a());
  EXPECT_EQ(a.edges.size(), 4u);
  EXPECT_FALSE(a.is_acyclic());
  DepGraph b = dependency_graph(fixtures::inst_b());
  EXPECT_EQ(b.edges, (std::vector<std::pair<int, int>>{{0, 0}}));
}

TEST(DependencyGraph, InvariantUnderRelabelingWithinSubsets) {
  Instance c = fixtures::inst_c();
  Instance swapped = Instance::build({{"i2", "i1"}, {"i3"}}, {"j1", "j2"},
                                     EdgeSpec::list({{"i1", "j1"}, {"i2", "j1"}, {"i3", "j1"}, {"i3", "j2"}}));
  EXPECT_EQ(dependency_graph(c).edges, dependency_graph(swapped).edges);
}

TEST(YSupport, Examples) {
  Instance b = fixtures::inst_b(), a = fixtures::inst_a();
  LinearConstraint z({{b.z(0, 0), 1.0}}, Sense::GE, 0.0);
  EXPECT_EQ(y_support(z, b), std::set<int>{0});
  LinearConstraint x({{b.x(0), 1.0}}, Sense::GE, 0.0);
  EXPECT_TRUE(y_support(x, b).empty());
  LinearConstraint cyc({{a.z(0, 0), -1}, {a.z(0, 1), 1}, {a.y(1), -1}, {a.x(2), -1}, {a.z(2, 0), 1}, {a.z(2, 1), 1}},
                       Sense::LE, 0.0);
  EXPECT_EQ(y_support(cyc, a), (std::set<int>{0, 1}));
}

TEST(LinearConstraint, CanonicalSparseForm) {
  Instance a = fixtures::inst_a();
  LinearConstraint c({{a.z(0, 0), 1.0}, {a.x(0), 2.0}, {a.z(0, 0), -1.0}, {a.y(0), 0.0}}, Sense::LE, 1.0);
  ASSERT_EQ(c.terms().size(), 1u);
  EXPECT_EQ(c.terms()[0].var, a.x(0));
  EXPECT_EQ(c.coef(a.z(0, 0)), 0.0);
}

TEST(LinearConstraint, NormalizedKeysIdentifyEquivalentRows) {
  Instance b = fixtures::inst_b();
  LinearConstraint ge({{b.z(0, 0), 1.0}}, Sense::GE, 0.0);
  LinearConstraint le({{b.z(0, 0), -1.0}}, Sense::LE, 0.0);
  EXPECT_EQ(ge.canonical_key(), le.canonical_key());
}

TEST(Point, ViolationAndSatisfaction) {
  Instance b = fixtures::inst_b();
  Point p(b);
  p[b.z(0, 0)] = -0.25;
  LinearConstraint c({{b.z(0, 0), 1.0}}, Sense::GE, 0.0);
  EXPECT_DOUBLE_EQ(c.violation(p), 0.25);
  EXPECT_FALSE(c.satisfied(p));
  RationalPoint q = to_rational(p);
  EXPECT_EQ(c.violation(q), Rational(1, 4));
}

TEST(ConstraintPool, JsonRoundTrip) {
  Instance a = fixtures::inst_a();
  std::vector<LinearConstraint> pool{LinearConstraint({{a.z(2, 1), 1.5}, {a.y(0), -1}}, Sense::LE, 0.5, "t1"),
                                     LinearConstraint({{a.x(1), 1}}, Sense::EQ, 0.0, "t2")};
  auto back = io::pool_from_json(io::pool_to_json(pool, a), a);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(back[k].canonical_key(), pool[k].canonical_key());
    EXPECT_EQ(back[k].tag(), pool[k].tag());
  }
}
