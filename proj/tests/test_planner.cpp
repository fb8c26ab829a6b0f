#include <gtest/gtest.h>

#include <algorithm>

#include "netcascade/meta_network.hpp"
#include "netcascade/planner.hpp"
#include "test_support.hpp"

using namespace netcascade;
using namespace nc_test;

namespace {

double unitarity_defect(const ComplexMatrix& s) {
  return max_abs(s.adjoint() * s - ComplexMatrix::identity(s.rows()));
}

}  // namespace

TEST(Planner, MetaNetworkEmbedsJunction) {
  const GraphNetwork net = make_meta_network(2, 7);
  EXPECT_TRUE(has_odd_cycle(net.scheme));
  const ReductionPlan plan = plan_reduction(net.scheme, ReductionObjective::MaxReduction);
  EXPECT_EQ(plan.connection_members, (std::vector<Index>{net.scheme.index_of("D")}));
  EXPECT_TRUE(plan.requires_star);
  EXPECT_FALSE(plan.fully_reduced);
  EXPECT_EQ(plan.remaining_joins.size(), 1u);
  EXPECT_TRUE(plan_reduction(net.scheme, ReductionObjective::PreferClosedPorts).connection_members.empty());

  const GraphNetwork mod = make_meta_network(2, 7, kMetaNetworkK, true);
  const ReductionPlan mp = plan_reduction(mod.scheme, ReductionObjective::MaxReduction);
  EXPECT_FALSE(mp.requires_star);
  EXPECT_EQ(plan_reduction(mod.scheme, ReductionObjective::PreferClosedPorts).connection_members,
            (std::vector<Index>{mod.scheme.index_of("D")}));
}

TEST(Planner, GlobalPlanKeepsEverything) {
  const GraphNetwork net = make_meta_network(1, 3);
  const ReductionPlan plan = plan_reduction(net.scheme, ReductionObjective::None);
  EXPECT_EQ(plan.supersystem_members.size(), 4u);
  EXPECT_TRUE(plan.connection_members.empty());
  EXPECT_EQ(plan.remaining_joins.size(), 4u);
}

TEST(Planner, ChainsReduceFully) {
  for (Index n = 2; n <= 7; ++n) {
    const GraphNetwork net = make_chain_network(n, 2, 100 + n);
    EXPECT_FALSE(has_odd_cycle(net.scheme));
    const ReductionPlan plan = plan_reduction(net.scheme, ReductionObjective::MaxReduction);
    EXPECT_TRUE(plan.fully_reduced) << n;
    EXPECT_EQ(plan.connection_members.size(), n / 2) << n;
    const EvalResult r = evaluate(net.scheme, plan);
    EXPECT_LT(rel(r.s, net.oracle()), 1e-10) << n;
  }
}

TEST(Planner, ManualPlanRejectsAdjacentMembers) {
  const GraphNetwork net = make_meta_network(1, 3);
  const Index a = net.scheme.index_of("A"), b = net.scheme.index_of("B"), c = net.scheme.index_of("C");
  EXPECT_EQ(code_of([&] { (void)manual_plan(net.scheme, {a, b}); }), ErrorCode::InvalidReduction);
  EXPECT_EQ(code_of([&] { (void)manual_plan(net.scheme, {9}); }), ErrorCode::InvalidReduction);
  const ReductionPlan ok = manual_plan(net.scheme, {a, c});
  EXPECT_TRUE(ok.requires_star);
  EXPECT_LT(rel(evaluate(net.scheme, ok).s, net.oracle()), 1e-10);
}

TEST(Planner, AllMethodsMatchGluedGraph) {
  for (bool modified : {false, true}) {
    for (Index n_bus : {1, 3, 8}) {
      const GraphNetwork net = make_meta_network(n_bus, 40 + n_bus, kMetaNetworkK, modified);
      const ComplexMatrix ref = net.oracle();
      const EvalResult global = evaluate(net.scheme, plan_reduction(net.scheme, ReductionObjective::None));
      const EvalResult reduced = evaluate(net.scheme, plan_reduction(net.scheme, ReductionObjective::MaxReduction));
      EXPECT_LT(rel(global.s, ref), 1e-10);
      EXPECT_LT(rel(reduced.s, ref), 1e-10);
      EXPECT_LT(rel(iterative_cascade(net.scheme), ref), 1e-10);
      EXPECT_EQ(global.ports, net.scheme.canonical_free_ports());
      EXPECT_EQ(reduced.ports, net.scheme.canonical_free_ports());
      EXPECT_TRUE(global.cache.has_value());
      EXPECT_EQ(reduced.cache.has_value(), modified);
    }
  }
}

TEST(Planner, RandomSchemesAgreeWithOracle) {
  Rng rng(77);
  for (int trial = 0; trial < 150; ++trial) {
    const ConnectionScheme scheme = random_scheme(rng, Kind::Contraction, trial % 3 == 0);
    const ComplexMatrix ref = oracle_connect(scheme);
    const auto plan = plan_reduction(scheme, ReductionObjective::MaxReduction);
    EXPECT_LT(rel(evaluate(scheme, plan_reduction(scheme, ReductionObjective::None)).s, ref), 1e-11) << trial;
    EXPECT_LT(rel(evaluate(scheme, plan).s, ref), 1e-11) << trial;
    EXPECT_LT(rel(iterative_cascade(scheme), ref), 1e-11) << trial;
  }
}

TEST(Planner, IterativeFoldOrderDoesNotMatter) {
  Rng rng(78);
  for (int trial = 0; trial < 60; ++trial) {
    const ConnectionScheme scheme = random_scheme(rng, Kind::Contraction, true);
    const ComplexMatrix ref = iterative_cascade(scheme);
    std::vector<Index> order(scheme.size());
    for (Index i = 0; i < order.size(); ++i) order[i] = i;
    for (Index i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    EXPECT_LT(rel(iterative_cascade(scheme, order), ref), 1e-11) << trial;
  }
  const ConnectionScheme scheme = random_scheme(rng, Kind::Contraction, false);
  const std::vector<Index> bad(scheme.size(), 0);
  EXPECT_EQ(code_of([&] { (void)iterative_cascade(scheme, bad); }), ErrorCode::InvalidArgument);
}

TEST(Planner, LosslessMembersGiveUnitaryResult) {
  Rng rng(79);
  for (int trial = 0; trial < 120; ++trial) {
    const ConnectionScheme scheme = random_scheme(rng, Kind::Unitary, trial % 2 == 0);
    const auto plan = plan_reduction(scheme, ReductionObjective::MaxReduction);
    EXPECT_LT(unitarity_defect(evaluate(scheme, plan).s), 1e-9) << trial;
    EXPECT_LT(unitarity_defect(iterative_cascade(scheme)), 1e-9) << trial;
  }
}

TEST(Planner, ReciprocalMembersGiveSymmetricResult) {
  Rng rng(80);
  for (int trial = 0; trial < 120; ++trial) {
    const ConnectionScheme scheme = random_scheme(rng, trial % 2 ? Kind::Symmetric : Kind::SymmetricUnitary, true);
    const ComplexMatrix s = evaluate(scheme, plan_reduction(scheme, ReductionObjective::None)).s;
    EXPECT_TRUE(is_symmetric(s, 1e-10)) << trial;
    EXPECT_TRUE(is_symmetric(iterative_cascade(scheme), 1e-10)) << trial;
  }
}

TEST(Planner, QuasiDeltaImpedanceConverges) {
  Rng rng(81);
  const ConnectionScheme scheme = random_scheme(rng, Kind::Contraction, false);
  const ComplexMatrix ref = oracle_connect(scheme);
  double prev = 1.0;
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    const double err_z = rel(s_from_z(evaluate_impedance(scheme, eps)), ref);
    const double err_y = rel(s_from_y(evaluate_admittance(scheme, eps)), ref);
    EXPECT_LT(err_z, prev);
    EXPECT_LT(err_y, 10 * eps);
    prev = err_z;
  }
  EXPECT_LT(prev, 1e-5);
  EXPECT_EQ(code_of([&] { (void)evaluate_impedance(scheme, 0.0); }), ErrorCode::InvalidEpsilon);
}
