#include <gtest/gtest.h>

#include "netcascade/connection.hpp"
#include "netcascade/error.hpp"
#include "test_support.hpp"

using namespace netcascade;
using namespace nc_test;

namespace {

ConnectionScheme chain3(Rng& rng) {
  return ConnectionScheme({random_system(rng, "A", {{"N", 1}, {"R", 2}}), random_system(rng, "B", {{"L", 2}, {"R", 2}, {"F", 1}}),
                           random_system(rng, "C", {{"L", 2}, {"N", 1}})},
                          {{"A", "R", "B", "L"}, {"B", "R", "C", "L"}});
}

}  // namespace

TEST(DeltaSystem, DefaultLayoutIsSetBySet) {
  const std::vector<JoinedSets> pairs = {{{{0, 0}, {0, 1}}, {{1, 0}, {1, 1}}}};
  const ConnectionSystem con = delta_system(pairs);
  EXPECT_TRUE(con.is_pure_permutation);
  EXPECT_EQ(con.matrix, permutation_swap(2));
  EXPECT_EQ(con.port_order[2], (PortRef{1, 0}));
  EXPECT_EQ(con.partner, (std::vector<Index>{2, 3, 0, 1}));
  EXPECT_TRUE(con.free_ports.empty());
}

TEST(DeltaSystem, CustomOrderAndErrors) {
  const std::vector<JoinedSets> pairs = {{{{0, 0}}, {{1, 0}}}, {{{0, 1}}, {{1, 1}}}};
  const std::vector<PortRef> order = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  const ConnectionSystem con = delta_system(pairs, order);
  EXPECT_EQ(con.matrix(0, 3), cplx(1.0));
  EXPECT_EQ(con.matrix(1, 2), cplx(1.0));
  EXPECT_EQ(code_of([&] { (void)delta_system(std::vector<JoinedSets>{{{{0, 0}}, {{1, 0}, {1, 1}}}}); }),
            ErrorCode::PortSetMismatch);
  const std::vector<PortRef> missing = {{0, 0}, {0, 1}, {1, 1}};
  EXPECT_EQ(code_of([&] { (void)delta_system(pairs, missing); }), ErrorCode::PortOrderMismatch);
  const std::vector<PortRef> extra = {{0, 0}, {0, 1}, {1, 1}, {1, 0}, {2, 0}};
  EXPECT_EQ(code_of([&] { (void)delta_system(pairs, extra); }), ErrorCode::PortOrderMismatch);
  const std::vector<PortRef> twice = {{0, 0}, {0, 0}, {1, 1}, {1, 0}};
  EXPECT_EQ(code_of([&] { (void)delta_system(pairs, twice); }), ErrorCode::PortOrderMismatch);
}

TEST(Scheme, Validation) {
  Rng rng(41);
  const auto a = random_system(rng, "A", {{"N", 1}, {"C", 2}});
  const auto b = random_system(rng, "B", {{"C", 2}, {"D", 1}});
  EXPECT_EQ(code_of([&] { ConnectionScheme({a, a}, {}); }), ErrorCode::InvalidScheme);
  EXPECT_EQ(code_of([&] { ConnectionScheme({a, b}, {{"A", "C", "B", "X"}}); }), ErrorCode::UnknownPortSet);
  EXPECT_EQ(code_of([&] { ConnectionScheme({a, b}, {{"A", "C", "Q", "C"}}); }), ErrorCode::InvalidScheme);
  EXPECT_EQ(code_of([&] { ConnectionScheme({a, b}, {{"A", "N", "B", "C"}}); }), ErrorCode::PortSetMismatch);
  EXPECT_EQ(code_of([&] { ConnectionScheme({a, b}, {{"A", "C", "B", "C"}, {"A", "N", "B", "D"}, {"A", "N", "B", "D"}}); }),
            ErrorCode::InvalidScheme);
  EXPECT_EQ(code_of([&] { ConnectionScheme({a, b}, {{"A", "C", "B", "C"}}, {"A", "B"}); }), ErrorCode::InvalidReduction);
  const ConnectionScheme ok({a, b}, {{"A", "C", "B", "C"}});
  EXPECT_EQ(ok.free_ports(0), (std::vector<Index>{0}));
  EXPECT_EQ(ok.connected_port_count(1), 2u);
  EXPECT_TRUE(ok.adjacent(0, 1));
  EXPECT_EQ(ok.canonical_free_ports(), (std::vector<PortRef>{{0, 0}, {1, 2}}));
}

TEST(Scheme, ConnectedOrderingFollowsMembersThenJoins) {
  Rng rng(42);
  const ConnectionScheme s = chain3(rng);
  const auto order = s.connected_ordering({2, 0, 1});
  ASSERT_EQ(order.size(), 8u);
  // A.R, then B.L (join 0, second side), B.R (join 1, first side), then C.L.
  EXPECT_EQ(order[0].ref, (PortRef{0, 1}));
  EXPECT_TRUE(order[0].first_side);
  EXPECT_EQ(order[0].partner, (PortRef{1, 0}));
  EXPECT_EQ(order[2].ref, (PortRef{1, 0}));
  EXPECT_FALSE(order[2].first_side);
  EXPECT_EQ(order[4].ref, (PortRef{1, 2}));
  EXPECT_EQ(order[4].join, 1u);
  EXPECT_EQ(order[7].ref, (PortRef{2, 1}));
}

TEST(Scheme, SelfJoinOrdering) {
  Rng rng(43);
  const auto a = random_system(rng, "A", {{"N", 1}, {"X", 2}, {"Y", 2}});
  const ConnectionScheme s({a}, {{"A", "X", "A", "Y"}});
  EXPECT_TRUE(s.has_self_join(0));
  const auto order = s.connected_ordering({0});
  ASSERT_EQ(order.size(), 4u);
  EXPECT_TRUE(order[0].first_side);
  EXPECT_FALSE(order[2].first_side);
  EXPECT_EQ(order[2].partner, (PortRef{0, 1}));
  EXPECT_EQ(code_of([&] { ConnectionScheme({a}, {{"A", "X", "A", "Y"}}, {"A"}); }), ErrorCode::InvalidReduction);
}

TEST(Embed, PlacesEmbeddedMatrixAtPartnerPositions) {
  Rng rng(44);
  const ConnectionScheme s = chain3(rng);
  const ConnectionSystem con = embed_connection(s, {1});
  // Members A and C: C order A.R0, A.R1, C.L0, C.L1; B's free port appended.
  ASSERT_EQ(con.port_order.size(), 4u);
  ASSERT_EQ(con.free_ports, (std::vector<PortRef>{{1, 4}}));
  EXPECT_FALSE(con.is_pure_permutation);
  const ComplexMatrix& sb = s.system(1).matrix();
  const Index at[5] = {0, 1, 2, 3, 4};  // B's port p sits at connection index at[p]
  for (Index p = 0; p < 5; ++p)
    for (Index q = 0; q < 5; ++q) EXPECT_EQ(con.matrix(at[p], at[q]), sb(p, q));
  EXPECT_EQ(code_of([&] { (void)embed_connection(s, {0, 1}); }), ErrorCode::InvalidReduction);
}

TEST(Embed, EmptyEmbeddingIsTheDeltaSystem) {
  Rng rng(45);
  const ConnectionScheme s = chain3(rng);
  const ConnectionSystem con = delta_system(s);
  EXPECT_TRUE(con.is_pure_permutation);
  EXPECT_EQ(con.matrix, con.matrix.transpose());
  EXPECT_EQ(con.matrix * con.matrix, ComplexMatrix::identity(8));
  for (Index i = 0; i < 8; ++i) EXPECT_EQ(con.matrix(i, con.partner[i]), cplx(1.0));
}

TEST(QuasiDelta, ConvertsScaledPermutation) {
  Rng rng(46);
  const ConnectionSystem d = delta_system(chain3(rng));
  for (double eps : {1e-2, 1e-5, 1e-8}) {
    const ConnectionSystem z = quasi_delta(Representation::Impedance, d, eps);
    EXPECT_EQ(z.representation, Representation::Impedance);
    EXPECT_TRUE(is_symmetric(z.matrix, 1e-14));
    EXPECT_LT(rel(s_from_z(z.matrix), (1.0 - eps) * d.matrix), 1e-6);
    const ConnectionSystem y = quasi_delta(Representation::Admittance, d, eps);
    EXPECT_LT(rel(s_from_y(y.matrix), (1.0 - eps) * d.matrix), 1e-6);
  }
  EXPECT_EQ(code_of([&] { (void)quasi_delta(Representation::Impedance, d, 0.0); }), ErrorCode::InvalidEpsilon);
  EXPECT_EQ(code_of([&] { (void)quasi_delta(Representation::Impedance, d, 1.0); }), ErrorCode::InvalidEpsilon);
}
