#include <gtest/gtest.h>

#include "netcascade/json_io.hpp"
#include "netcascade/meta_network.hpp"
#include "netcascade/planner.hpp"
#include "netcascade/update.hpp"
#include "test_support.hpp"

using namespace netcascade;
using namespace nc_test;

namespace {

Json reparse(const Json& j) { return parse_json(j.dump(), "test"); }

std::string parse_message(std::string_view text) {
  try {
    (void)parse_json(text, "input.json");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    return e.what();
  }
  ADD_FAILURE() << "no error";
  return {};
}

}  // namespace

TEST(JsonIo, MatrixRoundTripIsExact) {
  Rng rng(1);
  const ComplexMatrix m = random_matrix(rng, 3, 4);
  EXPECT_EQ(matrix_from_json(reparse(matrix_to_json(m)), "m"), m);
  const ComplexMatrix real = matrix_from_json(parse_json("[[1, 2], [3.5, [0, -1]]]", "t"), "m");
  EXPECT_EQ(real, (ComplexMatrix{{1.0, 2.0}, {3.5, cplx(0.0, -1.0)}}));
  EXPECT_EQ(code_of([] { (void)matrix_from_json(parse_json("[[1, 2], [3]]", "t"), "m"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { (void)matrix_from_json(parse_json("[[\"x\"]]", "t"), "m"); }), ErrorCode::ParseError);
}

TEST(JsonIo, NetworkRoundTrip) {
  Rng rng(2);
  const NetworkSystem a = random_system(rng, "A", {{"N", 2}, {"C", 3}});
  const NetworkSystem b = network_from_json(reparse(network_to_json(a)), "x");
  EXPECT_EQ(b.name(), "A");
  EXPECT_EQ(b.matrix(), a.matrix());
  EXPECT_EQ(b.partition().ports("C"), a.partition().ports("C"));

  const NetworkSystem z("Z", Representation::Impedance, random_matrix(rng, 2, 2), PortPartition::trivial(2),
                        ReferenceImpedance::per_port({cplx(50, 1), cplx(75, 0)}));
  const NetworkSystem z2 = network_from_json(reparse(network_to_json(z)), "x");
  EXPECT_EQ(z2.representation(), Representation::Impedance);
  EXPECT_EQ(z2.reference().values(), z.reference().values());
}

TEST(JsonIo, NetworkDefaultsAndErrors) {
  const NetworkSystem n = network_from_json(parse_json(R"({"matrix": [[0, 1], [1, 0]]})", "t"), "through");
  EXPECT_EQ(n.name(), "through");
  EXPECT_EQ(n.representation(), Representation::Scattering);
  EXPECT_EQ(n.partition().ports("P"), (std::vector<Index>{0, 1}));
  EXPECT_EQ(n.reference().uniform_value(), cplx(50.0));
  EXPECT_EQ(code_of([] { (void)network_from_json(parse_json(R"({"ports": 3, "matrix": [[0]]})", "t"), "x"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { (void)network_from_json(parse_json(R"({"representation": "Q", "matrix": [[0]]})", "t"), "x"); }),
            ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { (void)network_from_json(parse_json(R"({"matrix": [[0]], "z0": -5})", "t"), "x"); }),
            ErrorCode::InvalidReference);
  EXPECT_EQ(code_of([] { (void)network_from_json(parse_json(R"({"name": "x"})", "t"), "x"); }), ErrorCode::ParseError);
}

TEST(JsonIo, SyntaxErrorsCarryPosition) {
  const std::string msg = parse_message("{\n  \"a\": [1, 2,\n  ]\n}");
  EXPECT_NE(msg.find("input.json"), std::string::npos) << msg;
  EXPECT_NE(msg.find("3:"), std::string::npos) << msg;
}

TEST(JsonIo, SchemeAndGraphRoundTrip) {
  const SchemeSpec spec{{"A", "B"}, {{"A", "C", "B", "C"}}, {"B"}};
  const SchemeSpec back = scheme_spec_from_json(reparse(scheme_spec_to_json(spec)));
  EXPECT_EQ(back.systems, spec.systems);
  ASSERT_EQ(back.joins.size(), 1u);
  EXPECT_EQ(back.joins[0].set_b, "C");
  EXPECT_EQ(back.embedded, spec.embedded);

  Rng rng(3);
  const auto a = random_system(rng, "A", {{"N", 1}, {"C", 2}});
  const auto b = random_system(rng, "B", {{"C", 2}});
  const ConnectionScheme scheme = build_scheme(spec, {b, a});
  EXPECT_EQ(scheme.system(0).name(), "A");
  EXPECT_EQ(code_of([&] { (void)build_scheme(spec, {a}); }), ErrorCode::ParseError);

  const Graph g = random_graph(6, 0.5, 4, cplx(3.0, 0.05));
  const Graph g2 = graph_from_json(reparse(graph_to_json(g)));
  EXPECT_EQ(g2.nodes, g.nodes);
  EXPECT_EQ(g2.external, g.external);
  ASSERT_EQ(g2.bonds.size(), g.bonds.size());
  EXPECT_EQ(g2.bonds[2].length, g.bonds[2].length);
  EXPECT_EQ(code_of([] { (void)graph_from_json(parse_json(R"({"nodes": [[0,0],[1,0]], "bonds": [[0,0,1]], "external": [0]})", "t")); }),
            ErrorCode::ParseError);
}

TEST(JsonIo, CacheRoundTripContinuesUpdates) {
  const GraphNetwork net = make_meta_network(2, 21);
  const EvalResult r = evaluate(net.scheme, plan_reduction(net.scheme, ReductionObjective::None));
  const LoadedCache loaded = cache_from_json(reparse(cache_to_json(net.scheme, *r.cache)));
  EXPECT_EQ(loaded.cache.s_bar, r.cache->s_bar);
  EXPECT_EQ(loaded.cache.s_tilde, r.cache->s_tilde);
  EXPECT_EQ(loaded.cache.sup->s_cc, r.cache->sup->s_cc);
  EXPECT_EQ(loaded.cache.con->port_order, r.cache->con->port_order);

  const Index a = net.scheme.index_of("A");
  const GraphNetwork next = regenerate_system(net, a, 5);
  const SubsystemUpdate upd{a, next.scheme.system(a).matrix()};
  EXPECT_EQ(update_subsystem(loaded.cache, upd).s, update_subsystem(*r.cache, upd).s);

  // Reduced caches keep their connection members.
  const GraphNetwork mod = make_meta_network(2, 22, kMetaNetworkK, true);
  const EvalResult red = evaluate(mod.scheme, plan_reduction(mod.scheme, ReductionObjective::MaxReduction));
  const LoadedCache lr = cache_from_json(reparse(cache_to_json(mod.scheme, *red.cache)));
  EXPECT_EQ(lr.cache.s_bar, red.cache->s_bar);
  EXPECT_EQ(lr.cache.con->matrix, red.cache->con->matrix);

  EXPECT_EQ(code_of([] { (void)cache_from_json(parse_json(R"({"format": "other"})", "t")); }), ErrorCode::ParseError);
}
