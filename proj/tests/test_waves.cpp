#include <gtest/gtest.h>

#include "netcascade/meta_network.hpp"
#include "netcascade/planner.hpp"
#include "netcascade/waves.hpp"
#include "test_support.hpp"

using namespace netcascade;
using namespace nc_test;

namespace {

std::vector<cplx> random_vector(Rng& rng, Index n) {
  std::vector<cplx> v(n);
  for (auto& x : v) x = rng.complex_normal();
  return v;
}

std::vector<cplx> mat_vec(const ComplexMatrix& m, const std::vector<cplx>& x) {
  std::vector<cplx> y(m.rows());
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) y[r] += m(r, c) * x[c];
  return y;
}

CascadeCache global_cache(const ConnectionScheme& scheme) {
  return *evaluate(scheme, plan_reduction(scheme, ReductionObjective::None)).cache;
}

ConnectionScheme pair_scheme(Rng& rng, Kind kind) {
  return ConnectionScheme({random_system(rng, "A", {{"N", 2}, {"C", 3}}, kind),
                           random_system(rng, "B", {{"C", 3}, {"D", 2}, {"N", 1}}, kind),
                           random_system(rng, "E", {{"D", 2}, {"N", 2}}, kind)},
                          {{"A", "C", "B", "C"}, {"B", "D", "E", "D"}});
}

}  // namespace

TEST(Waves, DeltaPairsShareSPotentialAndOpposeFlux) {
  Rng rng(1);
  const ConnectionScheme scheme = pair_scheme(rng, Kind::Contraction);
  const CascadeCache cache = global_cache(scheme);
  const WaveMaps& m = wave_maps(cache);
  EXPECT_EQ(m.delta_pairs.size(), 5u);
  const ComplexMatrix psi = m.psi_cn, phi = m.phi_cn;
  for (auto [i, p] : m.delta_pairs) {
    for (Index c = 0; c < psi.cols(); ++c) {
      EXPECT_NEAR(std::abs(psi(i, c) - psi(p, c)), 0.0, 1e-14);
      EXPECT_NEAR(std::abs(phi(i, c) + phi(p, c)), 0.0, 1e-14);
    }
  }
  EXPECT_EQ(&wave_maps(cache), &m);
}

TEST(Waves, ReflectionlessPortsSeeDirectTransfer) {
  // With S_CC = 0 the supersystem emits S_CN a_N at its connected ports.
  Rng rng(2);
  ComplexMatrix a = random_contraction(rng, 4), b = random_contraction(rng, 4);
  for (Index r = 2; r < 4; ++r)
    for (Index c = 2; c < 4; ++c) a(r, c) = b(r, c) = 0.0;
  const ConnectionScheme scheme({split_system("A", a, 2), split_system("B", b, 2)}, {{"A", "C", "B", "C"}});
  const CascadeCache cache = global_cache(scheme);
  const auto a_n = random_vector(rng, 4);
  const ConnectedWaves w = connected_waves(cache, a_n);
  const auto expected = mat_vec(cache.sup->s_cn, a_n);
  for (Index i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(w.a_c.values[i] - expected[i]), 0.0, 1e-15);
}

TEST(Waves, VectorAndMapAgree) {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const ConnectionScheme scheme = pair_scheme(rng, static_cast<Kind>(trial % 4));
    const CascadeCache cache = global_cache(scheme);
    const auto a_n = random_vector(rng, cache.sup->n_ports.size());
    const ConnectedWaves w = connected_waves(cache, a_n);
    const WaveMaps& m = wave_maps(cache);
    const auto psi = mat_vec(m.psi_cn, a_n), phi = mat_vec(m.phi_cn, a_n);
    for (Index i = 0; i < psi.size(); ++i) {
      EXPECT_NEAR(std::abs(psi[i] - (w.a_c.values[i] + w.b_c.values[i])), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(phi[i] - (w.a_c.values[i] - w.b_c.values[i])), 0.0, 1e-12);
    }
  }
  const CascadeCache cache = global_cache(pair_scheme(rng, Kind::Contraction));
  EXPECT_EQ(code_of([&] { (void)connected_waves(cache, std::vector<cplx>(2)); }), ErrorCode::PortSetMismatch);
}

TEST(Waves, MatchGluedGraphAtSeams) {
  for (Index n_bus : {1, 3, 6}) {
    const GraphNetwork net = make_meta_network(n_bus, 500 + n_bus);
    const CascadeCache cache = global_cache(net.scheme);
    const WaveMaps& m = wave_maps(cache);
    Rng rng(n_bus);
    const auto a_n = random_vector(rng, cache.sup->n_ports.size());
    const auto psi = mat_vec(m.psi_cn, a_n), phi = mat_vec(m.phi_cn, a_n);
    for (Index i = 0; i < m.c_ports.size(); ++i) {
      const PortRef ref = m.c_ports[i].ref;
      const std::vector<Index> node = {net.glued_node(ref)};
      const auto bonds = net.bonds_of(ref.system);
      const SubgraphInterface g = subgraph_interface(net.glued.graph, net.k, node, a_n, bonds);
      const double scale = 1.0 + std::abs(g.psi[0]);
      EXPECT_NEAR(std::abs(psi[i] - g.psi[0]) / scale, 0.0, 1e-10) << n_bus << " port " << i;
      EXPECT_NEAR(std::abs(phi[i] - g.phi[0]) / scale, 0.0, 1e-10) << n_bus << " port " << i;
    }
  }
}

TEST(Waves, LosslessMembersConservePower) {
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const ConnectionScheme scheme = pair_scheme(rng, Kind::Unitary);
    const EvalResult r = evaluate(scheme, plan_reduction(scheme, ReductionObjective::None));
    const CascadeCache& cache = *r.cache;
    const auto a_n = random_vector(rng, r.s.rows());
    const auto b_n = mat_vec(r.s, a_n);
    const WaveMaps& m = wave_maps(cache);
    const auto psi = mat_vec(m.psi_cn, a_n), phi = mat_vec(m.phi_cn, a_n);
    std::vector<double> absorbed(scheme.size(), 0.0);
    for (Index i = 0; i < r.ports.size(); ++i)
      absorbed[r.ports[i].system] += std::norm(a_n[i]) - std::norm(b_n[i]);
    for (Index i = 0; i < m.c_ports.size(); ++i)
      absorbed[m.c_ports[i].ref.system] -= (std::conj(psi[i]) * phi[i]).real();
    for (double p : absorbed) EXPECT_NEAR(p, 0.0, 1e-10) << trial;
  }
}

TEST(Waves, InternalVoltagesMatchWaveRoute) {
  Rng rng(5);
  const double z0 = kDefaultZ0, root = std::sqrt(z0);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = uniform_index(rng, 1, 3), c = uniform_index(rng, 1, 3);
    const auto s1 = random_system(rng, "A", {{"N", n}, {"C", c}});
    const ComplexMatrix s2 = random_contraction(rng, c);
    const auto cp = s1.partition().ports("C"), np = s1.partition().ports("N");
    const ComplexMatrix s_cn = select(s1.matrix(), cp, np), s_cc = select(s1.matrix(), cp, cp);
    const ComplexMatrix s12 = cascade_load_s(s1, "C", s2);

    // Wave route: a_N from the free-port drive, then b_C = (I - S_CC S2)^-1 S_CN a_N, a_C = S2 b_C.
    auto wave_route = [&](const std::vector<cplx>& a_n) {
      const ComplexMatrix lhs = ComplexMatrix::identity(c) - s_cc * s2;
      const ComplexMatrix rhs = s_cn * ComplexMatrix(n, 1, std::vector<cplx>(a_n.begin(), a_n.end()));
      const ComplexMatrix b_c = oracle_solve(lhs, rhs);
      const ComplexMatrix a_c = s2 * b_c;
      InternalVJ vj;
      for (Index i = 0; i < c; ++i) {
        vj.v_c.push_back(root * (a_c(i, 0) + b_c(i, 0)));
        vj.j_c.push_back((a_c(i, 0) - b_c(i, 0)) / root);
      }
      return vj;
    };

    // Impedance drive J_N: the loaded port voltages follow from Z12, then a = (V + z0 J) / (2 root).
    const auto j_n = random_vector(rng, n);
    const auto v_n = mat_vec(z_from_s(s12), j_n);
    std::vector<cplx> a_n(n);
    for (Index i = 0; i < n; ++i) a_n[i] = (v_n[i] + z0 * j_n[i]) / (2.0 * root);
    const InternalVJ ref = wave_route(a_n);
    const InternalVJ z = internal_vj(Representation::Impedance, s1, "C", z_from_s(s2), j_n);
    for (Index i = 0; i < c; ++i) {
      EXPECT_NEAR(std::abs(z.v_c[i] - ref.v_c[i]) / (1 + std::abs(ref.v_c[i])), 0.0, 1e-9) << trial;
      EXPECT_NEAR(std::abs(z.j_c[i] - ref.j_c[i]) / (1 + std::abs(ref.j_c[i])), 0.0, 1e-9) << trial;
    }

    // Admittance drive V_N.
    const auto v_drive = random_vector(rng, n);
    const auto j_resp = mat_vec(y_from_s(s12), v_drive);
    for (Index i = 0; i < n; ++i) a_n[i] = (v_drive[i] + z0 * j_resp[i]) / (2.0 * root);
    const InternalVJ ref_y = wave_route(a_n);
    const InternalVJ y = internal_vj(Representation::Admittance, s1, "C", y_from_s(s2), v_drive);
    for (Index i = 0; i < c; ++i) {
      EXPECT_NEAR(std::abs(y.v_c[i] - ref_y.v_c[i]) / (1 + std::abs(ref_y.v_c[i])), 0.0, 1e-9) << trial;
      EXPECT_NEAR(std::abs(y.j_c[i] - ref_y.j_c[i]) / (1 + std::abs(ref_y.j_c[i])), 0.0, 1e-9) << trial;
    }
  }
  Rng r2(6);
  const auto s1 = random_system(r2, "A", {{"N", 1}, {"C", 1}});
  EXPECT_EQ(code_of([&] { (void)internal_vj(Representation::Scattering, s1, "C", ComplexMatrix{{1.0}}, std::vector<cplx>{1.0}); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { (void)internal_vj(Representation::Impedance, s1, "C", ComplexMatrix{{1.0}}, std::vector<cplx>(2)); }),
            ErrorCode::PortSetMismatch);
}
