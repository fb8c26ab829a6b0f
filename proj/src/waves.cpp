#include "netcascade/waves.hpp"

#include <algorithm>

#include "netcascade/error.hpp"
#include "netcascade/linalg/lu.hpp"

namespace netcascade {

namespace {

ComplexMatrix column(std::span<const cplx> v) {
  return ComplexMatrix(v.size(), 1, std::vector<cplx>(v.begin(), v.end()));
}

std::vector<Index> positions(Index n) {
  std::vector<Index> p(n);
  for (Index i = 0; i < n; ++i) p[i] = i;
  return p;
}

// a-side map from the b-side map: S_con^-1 B. For a permutation this is a row
// swap; otherwise S_con^-1 S_bar = I + S_CC S_bar avoids inverting S_con.
ComplexMatrix a_from_b(const CascadeCache& cache, const ComplexMatrix& b, const ComplexMatrix& s_cn_x) {
  if (cache.con->is_pure_permutation) {
    ComplexMatrix out(b.rows(), b.cols());
    for (Index i = 0; i < b.rows(); ++i) std::copy_n(b.view().row(cache.con->partner[i]), b.cols(), out.view().row(i));
    return out;
  }
  ComplexMatrix out = s_cn_x;
  gemm(1.0, cache.sup->s_cc, b, 1.0, out.view());
  return out;
}

}  // namespace

std::shared_ptr<detail::LazyWaveMaps> make_lazy_wave_maps() { return std::make_shared<detail::LazyWaveMaps>(); }

ConnectedWaves connected_waves(const CascadeCache& cache, std::span<const cplx> a_n) {
  const Supersystem& sup = *cache.sup;
  if (a_n.size() != sup.n_ports.size()) fail(ErrorCode::PortSetMismatch, "a_N length does not match the free ports");
  const Index nc = sup.c_ports.size();
  const ComplexMatrix x = multiply(sup.s_cn, column(a_n));
  const ComplexMatrix b = nc ? multiply(cache.s_bar, x) : ComplexMatrix(0, 1);
  const ComplexMatrix a = a_from_b(cache, b, x);
  ConnectedWaves out;
  out.a_c = {positions(nc), a.entries()};
  out.b_c = {positions(nc), b.entries()};
  return out;
}

const WaveMaps& wave_maps(const CascadeCache& cache) {
  if (!cache.waves) fail(ErrorCode::InvalidArgument, "cache has no wave map slot");
  std::call_once(cache.waves->once, [&] {
    const Supersystem& sup = *cache.sup;
    const Index nc = sup.c_ports.size();
    WaveMaps m;
    const ComplexMatrix b = nc ? times_s_cn(sup, cache.s_bar) : ComplexMatrix(0, sup.n_ports.size());
    const ComplexMatrix a = a_from_b(cache, b, sup.s_cn);
    m.psi_cn = a + b;
    m.phi_cn = a - b;
    m.c_ports = sup.c_ports;
    std::vector<PortRef> refs = sup.c_refs();
    for (Index i = 0; i < nc; ++i) {
      const ConnectedPort& cp = sup.c_ports[i];
      if (!cp.first_side) continue;
      auto it = std::find(refs.begin(), refs.end(), cp.partner);
      if (it != refs.end()) m.delta_pairs.emplace_back(i, static_cast<Index>(it - refs.begin()));
    }
    cache.waves->maps = std::move(m);
  });
  return *cache.waves->maps;
}

InternalVJ internal_vj(Representation rep, const NetworkSystem& sys1, std::string_view c, const ComplexMatrix& load,
                       std::span<const cplx> drive) {
  if (rep == Representation::Scattering) fail(ErrorCode::InvalidArgument, "internal_vj needs Z or Y");
  const NetworkSystem s = sys1.converted(rep);
  const auto cp = s.partition().ports(c);
  std::vector<bool> in(s.ports(), false);
  for (Index p : cp) in[p] = true;
  std::vector<Index> np;
  for (Index p = 0; p < s.ports(); ++p) {
    if (!in[p]) np.push_back(p);
  }
  if (drive.size() != np.size()) fail(ErrorCode::PortSetMismatch, "drive length does not match the free ports");
  if (!load.is_square() || load.rows() != cp.size()) fail(ErrorCode::PortSetMismatch, "load size mismatch");
  const MemberBlocks b = member_blocks(s.matrix(), np, cp);
  ComplexMatrix x;
  try {
    x = solve_linear(b.cc + load, multiply(b.cn, column(drive)));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularMatrix) throw;
    throw Error(ErrorCode::SingularInteraction, "X_CC + X2 is singular", e.condition());
  }
  const ComplexMatrix loaded = multiply(load, x);
  InternalVJ out;
  // Impedance: J_C = -X, V_C = Z2 X.  Admittance: V_C = -X, J_C = Y2 X.
  std::vector<cplx> neg = (-x).entries();
  if (rep == Representation::Impedance) {
    out.j_c = std::move(neg);
    out.v_c = loaded.entries();
  } else {
    out.v_c = std::move(neg);
    out.j_c = loaded.entries();
  }
  return out;
}

}  // namespace netcascade
