#include "netcascade/cascade.hpp"

#include <algorithm>
#include <cmath>

#include "netcascade/error.hpp"
#include "netcascade/linalg/lu.hpp"
#include "netcascade/waves.hpp"

namespace netcascade {

namespace {

std::vector<Index> complement(const std::vector<Index>& set, Index total) {
  std::vector<bool> in(total, false);
  for (Index p : set) in.at(p) = true;
  std::vector<Index> out;
  for (Index p = 0; p < total; ++p) {
    if (!in[p]) out.push_back(p);
  }
  return out;
}

LuFactorization factor_interaction(ComplexMatrix a, const char* what) {
  try {
    return LuFactorization(std::move(a));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularMatrix) throw;
    throw Error(ErrorCode::SingularInteraction, what, e.condition());
  }
}

// Deterministic dense probe vector for cheap residual checks.
ComplexMatrix probe(Index n) {
  ComplexMatrix x(n, 1);
  for (Index i = 0; i < n; ++i) x(i, 0) = cplx(1.0 / (1.0 + i), std::cos(0.7 * static_cast<double>(i)));
  return x;
}

// S_con * X for the connection restricted to its C ports.
ComplexMatrix apply_con(const ConnectionSystem& con, const ComplexMatrix& x) {
  if (con.is_pure_permutation) {
    ComplexMatrix out(x.rows(), x.cols());
    for (Index i = 0; i < x.rows(); ++i) std::copy_n(x.view().row(con.partner[i]), x.cols(), out.view().row(i));
    return out;
  }
  return multiply(con.matrix, x);
}

// (I - S_con S_CC) X - S_con Y
ComplexMatrix interaction_residual(const Supersystem& sup, const ConnectionSystem& con, const ComplexMatrix& x,
                                   const ComplexMatrix& y) {
  ComplexMatrix r = x;
  r -= apply_con(con, multiply(sup.s_cc, x));
  r -= apply_con(con, y);
  return r;
}

}  // namespace

const MemberRange& Supersystem::range_of(Index system) const {
  for (const auto& r : ranges) {
    if (r.system == system) return r;
  }
  fail(ErrorCode::InvalidUpdate, "system " + std::to_string(system) + " is not a supersystem member");
}

Index Supersystem::system_by_name(const std::string& name) const {
  for (Index k = 0; k < members.size(); ++k) {
    if (member_names[k] == name) return members[k];
  }
  fail(ErrorCode::InvalidUpdate, "'" + name + "' is not a supersystem member");
}

std::vector<PortRef> Supersystem::c_refs() const {
  std::vector<PortRef> out;
  out.reserve(c_ports.size());
  for (const auto& c : c_ports) out.push_back(c.ref);
  return out;
}

NetworkSystem Supersystem::as_network_system(std::string name) const {
  const Index nn = n_ports.size(), nc = c_ports.size();
  ComplexMatrix m(nn + nc, nn + nc);
  copy_into(s_nn, m.block(0, 0, nn, nn));
  copy_into(s_nc, m.block(0, nn, nn, nc));
  copy_into(s_cn, m.block(nn, 0, nc, nn));
  copy_into(s_cc, m.block(nn, nn, nc, nc));
  std::vector<Index> n_idx(nn), c_idx(nc);
  for (Index i = 0; i < nn; ++i) n_idx[i] = i;
  for (Index i = 0; i < nc; ++i) c_idx[i] = nn + i;
  std::vector<PortPartition::Set> sets;
  if (nn) sets.emplace_back("N", std::move(n_idx));
  if (nc) sets.emplace_back("C", std::move(c_idx));
  return NetworkSystem(std::move(name), representation, std::move(m), PortPartition(nn + nc, std::move(sets)));
}

MemberBlocks member_blocks(const ComplexMatrix& s, const std::vector<Index>& n_ports,
                           const std::vector<Index>& c_ports) {
  return {select(s, n_ports, n_ports), select(s, n_ports, c_ports), select(s, c_ports, n_ports),
          select(s, c_ports, c_ports)};
}

Supersystem assemble_supersystem(const ConnectionScheme& scheme, const std::vector<Index>& members,
                                 Representation rep) {
  Supersystem sup;
  sup.representation = rep;
  sup.members = members;
  std::sort(sup.members.begin(), sup.members.end());
  sup.members.erase(std::unique(sup.members.begin(), sup.members.end()), sup.members.end());
  sup.c_ports = scheme.connected_ordering(sup.members);
  for (Index m : sup.members) sup.member_names.push_back(scheme.system(m).name());

  Index c_cursor = 0;
  std::vector<std::vector<Index>> local_n, local_c;
  for (Index m : sup.members) {
    MemberRange r;
    r.system = m;
    r.n_begin = sup.n_ports.size();
    auto free = scheme.free_ports(m);
    for (Index p : free) sup.n_ports.push_back({m, p});
    r.n_end = sup.n_ports.size();
    r.c_begin = c_cursor;
    std::vector<Index> conn;
    while (c_cursor < sup.c_ports.size() && sup.c_ports[c_cursor].ref.system == m) {
      conn.push_back(sup.c_ports[c_cursor].ref.port);
      ++c_cursor;
    }
    r.c_end = c_cursor;
    sup.ranges.push_back(r);
    local_n.push_back(std::move(free));
    local_c.push_back(std::move(conn));
  }

  const Index nn = sup.n_ports.size(), nc = sup.c_ports.size();
  sup.s_nn = ComplexMatrix(nn, nn);
  sup.s_nc = ComplexMatrix(nn, nc);
  sup.s_cn = ComplexMatrix(nc, nn);
  sup.s_cc = ComplexMatrix(nc, nc);
  for (Index k = 0; k < sup.members.size(); ++k) {
    const MemberRange& r = sup.ranges[k];
    const ComplexMatrix s = scheme.system(r.system).converted(rep).matrix();
    const MemberBlocks b = member_blocks(s, local_n[k], local_c[k]);
    const Index kn = r.n_end - r.n_begin, kc = r.c_end - r.c_begin;
    copy_into(b.nn, sup.s_nn.block(r.n_begin, r.n_begin, kn, kn));
    copy_into(b.nc, sup.s_nc.block(r.n_begin, r.c_begin, kn, kc));
    copy_into(b.cn, sup.s_cn.block(r.c_begin, r.n_begin, kc, kn));
    copy_into(b.cc, sup.s_cc.block(r.c_begin, r.c_begin, kc, kc));
  }
  return sup;
}

ComplexMatrix times_s_cn(const Supersystem& sup, ConstMatrixView left) {
  if (left.cols != sup.c_ports.size()) fail(ErrorCode::InvalidBlock, "times_s_cn: column count mismatch");
  ComplexMatrix out(left.rows, sup.n_ports.size());
  for (const auto& r : sup.ranges) {
    const Index kn = r.n_end - r.n_begin, kc = r.c_end - r.c_begin;
    if (kn == 0 || kc == 0) continue;
    gemm(1.0, left.block(0, r.c_begin, left.rows, kc), sup.s_cn.block(r.c_begin, r.n_begin, kc, kn), 0.0,
         out.block(0, r.n_begin, left.rows, kn));
  }
  return out;
}

ComplexMatrix s_nc_times(const Supersystem& sup, ConstMatrixView right) {
  if (right.rows != sup.c_ports.size()) fail(ErrorCode::InvalidBlock, "s_nc_times: row count mismatch");
  ComplexMatrix out(sup.n_ports.size(), right.cols);
  for (const auto& r : sup.ranges) {
    const Index kn = r.n_end - r.n_begin, kc = r.c_end - r.c_begin;
    if (kn == 0 || kc == 0) continue;
    gemm(1.0, sup.s_nc.block(r.n_begin, r.c_begin, kn, kc), right.block(r.c_begin, 0, kc, right.cols), 0.0,
         out.block(r.n_begin, 0, kn, right.cols));
  }
  return out;
}

double CascadeCache::residual() const {
  if (s_bar.empty()) return 0.0;
  const ComplexMatrix r = interaction_residual(*sup, *con, s_bar, ComplexMatrix::identity(s_bar.rows()));
  return frobenius_norm(r);
}

ConnectResult connect_supersystem(const Supersystem& sup, const ConnectionSystem& con, bool keep_cache) {
  if (sup.representation != Representation::Scattering || con.representation != Representation::Scattering) {
    fail(ErrorCode::InvalidArgument, "connect_supersystem works on scattering matrices");
  }
  if (!con.free_ports.empty()) {
    fail(ErrorCode::InvalidArgument, "connection system has free ports; use the star product path");
  }
  if (con.port_order != sup.c_refs()) {
    fail(ErrorCode::PortOrderMismatch, "connection system ports do not follow the supersystem's C order");
  }
  const Index nc = sup.c_ports.size();
  ConnectResult out;
  out.ports = sup.n_ports;
  auto shared_sup = std::make_shared<const Supersystem>(sup);
  auto shared_con = std::make_shared<const ConnectionSystem>(con);

  if (nc == 0) {
    out.s = sup.s_nn;
    if (keep_cache) out.cache = CascadeCache{shared_sup, shared_con, {}, out.s, 0.0, 0, 0, make_lazy_wave_maps()};
    return out;
  }

  // Interaction matrix in inverse-free form: (I - S_con S_CC) S_bar = S_con.
  // For a permutation P this is P (P - S_CC), so we factor P - S_CC directly.
  ComplexMatrix a;
  if (con.is_pure_permutation) {
    a = -sup.s_cc;
    for (Index i = 0; i < nc; ++i) a(i, con.partner[i]) += 1.0;
  } else {
    a = ComplexMatrix::identity(nc);
    gemm(-1.0, con.matrix, sup.s_cc, 1.0, a.view());
  }
  const LuFactorization lu = factor_interaction(std::move(a), "interaction matrix is singular");

  ComplexMatrix w;
  if (keep_cache) {
    ComplexMatrix s_bar = con.is_pure_permutation ? lu.inverse() : lu.solve(con.matrix);
    w = times_s_cn(sup, s_bar);
    out.s = sup.s_nn + s_nc_times(sup, w);
    const ComplexMatrix x = probe(nc);
    const ComplexMatrix sx = multiply(s_bar, x);
    const ComplexMatrix rhs = apply_con(con, x);
    const double res = frobenius_norm(interaction_residual(sup, con, sx, x)) /
                       std::max(frobenius_norm(rhs), 1e-300);
    out.cache = CascadeCache{shared_sup, shared_con, std::move(s_bar), out.s, res, 0, 0, make_lazy_wave_maps()};
  } else {
    w = con.is_pure_permutation ? lu.solve(sup.s_cn) : lu.solve(multiply(con.matrix, sup.s_cn));
    out.s = sup.s_nn + s_nc_times(sup, w);
  }
  return out;
}

ComplexMatrix cascade_load_s(const NetworkSystem& s1, std::string_view c, const ComplexMatrix& s2) {
  const NetworkSystem s = s1.converted(Representation::Scattering);
  const auto cp = s.partition().ports(c);
  const auto np = complement(cp, s.ports());
  if (!s2.is_square() || s2.rows() != cp.size()) {
    fail(ErrorCode::PortSetMismatch, "load size does not match the connected port count");
  }
  const MemberBlocks b = member_blocks(s.matrix(), np, cp);
  ComplexMatrix a = ComplexMatrix::identity(cp.size());
  gemm(-1.0, s2, b.cc, 1.0, a.view());
  const LuFactorization lu = factor_interaction(std::move(a), "I - S2 S_CC is singular");
  return b.nn + b.nc * lu.solve(s2 * b.cn);
}

namespace {

ComplexMatrix cascade_load_zy(const NetworkSystem& sys, std::string_view c, const ComplexMatrix& load,
                              Representation rep) {
  const NetworkSystem s = sys.converted(rep);
  const auto cp = s.partition().ports(c);
  const auto np = complement(cp, s.ports());
  if (!load.is_square() || load.rows() != cp.size()) {
    fail(ErrorCode::PortSetMismatch, "load size does not match the connected port count");
  }
  const MemberBlocks b = member_blocks(s.matrix(), np, cp);
  const LuFactorization lu = factor_interaction(b.cc + load, "X_CC + X2 is singular");
  return b.nn - b.nc * lu.solve(b.cn);
}

void require_star_shapes(const TwoPortBlocks& u, const TwoPortBlocks& v) {
  const Index c = u.cc.rows;
  auto ok = [&](const TwoPortBlocks& x) {
    const Index n = x.nn.rows;
    return x.nn.cols == n && x.nc.rows == n && x.nc.cols == c && x.cn.rows == c && x.cn.cols == n &&
           x.cc.rows == c && x.cc.cols == c;
  };
  if (!ok(u) || !ok(v)) fail(ErrorCode::PortSetMismatch, "star product blocks do not conform");
}

ComplexMatrix assemble_two_by_two(const ComplexMatrix& uu, const ComplexMatrix& uv, const ComplexMatrix& vu,
                                  const ComplexMatrix& vv) {
  const Index nu = uu.rows(), nv = vv.rows();
  ComplexMatrix out(nu + nv, nu + nv);
  copy_into(uu, out.block(0, 0, nu, nu));
  copy_into(uv, out.block(0, nu, nu, nv));
  copy_into(vu, out.block(nu, 0, nv, nu));
  copy_into(vv, out.block(nu, nu, nv, nv));
  return out;
}

struct SplitSystem {
  ComplexMatrix nn, nc, cn, cc;
  TwoPortBlocks view() const { return {nn, nc, cn, cc}; }
};

SplitSystem split(const NetworkSystem& s, std::string_view c) {
  const auto cp = s.partition().ports(c);
  const auto np = complement(cp, s.ports());
  MemberBlocks b = member_blocks(s.matrix(), np, cp);
  return {std::move(b.nn), std::move(b.nc), std::move(b.cn), std::move(b.cc)};
}

}  // namespace

ComplexMatrix cascade_load_z(const NetworkSystem& z1, std::string_view c, const ComplexMatrix& z2) {
  return cascade_load_zy(z1, c, z2, Representation::Impedance);
}

ComplexMatrix cascade_load_y(const NetworkSystem& y1, std::string_view c, const ComplexMatrix& y2) {
  return cascade_load_zy(y1, c, y2, Representation::Admittance);
}

ComplexMatrix star_product(const TwoPortBlocks& u, const TwoPortBlocks& v, const StarOptions& opt,
                           StarDiagnostics* diag) {
  require_star_shapes(u, v);
  const Index c = u.cc.rows;
  const ComplexMatrix ucc(u.cc), vcc(v.cc);
  const ComplexMatrix eye = ComplexMatrix::identity(c);

  const ComplexMatrix x_uv = factor_interaction(ucc * vcc - eye, "S^U_CC S^V_CC - I is singular").inverse();
  const bool symmetric = opt.exploit_symmetry && is_symmetric(ucc, opt.symmetry_tolerance) &&
                         is_symmetric(vcc, opt.symmetry_tolerance);
  const ComplexMatrix x_vu = symmetric ? x_uv.transpose()
                                       : factor_interaction(vcc * ucc - eye, "S^V_CC S^U_CC - I is singular").inverse();

  const ComplexMatrix a1 = multiply(x_uv, u.cn);
  const ComplexMatrix b1 = multiply(x_vu, v.cn);
  ComplexMatrix r_uu(u.nn);
  gemm(-1.0, u.nc, multiply(v.cc, a1), 1.0, r_uu.view());
  ComplexMatrix r_vv(v.nn);
  gemm(-1.0, v.nc, multiply(u.cc, b1), 1.0, r_vv.view());
  const ComplexMatrix r_uv = -multiply(u.nc, b1);
  const ComplexMatrix r_vu = -multiply(v.nc, a1);

  if (diag) *diag = StarDiagnostics{x_uv, x_vu, symmetric};
  return assemble_two_by_two(r_uu, r_uv, r_vu, r_vv);
}

ComplexMatrix redheffer_star(const NetworkSystem& u, const NetworkSystem& v, std::string_view cu,
                             std::string_view cv, const StarOptions& opt, StarDiagnostics* diag) {
  const SplitSystem su = split(u.converted(Representation::Scattering), cu);
  const SplitSystem sv = split(v.converted(Representation::Scattering), cv);
  return star_product(su.view(), sv.view(), opt, diag);
}

ComplexMatrix star_product_z(const TwoPortBlocks& u, const TwoPortBlocks& v) {
  require_star_shapes(u, v);
  const LuFactorization lu = factor_interaction(ComplexMatrix(u.cc) + ComplexMatrix(v.cc),
                                                "Z^U_CC + Z^V_CC is singular");
  const ComplexMatrix pu = lu.solve(ComplexMatrix(u.cn));
  const ComplexMatrix pv = lu.solve(ComplexMatrix(v.cn));
  ComplexMatrix r_uu(u.nn), r_vv(v.nn);
  gemm(-1.0, u.nc, pu, 1.0, r_uu.view());
  gemm(-1.0, v.nc, pv, 1.0, r_vv.view());
  return assemble_two_by_two(r_uu, multiply(u.nc, pv), multiply(v.nc, pu), r_vv);
}

ComplexMatrix redheffer_star_z(const NetworkSystem& u, const NetworkSystem& v, std::string_view cu,
                               std::string_view cv) {
  const SplitSystem su = split(u.converted(Representation::Impedance), cu);
  const SplitSystem sv = split(v.converted(Representation::Impedance), cv);
  return star_product_z(su.view(), sv.view());
}

}  // namespace netcascade
