#include "netcascade/update.hpp"

#include <algorithm>

#include "netcascade/error.hpp"
#include "netcascade/linalg/lu.hpp"
#include "netcascade/waves.hpp"

namespace netcascade {

UpdateResult update_subsystem(const CascadeCache& cache, const SubsystemUpdate& upd, const UpdateOptions& opt) {
  if (!cache.sup || !cache.con) fail(ErrorCode::InvalidUpdate, "cache is empty");
  const Supersystem& old = *cache.sup;
  const MemberRange& r = old.range_of(upd.system);
  const Index kn = r.n_end - r.n_begin, kc = r.c_end - r.c_begin;
  if (!upd.matrix.is_square() || upd.matrix.rows() != kn + kc) {
    fail(ErrorCode::InvalidUpdate, "updated matrix must keep the port count (" + std::to_string(kn + kc) + ")");
  }
  if (!upd.matrix.all_finite()) fail(ErrorCode::InvalidUpdate, "updated matrix has non-finite entries");

  std::vector<Index> local_n(kn), local_c(kc);
  for (Index i = 0; i < kn; ++i) local_n[i] = old.n_ports[r.n_begin + i].port;
  for (Index i = 0; i < kc; ++i) local_c[i] = old.c_ports[r.c_begin + i].ref.port;
  const MemberBlocks nb = member_blocks(upd.matrix, local_n, local_c);

  auto sup = std::make_shared<Supersystem>(old);
  copy_into(nb.nn, sup->s_nn.block(r.n_begin, r.n_begin, kn, kn));
  copy_into(nb.nc, sup->s_nc.block(r.n_begin, r.c_begin, kn, kc));
  copy_into(nb.cn, sup->s_cn.block(r.c_begin, r.n_begin, kc, kn));
  copy_into(nb.cc, sup->s_cc.block(r.c_begin, r.c_begin, kc, kc));

  UpdateResult out;
  out.delta_s_cc = nb.cc - ComplexMatrix(old.s_cc.block(r.c_begin, r.c_begin, kc, kc));
  out.aux_dimension = kc;
  const bool delta_zero = std::all_of(out.delta_s_cc.entries().begin(), out.delta_s_cc.entries().end(),
                                      [](const cplx& z) { return z == cplx(0.0); });

  ComplexMatrix s_bar;
  if (delta_zero) {
    s_bar = cache.s_bar;
  } else {
    const Index nc = old.c_ports.size();
    ComplexMatrix m = ComplexMatrix::identity(kc);
    gemm(-1.0, out.delta_s_cc, cache.s_bar.block(r.c_begin, r.c_begin, kc, kc), 1.0, m.view());
    ComplexMatrix k;
    try {
      k = LuFactorization(std::move(m)).solve(out.delta_s_cc);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularMatrix) throw;
      throw Error(ErrorCode::SingularUpdate, "I - dS S_bar[Cj,Cj] is singular", e.condition());
    }
    const ComplexMatrix t = multiply(k, cache.s_bar.block(r.c_begin, 0, kc, nc));
    s_bar = cache.s_bar;
    gemm(1.0, cache.s_bar.block(0, r.c_begin, nc, kc), t, 1.0, s_bar.view());
  }

  const bool unchanged = delta_zero && ComplexMatrix(old.s_nn.block(r.n_begin, r.n_begin, kn, kn)) == nb.nn &&
                         ComplexMatrix(old.s_nc.block(r.n_begin, r.c_begin, kn, kc)) == nb.nc &&
                         ComplexMatrix(old.s_cn.block(r.c_begin, r.n_begin, kc, kn)) == nb.cn;
  out.s = unchanged ? cache.s_tilde : sup->s_nn + s_nc_times(*sup, times_s_cn(*sup, s_bar));

  out.cache = CascadeCache{sup, cache.con, std::move(s_bar), out.s, cache.creation_residual,
                           cache.chained_updates + 1, cache.rebuilds, make_lazy_wave_maps()};
  if (opt.check_interval > 0 && out.cache.chained_updates % opt.check_interval == 0 &&
      out.cache.residual() > opt.drift_tolerance) {
    ConnectResult fresh = connect_supersystem(*sup, *cache.con, true);
    out.s = fresh.s;
    const Index chained = out.cache.chained_updates;
    out.cache = std::move(*fresh.cache);
    out.cache.chained_updates = chained;
    out.cache.rebuilds = cache.rebuilds + 1;
    out.rebuilt = true;
  }
  return out;
}

}  // namespace netcascade
