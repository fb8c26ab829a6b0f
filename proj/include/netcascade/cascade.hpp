#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netcascade/connection.hpp"
#include "netcascade/network.hpp"
#include "netcascade/scheme.hpp"

namespace netcascade {

// Where one member's ports sit in the supersystem's N and C orderings.
struct MemberRange {
  Index system = 0;
  Index n_begin = 0, n_end = 0;
  Index c_begin = 0, c_end = 0;
};

// Block-diagonal aggregate of scheme members, split into free (N) and
// connected (C) ports. All four blocks are block-diagonal by member.
struct Supersystem {
  Representation representation = Representation::Scattering;
  std::vector<Index> members;
  std::vector<std::string> member_names;
  std::vector<PortRef> n_ports;
  std::vector<ConnectedPort> c_ports;
  std::vector<MemberRange> ranges;
  ComplexMatrix s_nn, s_nc, s_cn, s_cc;

  const MemberRange& range_of(Index system) const;
  Index system_by_name(const std::string& name) const;
  std::vector<PortRef> c_refs() const;
  // Dense matrix over ports N then C, with partition sets "N" and "C".
  NetworkSystem as_network_system(std::string name = "supersystem") const;
};

// Members are normalised to declared order. Systems are converted to `rep`.
Supersystem assemble_supersystem(const ConnectionScheme& scheme, const std::vector<Index>& members,
                                 Representation rep = Representation::Scattering);

// The scheme member's matrix as seen by a supersystem range: blocks (NN, NC, CN, CC).
struct MemberBlocks {
  ComplexMatrix nn, nc, cn, cc;
};
MemberBlocks member_blocks(const ComplexMatrix& s, const std::vector<Index>& n_ports,
                           const std::vector<Index>& c_ports);

struct WaveMaps;
namespace detail {
struct LazyWaveMaps;
}

// State kept after connecting a supersystem: S_bar = (S_con^-1 - S_CC)^-1 and
// the blocks it was built from.
struct CascadeCache {
  std::shared_ptr<const Supersystem> sup;
  std::shared_ptr<const ConnectionSystem> con;
  ComplexMatrix s_bar;
  ComplexMatrix s_tilde;
  // Probe residual of (I - S_con S_CC) S_bar - S_con at creation, relative.
  double creation_residual = 0.0;
  Index chained_updates = 0;
  Index rebuilds = 0;
  std::shared_ptr<detail::LazyWaveMaps> waves;

  // ||(I - S_con S_CC) S_bar - S_con||_F, the full (cubic cost) check.
  double residual() const;
};

struct ConnectResult {
  ComplexMatrix s;
  std::vector<PortRef> ports;
  std::optional<CascadeCache> cache;
};

// S~ = S_NN + S_NC S_bar S_CN. The connection system must cover exactly the
// supersystem's C ports, in the same order, and have no free ports. Pure
// permutations are applied structurally. Without keep_cache the product
// S_bar S_CN is obtained from one solve and S_bar itself is never formed.
ConnectResult connect_supersystem(const Supersystem& sup, const ConnectionSystem& con, bool keep_cache = true);

// S12 = S_NN + S_NC (S2^-1 - S_CC)^-1 S_CN, evaluated as
// S_NN + S_NC (I - S2 S_CC)^-1 S2 S_CN so that S2 may be singular.
// N is every port of s1 outside set c, ascending.
ComplexMatrix cascade_load_s(const NetworkSystem& s1, std::string_view c, const ComplexMatrix& s2);
// Z12 = Z_NN - Z_NC (Z_CC + Z2)^-1 Z_CN
ComplexMatrix cascade_load_z(const NetworkSystem& z1, std::string_view c, const ComplexMatrix& z2);
// Y12 = Y_NN - Y_NC (Y_CC + Y2)^-1 Y_CN
ComplexMatrix cascade_load_y(const NetworkSystem& y1, std::string_view c, const ComplexMatrix& y2);

struct StarOptions {
  // Reuse X_UV^T for X_VU when both S_CC blocks are symmetric.
  bool exploit_symmetry = true;
  double symmetry_tolerance = 1e-13;
};

struct StarDiagnostics {
  ComplexMatrix x_uv;
  ComplexMatrix x_vu;
  bool used_symmetry = false;
};

struct TwoPortBlocks {
  ConstMatrixView nn, nc, cn, cc;
};

// Redheffer star product on pre-partitioned blocks; the i-th C port of U is
// joined to the i-th C port of V. Result ports: N_U then N_V.
ComplexMatrix star_product(const TwoPortBlocks& u, const TwoPortBlocks& v, const StarOptions& opt = {},
                           StarDiagnostics* diag = nullptr);

// Result ports: U's ports outside cu ascending, then V's ports outside cv ascending.
ComplexMatrix redheffer_star(const NetworkSystem& u, const NetworkSystem& v, std::string_view cu,
                             std::string_view cv, const StarOptions& opt = {}, StarDiagnostics* diag = nullptr);

// Impedance analogue: delta joins enforce equal voltages and opposite currents.
ComplexMatrix star_product_z(const TwoPortBlocks& u, const TwoPortBlocks& v);
ComplexMatrix redheffer_star_z(const NetworkSystem& u, const NetworkSystem& v, std::string_view cu,
                               std::string_view cv);

// S_bar * S_CN and S_NC * X using the member block structure.
ComplexMatrix times_s_cn(const Supersystem& sup, ConstMatrixView left);
ComplexMatrix s_nc_times(const Supersystem& sup, ConstMatrixView right);

}  // namespace netcascade
