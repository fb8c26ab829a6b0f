#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "netcascade/cascade.hpp"

namespace netcascade {

// Maps from the incident wave a_N to potentials and fluxes at the connected ports.
struct WaveMaps {
  ComplexMatrix psi_cn;  // (S_con^-1 + I) S_bar S_CN
  ComplexMatrix phi_cn;  // (S_con^-1 - I) S_bar S_CN
  std::vector<ConnectedPort> c_ports;
  // Delta pairs as C positions (first-declared side, partner). The first side's
  // phi is the flux leaving that system towards its partner.
  std::vector<std::pair<Index, Index>> delta_pairs;
};

namespace detail {
struct LazyWaveMaps {
  std::once_flag once;
  std::optional<WaveMaps> maps;
};
}  // namespace detail

std::shared_ptr<detail::LazyWaveMaps> make_lazy_wave_maps();

struct ConnectedWaves {
  PowerWaveVector a_c;  // S_con^-1 b_C
  PowerWaveVector b_c;  // S_bar S_CN a_N
};

ConnectedWaves connected_waves(const CascadeCache& cache, std::span<const cplx> a_n);

// Built on first request per cache instance; updated caches start empty.
const WaveMaps& wave_maps(const CascadeCache& cache);

struct InternalVJ {
  std::vector<cplx> v_c;
  std::vector<cplx> j_c;
};

// Voltages and inward currents at the connected ports of sys1 terminated by
// `load`. Impedance: drive is J_N; admittance: drive is V_N.
InternalVJ internal_vj(Representation rep, const NetworkSystem& sys1, std::string_view c, const ComplexMatrix& load,
                       std::span<const cplx> drive);

}  // namespace netcascade
