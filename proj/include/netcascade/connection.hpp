#pragma once

#include <span>
#include <vector>

#include "netcascade/network.hpp"
#include "netcascade/scheme.hpp"

namespace netcascade {

struct ConnectionSystem {
  Representation representation = Representation::Scattering;
  // Rows/columns: port_order, then free_ports.
  ComplexMatrix matrix;
  // Supersystem port each connection port faces, in the supersystem's C order.
  std::vector<PortRef> port_order;
  // Free ports of embedded systems, exposed by the connection system itself.
  std::vector<PortRef> free_ports;
  bool is_pure_permutation = false;
  // For pure permutations: matrix(i, partner[i]) = 1.
  std::vector<Index> partner;
};

struct JoinedSets {
  std::vector<PortRef> first;
  std::vector<PortRef> second;
};

// Pure delta connection system. Without an explicit order the ports are laid out
// as first_0, second_0, first_1, second_1, ...
ConnectionSystem delta_system(std::span<const JoinedSets> pairs, std::span<const PortRef> order = {});

// Delta connection system of every join in the scheme, ordered as the global
// supersystem's C.
ConnectionSystem delta_system(const ConnectionScheme& scheme);

// Connection system of a reduced scheme: delta entries for joins between
// supersystem members, and each embedded system's matrix placed at the C
// positions of the member ports it is joined to. Embedded free ports are
// appended after the C ports in declared order.
ConnectionSystem embed_connection(const ConnectionScheme& scheme, const std::vector<Index>& embedded);

inline constexpr double kDefaultQuasiDeltaEpsilon = 1e-8;

// Quasi-delta variant: unit transmissions scaled by (1 - epsilon), then
// converted to Z or Y with the given reference.
ConnectionSystem quasi_delta(Representation rep, const ConnectionSystem& delta, double epsilon,
                             const ReferenceImpedance& ref = {});

}  // namespace netcascade
