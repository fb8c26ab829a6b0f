#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netcascade/linalg/matrix.hpp"

namespace netcascade {

enum class Representation { Scattering, Impedance, Admittance };

std::string_view to_string(Representation r);
Representation parse_representation(std::string_view s);  // "S" | "Z" | "Y"

inline constexpr double kDefaultZ0 = 50.0;

// Characteristic impedance of the line attached to each port.
class ReferenceImpedance {
 public:
  ReferenceImpedance() = default;  // uniform 50 ohm
  static ReferenceImpedance uniform(cplx z0);
  static ReferenceImpedance per_port(std::vector<cplx> z);

  cplx at(Index port) const;
  bool is_uniform() const noexcept { return per_port_.empty(); }
  bool is_uniform_real() const noexcept { return is_uniform() && uniform_.imag() == 0.0; }
  cplx uniform_value() const noexcept { return uniform_; }
  const std::vector<cplx>& values() const noexcept { return per_port_; }
  // Throws InvalidReference when Re(Z_i) <= 0 or the per-port list has the wrong length.
  void validate(Index ports) const;

 private:
  cplx uniform_{kDefaultZ0, 0.0};
  std::vector<cplx> per_port_;
};

// Named, ordered, disjoint port sets that together cover every port.
class PortPartition {
 public:
  using Set = std::pair<std::string, std::vector<Index>>;

  PortPartition() = default;
  PortPartition(Index total_ports, std::vector<Set> sets);
  // Partition with a single set "P" holding every port.
  static PortPartition trivial(Index total_ports);

  Index total_ports() const noexcept { return total_; }
  bool has(std::string_view label) const;
  // "P" resolves to all ports in index order unless declared explicitly.
  std::vector<Index> ports(std::string_view label) const;
  const std::vector<Set>& sets() const noexcept { return sets_; }

 private:
  Index total_ = 0;
  std::vector<Set> sets_;
};

class NetworkSystem {
 public:
  NetworkSystem() = default;
  NetworkSystem(std::string name, Representation rep, ComplexMatrix matrix, PortPartition partition,
                ReferenceImpedance reference = {});

  const std::string& name() const noexcept { return name_; }
  Representation representation() const noexcept { return rep_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const PortPartition& partition() const noexcept { return partition_; }
  const ReferenceImpedance& reference() const noexcept { return reference_; }
  Index ports() const noexcept { return matrix_.rows(); }

  NetworkSystem with_matrix(ComplexMatrix m) const;
  NetworkSystem converted(Representation target) const;

 private:
  std::string name_;
  Representation rep_ = Representation::Scattering;
  ComplexMatrix matrix_;
  PortPartition partition_;
  ReferenceImpedance reference_;
};

// Rows of row_set, columns of col_set, each in its stored order.
ComplexMatrix partition_blocks(const NetworkSystem& sys, std::string_view row_set, std::string_view col_set);

// S = F (Z - G^H)(Z + G)^-1 F^-1 with F_ii = 1/(2 sqrt|Re Z_i|), G = diag(Z_i).
ComplexMatrix s_from_z(const ComplexMatrix& z, const ReferenceImpedance& ref = {});
// Throws DeltaLikeSingularity when I - S is singular.
ComplexMatrix z_from_s(const ComplexMatrix& s, const ReferenceImpedance& ref = {});
ComplexMatrix s_from_y(const ComplexMatrix& y, const ReferenceImpedance& ref = {});
// Throws DeltaLikeSingularity when I + S is singular.
ComplexMatrix y_from_s(const ComplexMatrix& s, const ReferenceImpedance& ref = {});
ComplexMatrix y_from_z(const ComplexMatrix& z);
ComplexMatrix z_from_y(const ComplexMatrix& y);

struct PowerWaveVector {
  std::vector<Index> ports;
  std::vector<cplx> values;
};

struct PotentialFlux {
  PowerWaveVector psi;
  PowerWaveVector phi;
};

// psi = a + b, phi = a - b.
PotentialFlux waves_to_potential_flux(const PowerWaveVector& a, const PowerWaveVector& b);

// Port voltage and inward current at a port with reference z, inverting the
// power-wave definitions: J = phi / sqrt(Re z), V = sqrt(Re z) psi - j Im(z) J.
std::pair<cplx, cplx> potential_flux_to_vj(cplx psi, cplx phi, cplx z);

}  // namespace netcascade
