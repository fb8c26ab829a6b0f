#include "netcascade/network.hpp"

#include <algorithm>
#include <cmath>

#include "netcascade/error.hpp"
#include "netcascade/linalg/lu.hpp"

namespace netcascade {

std::string_view to_string(Representation r) {
  switch (r) {
    case Representation::Scattering: return "S";
    case Representation::Impedance: return "Z";
    case Representation::Admittance: return "Y";
  }
  return "?";
}

Representation parse_representation(std::string_view s) {
  if (s == "S") return Representation::Scattering;
  if (s == "Z") return Representation::Impedance;
  if (s == "Y") return Representation::Admittance;
  fail(ErrorCode::ParseError, "representation must be S, Z or Y, got '" + std::string(s) + "'");
}

ReferenceImpedance ReferenceImpedance::uniform(cplx z0) {
  ReferenceImpedance r;
  r.uniform_ = z0;
  if (!(z0.real() > 0.0)) fail(ErrorCode::InvalidReference, "reference impedance needs Re(z) > 0");
  return r;
}

ReferenceImpedance ReferenceImpedance::per_port(std::vector<cplx> z) {
  ReferenceImpedance r;
  for (const cplx& v : z) {
    if (!(v.real() > 0.0)) fail(ErrorCode::InvalidReference, "reference impedance needs Re(z) > 0");
  }
  r.per_port_ = std::move(z);
  return r;
}

cplx ReferenceImpedance::at(Index port) const { return is_uniform() ? uniform_ : per_port_.at(port); }

void ReferenceImpedance::validate(Index ports) const {
  if (!is_uniform() && per_port_.size() != ports) {
    fail(ErrorCode::InvalidReference, "per-port reference has " + std::to_string(per_port_.size()) +
                                          " entries for " + std::to_string(ports) + " ports");
  }
  for (Index i = 0; i < (is_uniform() ? 1 : ports); ++i) {
    if (!(at(i).real() > 0.0)) fail(ErrorCode::InvalidReference, "reference impedance needs Re(z) > 0");
  }
}

PortPartition::PortPartition(Index total_ports, std::vector<Set> sets) : total_(total_ports), sets_(std::move(sets)) {
  std::vector<int> seen(total_, 0);
  for (const auto& [label, idx] : sets_) {
    if (label.empty()) fail(ErrorCode::InvalidArgument, "empty port set label");
    for (Index i : idx) {
      if (i >= total_) fail(ErrorCode::InvalidArgument, "port " + std::to_string(i) + " out of range in set " + label);
      if (seen[i]++) fail(ErrorCode::InvalidArgument, "port " + std::to_string(i) + " appears in more than one set");
    }
  }
  for (const auto& [label, idx] : sets_) {
    const auto dup = std::count_if(sets_.begin(), sets_.end(), [&](const Set& s) { return s.first == label; });
    if (dup > 1) fail(ErrorCode::InvalidArgument, "duplicate port set label " + label);
  }
  for (Index i = 0; i < total_; ++i) {
    if (!seen[i]) fail(ErrorCode::InvalidArgument, "port " + std::to_string(i) + " belongs to no set");
  }
}

PortPartition PortPartition::trivial(Index total_ports) {
  std::vector<Index> all(total_ports);
  for (Index i = 0; i < total_ports; ++i) all[i] = i;
  return PortPartition(total_ports, {{"P", std::move(all)}});
}

bool PortPartition::has(std::string_view label) const {
  return label == "P" || std::any_of(sets_.begin(), sets_.end(), [&](const Set& s) { return s.first == label; });
}

std::vector<Index> PortPartition::ports(std::string_view label) const {
  for (const auto& [name, idx] : sets_) {
    if (name == label) return idx;
  }
  if (label == "P") {
    std::vector<Index> all(total_);
    for (Index i = 0; i < total_; ++i) all[i] = i;
    return all;
  }
  fail(ErrorCode::UnknownPortSet, "no port set '" + std::string(label) + "'");
}

NetworkSystem::NetworkSystem(std::string name, Representation rep, ComplexMatrix matrix, PortPartition partition,
                             ReferenceImpedance reference)
    : name_(std::move(name)),
      rep_(rep),
      matrix_(std::move(matrix)),
      partition_(std::move(partition)),
      reference_(std::move(reference)) {
  if (!matrix_.is_square()) fail(ErrorCode::InvalidBlock, "system '" + name_ + "' matrix is not square");
  if (matrix_.rows() != partition_.total_ports()) {
    fail(ErrorCode::InvalidBlock, "system '" + name_ + "' matrix size does not match its port count");
  }
  if (!matrix_.all_finite()) fail(ErrorCode::InvalidArgument, "system '" + name_ + "' has non-finite entries");
  reference_.validate(matrix_.rows());
}

NetworkSystem NetworkSystem::with_matrix(ComplexMatrix m) const {
  return NetworkSystem(name_, rep_, std::move(m), partition_, reference_);
}

NetworkSystem NetworkSystem::converted(Representation target) const {
  if (target == rep_) return *this;
  ComplexMatrix m;
  switch (rep_) {
    case Representation::Scattering:
      m = target == Representation::Impedance ? z_from_s(matrix_, reference_) : y_from_s(matrix_, reference_);
      break;
    case Representation::Impedance:
      m = target == Representation::Scattering ? s_from_z(matrix_, reference_) : y_from_z(matrix_);
      break;
    case Representation::Admittance:
      m = target == Representation::Scattering ? s_from_y(matrix_, reference_) : z_from_y(matrix_);
      break;
  }
  return NetworkSystem(name_, target, std::move(m), partition_, reference_);
}

ComplexMatrix partition_blocks(const NetworkSystem& sys, std::string_view row_set, std::string_view col_set) {
  const auto rows = sys.partition().ports(row_set);
  const auto cols = sys.partition().ports(col_set);
  return select(sys.matrix(), rows, cols);
}

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (!m.is_square()) fail(ErrorCode::InvalidBlock, std::string(what) + " needs a square matrix");
}

std::vector<cplx> reference_values(const ReferenceImpedance& ref, Index n) {
  ref.validate(n);
  std::vector<cplx> z(n);
  for (Index i = 0; i < n; ++i) z[i] = ref.at(i);
  return z;
}

double f_scale(cplx z) { return 1.0 / (2.0 * std::sqrt(std::abs(z.real()))); }

// S_ij = F_i X_ij / F_j
ComplexMatrix similarity_f(ComplexMatrix x, const std::vector<cplx>& z, bool inverse) {
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) {
      const double r = f_scale(z[i]) / f_scale(z[j]);
      x(i, j) *= inverse ? 1.0 / r : r;
    }
  return x;
}

// Solve with the singular case reported as `code`.
ComplexMatrix solve_or(const ComplexMatrix& a, const ComplexMatrix& b, ErrorCode code, const char* what) {
  try {
    return solve_linear(a, b);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularMatrix) throw;
    throw Error(code, what, e.condition());
  }
}

}  // namespace

ComplexMatrix s_from_z(const ComplexMatrix& z, const ReferenceImpedance& ref) {
  require_square(z, "s_from_z");
  const Index n = z.rows();
  if (ref.is_uniform_real()) {
    ref.validate(n);
    const double z0 = ref.uniform_value().real();
    ComplexMatrix plus = z, minus = z;
    for (Index i = 0; i < n; ++i) {
      plus(i, i) += z0;
      minus(i, i) -= z0;
    }
    return solve_or(plus, minus, ErrorCode::SingularMatrix, "Z + Z0 I is singular");
  }
  const auto zr = reference_values(ref, n);
  ComplexMatrix plus = z, minus = z;
  for (Index i = 0; i < n; ++i) {
    plus(i, i) += zr[i];
    minus(i, i) -= std::conj(zr[i]);
  }
  // X (Z + G) = Z - G^H  <=>  (Z + G)^T X^T = (Z - G^H)^T
  ComplexMatrix x = solve_or(plus.transpose(), minus.transpose(), ErrorCode::SingularMatrix, "Z + G is singular")
                        .transpose();
  return similarity_f(std::move(x), zr, false);
}

ComplexMatrix z_from_s(const ComplexMatrix& s, const ReferenceImpedance& ref) {
  require_square(s, "z_from_s");
  const Index n = s.rows();
  if (ref.is_uniform_real()) {
    ref.validate(n);
    ComplexMatrix lhs = -s, rhs = s;
    for (Index i = 0; i < n; ++i) {
      lhs(i, i) += 1.0;
      rhs(i, i) += 1.0;
    }
    return ref.uniform_value().real() *
           solve_or(lhs, rhs, ErrorCode::DeltaLikeSingularity, "I - S is singular (delta-like content)");
  }
  // With S' = F^-1 S F:  (I - S') Z = S' G + G^H
  const auto zr = reference_values(ref, n);
  ComplexMatrix sp = similarity_f(s, zr, true);
  ComplexMatrix lhs = -sp, rhs = sp;
  for (Index i = 0; i < n; ++i) {
    lhs(i, i) += 1.0;
    for (Index j = 0; j < n; ++j) rhs(i, j) *= zr[j];
    rhs(i, i) += std::conj(zr[i]);
  }
  return solve_or(lhs, rhs, ErrorCode::DeltaLikeSingularity, "I - S is singular (delta-like content)");
}

ComplexMatrix s_from_y(const ComplexMatrix& y, const ReferenceImpedance& ref) {
  require_square(y, "s_from_y");
  const Index n = y.rows();
  const auto zr = reference_values(ref, n);
  // S' = (I - G^H Y)(I + G Y)^-1, solved through the transpose.
  ComplexMatrix plus(n, n), minus(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      plus(i, j) = zr[i] * y(i, j);
      minus(i, j) = -std::conj(zr[i]) * y(i, j);
    }
  for (Index i = 0; i < n; ++i) {
    plus(i, i) += 1.0;
    minus(i, i) += 1.0;
  }
  ComplexMatrix x = solve_or(plus.transpose(), minus.transpose(), ErrorCode::SingularMatrix, "I + G Y is singular")
                        .transpose();
  if (ref.is_uniform_real()) return x;
  return similarity_f(std::move(x), zr, false);
}

ComplexMatrix y_from_s(const ComplexMatrix& s, const ReferenceImpedance& ref) {
  require_square(s, "y_from_s");
  const Index n = s.rows();
  if (ref.is_uniform_real()) {
    ref.validate(n);
    ComplexMatrix lhs = s, rhs = -s;
    for (Index i = 0; i < n; ++i) {
      lhs(i, i) += 1.0;
      rhs(i, i) += 1.0;
    }
    return (1.0 / ref.uniform_value().real()) *
           solve_or(lhs, rhs, ErrorCode::DeltaLikeSingularity, "I + S is singular (delta-like content)");
  }
  // (S' G + G^H) Y = I - S'
  const auto zr = reference_values(ref, n);
  ComplexMatrix sp = similarity_f(s, zr, true);
  ComplexMatrix lhs = sp, rhs = -sp;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) lhs(i, j) *= zr[j];
    lhs(i, i) += std::conj(zr[i]);
    rhs(i, i) += 1.0;
  }
  return solve_or(lhs, rhs, ErrorCode::DeltaLikeSingularity, "S' G + G^H is singular (delta-like content)");
}

ComplexMatrix y_from_z(const ComplexMatrix& z) {
  require_square(z, "y_from_z");
  return inverse(z);
}

ComplexMatrix z_from_y(const ComplexMatrix& y) {
  require_square(y, "z_from_y");
  return inverse(y);
}

PotentialFlux waves_to_potential_flux(const PowerWaveVector& a, const PowerWaveVector& b) {
  if (a.ports != b.ports || a.values.size() != b.values.size() || a.values.size() != a.ports.size()) {
    fail(ErrorCode::PortSetMismatch, "power waves are defined over different port sets");
  }
  PotentialFlux out{{a.ports, a.values}, {a.ports, a.values}};
  for (Index i = 0; i < a.values.size(); ++i) {
    out.psi.values[i] += b.values[i];
    out.phi.values[i] -= b.values[i];
  }
  return out;
}

std::pair<cplx, cplx> potential_flux_to_vj(cplx psi, cplx phi, cplx z) {
  const double root = std::sqrt(z.real());
  const cplx j = phi / root;
  const cplx v = root * psi - cplx(0.0, z.imag()) * j;
  return {v, j};
}

}  // namespace netcascade
