#pragma once

#include "netcascade/cascade.hpp"

namespace netcascade {

// New scattering matrix for one supersystem member; same port count as before.
struct SubsystemUpdate {
  Index system = 0;
  ComplexMatrix matrix;
};

struct UpdateOptions {
  // Every check_interval chained updates the full residual is evaluated and the
  // cache rebuilt from scratch if it exceeds drift_tolerance.
  Index check_interval = 64;
  double drift_tolerance = 1e-9;
};

struct UpdateResult {
  ComplexMatrix s;
  CascadeCache cache;
  ComplexMatrix delta_s_cc;
  // Order of the only matrix factorised by the update, n(C_j).
  Index aux_dimension = 0;
  bool rebuilt = false;
};

// Woodbury update of S_bar for a change of one member's S_CC block:
//   S_bar' = S_bar + S_bar[:, Cj] (I - dS S_bar[Cj, Cj])^-1 dS S_bar[Cj, :]
// The input cache is left untouched. Throws SingularUpdate when the small
// matrix is singular and InvalidUpdate for non-members or size changes.
UpdateResult update_subsystem(const CascadeCache& cache, const SubsystemUpdate& upd, const UpdateOptions& opt = {});

}  // namespace netcascade
