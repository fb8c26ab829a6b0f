#pragma once

#include <optional>
#include <span>
#include <vector>

#include "netcascade/cascade.hpp"
#include "netcascade/connection.hpp"
#include "netcascade/scheme.hpp"

namespace netcascade {

enum class ReductionObjective { None, PreferClosedPorts, MaxReduction };

struct ReductionPlan {
  std::vector<Index> supersystem_members;
  std::vector<Index> connection_members;
  std::vector<Index> remaining_joins;  // delta joins between two supersystem members
  bool fully_reduced = false;
  bool requires_star = false;  // some connection member has free ports
};

// None gives the global plan. MaxReduction takes a colour class of every
// two-colourable component (so chains and junctions reduce fully) and, for the
// other components, greedily picks systems by descending connected-port count
// under non-adjacency. PreferClosedPorts runs the greedy pass over systems
// without free ports only.
ReductionPlan plan_reduction(const ConnectionScheme& scheme, ReductionObjective objective);

// Plan with a caller-chosen set of connection members. Throws InvalidReduction
// when two of them are joined to each other or to themselves.
ReductionPlan manual_plan(const ConnectionScheme& scheme, std::vector<Index> connection_members);

// True when the scheme's system graph has a cycle of odd length (including self-joins).
bool has_odd_cycle(const ConnectionScheme& scheme);

struct EvalOptions {
  bool keep_cache = true;
};

struct EvalResult {
  ComplexMatrix s;
  std::vector<PortRef> ports;  // always scheme.canonical_free_ports()
  std::optional<CascadeCache> cache;  // absent on the star path
};

EvalResult evaluate(const ConnectionScheme& scheme, const ReductionPlan& plan, const EvalOptions& opt = {});

// Folds systems one at a time with the star product, in declared order unless
// `order` is given. Result in canonical free-port order.
ComplexMatrix iterative_cascade(const ConnectionScheme& scheme, std::span<const Index> order = {});

// Global evaluation in Z (or Y) with a quasi-delta connection system:
// Z~ = Z_NN - Z_NC (Z_CC + Z_con^eps)^-1 Z_CN.
ComplexMatrix evaluate_impedance(const ConnectionScheme& scheme, double epsilon = kDefaultQuasiDeltaEpsilon,
                                 const ReferenceImpedance& ref = {});
ComplexMatrix evaluate_admittance(const ConnectionScheme& scheme, double epsilon = kDefaultQuasiDeltaEpsilon,
                                  const ReferenceImpedance& ref = {});

}  // namespace netcascade
