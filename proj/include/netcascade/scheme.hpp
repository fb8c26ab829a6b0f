#pragma once

#include <compare>
#include <string>
#include <vector>

#include "netcascade/network.hpp"

namespace netcascade {

// A port of a scheme member: (index into the scheme's system list, local port).
struct PortRef {
  Index system = 0;
  Index port = 0;
  auto operator<=>(const PortRef&) const = default;
};

// delta-connection of two equally sized port sets; the i-th port of set_a
// pairs with the i-th port of set_b.
struct Join {
  std::string system_a;
  std::string set_a;
  std::string system_b;
  std::string set_b;
};

// One connected port position in a supersystem's C ordering.
struct ConnectedPort {
  PortRef ref;
  Index join = 0;        // index into scheme.joins()
  bool first_side = true;  // true when the port sits on the join's system_a side
  PortRef partner;       // the port it is delta-joined to
};

class ConnectionScheme {
 public:
  ConnectionScheme() = default;
  ConnectionScheme(std::vector<NetworkSystem> systems, std::vector<Join> joins,
                   std::vector<std::string> embedded = {});

  const std::vector<NetworkSystem>& systems() const noexcept { return systems_; }
  const std::vector<Join>& joins() const noexcept { return joins_; }
  const std::vector<std::string>& embedded() const noexcept { return embedded_; }
  const NetworkSystem& system(Index i) const { return systems_.at(i); }
  Index size() const noexcept { return systems_.size(); }
  Index index_of(const std::string& name) const;
  bool is_embedded(Index i) const;

  // Resolved join endpoints.
  Index join_system_a(Index j) const { return resolved_.at(j).sys_a; }
  Index join_system_b(Index j) const { return resolved_.at(j).sys_b; }
  const std::vector<Index>& join_ports_a(Index j) const { return resolved_.at(j).ports_a; }
  const std::vector<Index>& join_ports_b(Index j) const { return resolved_.at(j).ports_b; }

  // Ports of system i in no join, ascending.
  std::vector<Index> free_ports(Index i) const;
  Index connected_port_count(Index i) const;
  bool has_self_join(Index i) const;
  bool adjacent(Index i, Index k) const;
  // Distinct neighbours of i (self excluded), ascending.
  std::vector<Index> neighbours(Index i) const;

  // Canonical free-port ordering of any evaluation result: members in declared
  // order, each contributing its free ports ascending.
  std::vector<PortRef> canonical_free_ports() const;

  // C ordering of a supersystem made of `members` (scheme indices, any order is
  // normalised to declared order): per member, the joins involving it in
  // declaration order, each contributing that member's side in set order.
  std::vector<ConnectedPort> connected_ordering(const std::vector<Index>& members) const;

  // Same scheme with system i's matrix replaced (dimensions must match).
  ConnectionScheme with_system_matrix(Index i, ComplexMatrix m) const;
  ConnectionScheme with_embedded(std::vector<std::string> embedded) const;

 private:
  struct Resolved {
    Index sys_a = 0, sys_b = 0;
    std::vector<Index> ports_a, ports_b;
  };
  void validate();

  std::vector<NetworkSystem> systems_;
  std::vector<Join> joins_;
  std::vector<std::string> embedded_;
  std::vector<Resolved> resolved_;
  std::vector<std::vector<int>> port_join_;  // per system, per port: join index or -1
};

}  // namespace netcascade
