#include "netcascade/scheme.hpp"

#include <algorithm>

#include "netcascade/error.hpp"

namespace netcascade {

ConnectionScheme::ConnectionScheme(std::vector<NetworkSystem> systems, std::vector<Join> joins,
                                   std::vector<std::string> embedded)
    : systems_(std::move(systems)), joins_(std::move(joins)), embedded_(std::move(embedded)) {
  validate();
}

Index ConnectionScheme::index_of(const std::string& name) const {
  for (Index i = 0; i < systems_.size(); ++i) {
    if (systems_[i].name() == name) return i;
  }
  fail(ErrorCode::InvalidScheme, "unknown system '" + name + "'");
}

bool ConnectionScheme::is_embedded(Index i) const {
  return std::find(embedded_.begin(), embedded_.end(), systems_.at(i).name()) != embedded_.end();
}

void ConnectionScheme::validate() {
  for (Index i = 0; i < systems_.size(); ++i) {
    for (Index k = i + 1; k < systems_.size(); ++k) {
      if (systems_[i].name() == systems_[k].name()) fail(ErrorCode::InvalidScheme, "duplicate system name '" + systems_[i].name() + "'");
    }
  }
  port_join_.assign(systems_.size(), {});
  for (Index i = 0; i < systems_.size(); ++i) port_join_[i].assign(systems_[i].ports(), -1);

  resolved_.clear();
  for (Index j = 0; j < joins_.size(); ++j) {
    const Join& jn = joins_[j];
    Resolved r;
    r.sys_a = index_of(jn.system_a);
    r.sys_b = index_of(jn.system_b);
    r.ports_a = systems_[r.sys_a].partition().ports(jn.set_a);
    r.ports_b = systems_[r.sys_b].partition().ports(jn.set_b);
    if (r.ports_a.size() != r.ports_b.size()) {
      fail(ErrorCode::PortSetMismatch, "join " + jn.system_a + "." + jn.set_a + " <-> " + jn.system_b + "." +
                                           jn.set_b + " pairs sets of different size");
    }
    auto claim = [&](Index sys, Index port) {
      int& slot = port_join_[sys][port];
      if (slot != -1) {
        fail(ErrorCode::InvalidScheme, "port " + std::to_string(port) + " of '" + systems_[sys].name() +
                                           "' takes part in more than one join");
      }
      slot = static_cast<int>(j);
    };
    for (Index p : r.ports_a) claim(r.sys_a, p);
    for (Index p : r.ports_b) claim(r.sys_b, p);
    resolved_.push_back(std::move(r));
  }

  for (const auto& e : embedded_) {
    const Index i = index_of(e);
    if (has_self_join(i)) fail(ErrorCode::InvalidReduction, "embedded system '" + e + "' is joined to itself");
    for (const auto& other : embedded_) {
      if (other != e && adjacent(i, index_of(other))) {
        fail(ErrorCode::InvalidReduction, "embedded systems '" + e + "' and '" + other + "' are directly joined");
      }
    }
  }
}

std::vector<Index> ConnectionScheme::free_ports(Index i) const {
  std::vector<Index> out;
  for (Index p = 0; p < port_join_.at(i).size(); ++p) {
    if (port_join_[i][p] == -1) out.push_back(p);
  }
  return out;
}

Index ConnectionScheme::connected_port_count(Index i) const {
  return systems_.at(i).ports() - free_ports(i).size();
}

bool ConnectionScheme::has_self_join(Index i) const {
  return std::any_of(resolved_.begin(), resolved_.end(),
                     [&](const Resolved& r) { return r.sys_a == i && r.sys_b == i; });
}

bool ConnectionScheme::adjacent(Index i, Index k) const {
  return std::any_of(resolved_.begin(), resolved_.end(), [&](const Resolved& r) {
    return (r.sys_a == i && r.sys_b == k) || (r.sys_a == k && r.sys_b == i);
  });
}

std::vector<Index> ConnectionScheme::neighbours(Index i) const {
  std::vector<Index> out;
  for (const auto& r : resolved_) {
    if (r.sys_a == i && r.sys_b != i) out.push_back(r.sys_b);
    if (r.sys_b == i && r.sys_a != i) out.push_back(r.sys_a);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<PortRef> ConnectionScheme::canonical_free_ports() const {
  std::vector<PortRef> out;
  for (Index i = 0; i < systems_.size(); ++i) {
    for (Index p : free_ports(i)) out.push_back({i, p});
  }
  return out;
}

std::vector<ConnectedPort> ConnectionScheme::connected_ordering(const std::vector<Index>& members) const {
  std::vector<Index> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  std::vector<ConnectedPort> out;
  for (Index m : sorted) {
    for (Index j = 0; j < resolved_.size(); ++j) {
      const Resolved& r = resolved_[j];
      if (r.sys_a == m) {
        for (Index t = 0; t < r.ports_a.size(); ++t) {
          out.push_back({{m, r.ports_a[t]}, j, true, {r.sys_b, r.ports_b[t]}});
        }
      }
      if (r.sys_b == m) {
        for (Index t = 0; t < r.ports_b.size(); ++t) {
          out.push_back({{m, r.ports_b[t]}, j, false, {r.sys_a, r.ports_a[t]}});
        }
      }
    }
  }
  return out;
}

ConnectionScheme ConnectionScheme::with_system_matrix(Index i, ComplexMatrix m) const {
  const NetworkSystem& old = systems_.at(i);
  if (m.rows() != old.ports() || m.cols() != old.ports()) {
    fail(ErrorCode::InvalidUpdate, "replacement matrix for '" + old.name() + "' changes the port count");
  }
  ConnectionScheme out = *this;
  out.systems_[i] = old.with_matrix(std::move(m));
  return out;
}

ConnectionScheme ConnectionScheme::with_embedded(std::vector<std::string> embedded) const {
  return ConnectionScheme(systems_, joins_, std::move(embedded));
}

}  // namespace netcascade
