#include "netcascade/connection.hpp"

#include <algorithm>
#include <map>

#include "netcascade/error.hpp"

namespace netcascade {

ConnectionSystem delta_system(std::span<const JoinedSets> pairs, std::span<const PortRef> order) {
  std::vector<PortRef> layout;
  for (const auto& p : pairs) {
    if (p.first.size() != p.second.size()) fail(ErrorCode::PortSetMismatch, "joined port sets differ in size");
    if (order.empty()) {
      layout.insert(layout.end(), p.first.begin(), p.first.end());
      layout.insert(layout.end(), p.second.begin(), p.second.end());
    }
  }
  if (!order.empty()) layout.assign(order.begin(), order.end());

  std::map<PortRef, Index> pos;
  for (Index i = 0; i < layout.size(); ++i) {
    if (!pos.emplace(layout[i], i).second) fail(ErrorCode::PortOrderMismatch, "port listed twice in connection order");
  }
  const Index n = layout.size();
  ConnectionSystem con;
  con.matrix = ComplexMatrix(n, n);
  con.port_order = layout;
  con.is_pure_permutation = true;
  con.partner.assign(n, n);
  auto locate = [&](const PortRef& r) {
    auto it = pos.find(r);
    if (it == pos.end()) fail(ErrorCode::PortOrderMismatch, "joined port missing from connection order");
    return it->second;
  };
  for (const auto& p : pairs) {
    for (Index t = 0; t < p.first.size(); ++t) {
      const Index i = locate(p.first[t]), j = locate(p.second[t]);
      if (con.partner[i] != n || con.partner[j] != n || i == j) {
        fail(ErrorCode::PortOrderMismatch, "port joined more than once");
      }
      con.partner[i] = j;
      con.partner[j] = i;
      con.matrix(i, j) = 1.0;
      con.matrix(j, i) = 1.0;
    }
  }
  if (std::find(con.partner.begin(), con.partner.end(), n) != con.partner.end()) {
    fail(ErrorCode::PortOrderMismatch, "connection order lists a port that is not joined");
  }
  return con;
}

ConnectionSystem delta_system(const ConnectionScheme& scheme) {
  return embed_connection(scheme, {});
}

ConnectionSystem embed_connection(const ConnectionScheme& scheme, const std::vector<Index>& embedded) {
  std::vector<bool> is_emb(scheme.size(), false);
  for (Index e : embedded) {
    if (e >= scheme.size()) fail(ErrorCode::InvalidReduction, "embedded system index out of range");
    is_emb[e] = true;
  }
  for (Index e : embedded) {
    if (scheme.has_self_join(e)) fail(ErrorCode::InvalidReduction, "embedded system is joined to itself");
    for (Index f : embedded) {
      if (e != f && scheme.adjacent(e, f)) {
        fail(ErrorCode::InvalidReduction, "embedded systems '" + scheme.system(e).name() + "' and '" +
                                              scheme.system(f).name() + "' are directly joined");
      }
    }
  }
  std::vector<Index> members;
  for (Index i = 0; i < scheme.size(); ++i) {
    if (!is_emb[i]) members.push_back(i);
  }
  const auto order = scheme.connected_ordering(members);
  const Index nc = order.size();

  std::map<PortRef, Index> pos;
  for (Index i = 0; i < nc; ++i) pos.emplace(order[i].ref, i);

  // Connection port index for every embedded port.
  std::map<PortRef, Index> emb_index;
  std::vector<PortRef> free;
  for (Index i = 0; i < nc; ++i) {
    if (is_emb[order[i].partner.system]) emb_index[order[i].partner] = i;
  }
  std::vector<Index> sorted_emb = embedded;
  std::sort(sorted_emb.begin(), sorted_emb.end());
  sorted_emb.erase(std::unique(sorted_emb.begin(), sorted_emb.end()), sorted_emb.end());
  for (Index e : sorted_emb) {
    for (Index p : scheme.free_ports(e)) {
      emb_index[{e, p}] = nc + free.size();
      free.push_back({e, p});
    }
  }

  const Index n = nc + free.size();
  ConnectionSystem con;
  con.matrix = ComplexMatrix(n, n);
  con.port_order.reserve(nc);
  for (const auto& cp : order) con.port_order.push_back(cp.ref);
  con.free_ports = free;
  con.is_pure_permutation = sorted_emb.empty();
  if (con.is_pure_permutation) con.partner.assign(nc, nc);

  for (Index i = 0; i < nc; ++i) {
    const PortRef& partner = order[i].partner;
    if (!is_emb[partner.system]) {
      const Index j = pos.at(partner);
      con.matrix(i, j) = 1.0;
      if (con.is_pure_permutation) con.partner[i] = j;
    }
  }
  for (Index e : sorted_emb) {
    const NetworkSystem& sys = scheme.system(e);
    const ComplexMatrix s = sys.converted(Representation::Scattering).matrix();
    std::vector<Index> idx(sys.ports());
    for (Index p = 0; p < sys.ports(); ++p) {
      auto it = emb_index.find({e, p});
      if (it == emb_index.end()) fail(ErrorCode::InvalidReduction, "embedded port not joined to a supersystem member");
      idx[p] = it->second;
    }
    for (Index p = 0; p < sys.ports(); ++p)
      for (Index q = 0; q < sys.ports(); ++q) con.matrix(idx[p], idx[q]) = s(p, q);
  }
  return con;
}

ConnectionSystem quasi_delta(Representation rep, const ConnectionSystem& delta, double epsilon,
                             const ReferenceImpedance& ref) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail(ErrorCode::InvalidEpsilon, "epsilon must lie in (0, 1)");
  if (!delta.is_pure_permutation) fail(ErrorCode::InvalidArgument, "quasi_delta needs a pure delta connection system");
  if (rep == Representation::Scattering) fail(ErrorCode::InvalidArgument, "quasi_delta targets Z or Y");
  ConnectionSystem out = delta;
  ComplexMatrix s = (1.0 - epsilon) * delta.matrix;
  out.matrix = rep == Representation::Impedance ? z_from_s(s, ref) : y_from_s(s, ref);
  out.representation = rep;
  out.is_pure_permutation = false;
  out.partner.clear();
  return out;
}

}  // namespace netcascade
