#include "netcascade/planner.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>

#include "netcascade/error.hpp"
#include "netcascade/linalg/lu.hpp"

namespace netcascade {

namespace {

std::vector<Index> all_systems(const ConnectionScheme& scheme) {
  std::vector<Index> v(scheme.size());
  std::iota(v.begin(), v.end(), Index{0});
  return v;
}

ReductionPlan finish_plan(const ConnectionScheme& scheme, std::vector<Index> connection) {
  std::sort(connection.begin(), connection.end());
  connection.erase(std::unique(connection.begin(), connection.end()), connection.end());
  ReductionPlan plan;
  std::vector<bool> in_con(scheme.size(), false);
  for (Index c : connection) in_con.at(c) = true;
  for (Index i = 0; i < scheme.size(); ++i) {
    if (!in_con[i]) plan.supersystem_members.push_back(i);
  }
  plan.connection_members = connection;
  for (Index j = 0; j < scheme.joins().size(); ++j) {
    if (!in_con[scheme.join_system_a(j)] && !in_con[scheme.join_system_b(j)]) plan.remaining_joins.push_back(j);
  }
  plan.fully_reduced = plan.remaining_joins.empty();
  plan.requires_star = std::any_of(connection.begin(), connection.end(),
                                   [&](Index c) { return !scheme.free_ports(c).empty(); });
  return plan;
}

// Connected components of the system graph, each in ascending order.
std::vector<std::vector<Index>> components(const ConnectionScheme& scheme) {
  std::vector<int> comp(scheme.size(), -1);
  std::vector<std::vector<Index>> out;
  for (Index s = 0; s < scheme.size(); ++s) {
    if (comp[s] != -1) continue;
    out.emplace_back();
    std::queue<Index> q;
    q.push(s);
    comp[s] = static_cast<int>(out.size() - 1);
    while (!q.empty()) {
      const Index v = q.front();
      q.pop();
      out.back().push_back(v);
      for (Index w : scheme.neighbours(v)) {
        if (comp[w] == -1) {
          comp[w] = comp[s];
          q.push(w);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

// Two-colouring of a component; empty when it has an odd cycle.
std::map<Index, int> two_colouring(const ConnectionScheme& scheme, const std::vector<Index>& comp) {
  std::map<Index, int> colour;
  for (Index v : comp) {
    if (scheme.has_self_join(v)) return {};
  }
  std::queue<Index> q;
  colour[comp.front()] = 0;
  q.push(comp.front());
  while (!q.empty()) {
    const Index v = q.front();
    q.pop();
    for (Index w : scheme.neighbours(v)) {
      auto it = colour.find(w);
      if (it == colour.end()) {
        colour[w] = 1 - colour[v];
        q.push(w);
      } else if (it->second == colour[v]) {
        return {};
      }
    }
  }
  return colour;
}

std::vector<Index> greedy(const ConnectionScheme& scheme, const std::vector<Index>& candidates_in, bool closed_only) {
  std::vector<Index> cand;
  for (Index v : candidates_in) {
    if (scheme.connected_port_count(v) == 0 || scheme.has_self_join(v)) continue;
    if (closed_only && !scheme.free_ports(v).empty()) continue;
    cand.push_back(v);
  }
  std::stable_sort(cand.begin(), cand.end(), [&](Index a, Index b) {
    return scheme.connected_port_count(a) > scheme.connected_port_count(b);
  });
  std::vector<Index> chosen;
  for (Index v : cand) {
    if (std::none_of(chosen.begin(), chosen.end(), [&](Index c) { return scheme.adjacent(c, v); })) {
      chosen.push_back(v);
    }
  }
  return chosen;
}

Index free_port_total(const ConnectionScheme& scheme, const std::vector<Index>& set) {
  Index n = 0;
  for (Index v : set) n += scheme.free_ports(v).size();
  return n;
}

// Close the given pairs of ports of one labelled matrix with delta connections.
struct Labelled {
  ComplexMatrix s;
  std::vector<PortRef> ports;
};

Labelled close_pairs(const Labelled& in, const std::vector<std::pair<Index, Index>>& pairs) {
  if (pairs.empty()) return in;
  const Index n = in.ports.size();
  std::vector<bool> is_c(n, false);
  std::vector<Index> c;
  for (auto [a, b] : pairs) {
    c.push_back(a);
    c.push_back(b);
    is_c[a] = is_c[b] = true;
  }
  std::vector<Index> nn;
  for (Index i = 0; i < n; ++i) {
    if (!is_c[i]) nn.push_back(i);
  }
  ComplexMatrix a = -select(in.s, c, c);
  for (Index t = 0; t < c.size(); t += 2) {
    a(t, t + 1) += 1.0;
    a(t + 1, t) += 1.0;
  }
  ComplexMatrix w;
  try {
    w = solve_linear(a, select(in.s, c, nn));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularMatrix) throw;
    throw Error(ErrorCode::SingularInteraction, "self-join interaction is singular", e.condition());
  }
  Labelled out;
  out.s = select(in.s, nn, nn) + select(in.s, nn, c) * w;
  for (Index i : nn) out.ports.push_back(in.ports[i]);
  return out;
}

ComplexMatrix permute_to(const ComplexMatrix& s, const std::vector<PortRef>& from, const std::vector<PortRef>& to) {
  if (from.size() != to.size()) fail(ErrorCode::PortOrderMismatch, "port label sets differ");
  std::map<PortRef, Index> pos;
  for (Index i = 0; i < from.size(); ++i) pos[from[i]] = i;
  std::vector<Index> idx(to.size());
  for (Index i = 0; i < to.size(); ++i) {
    auto it = pos.find(to[i]);
    if (it == pos.end()) fail(ErrorCode::PortOrderMismatch, "port label sets differ");
    idx[i] = it->second;
  }
  return select(s, idx, idx);
}

// Self-joins of system x as (position of side a, position of side b) in `ports`.
std::vector<std::pair<Index, Index>> self_pairs(const ConnectionScheme& scheme, Index x,
                                                const std::vector<PortRef>& ports) {
  std::map<PortRef, Index> pos;
  for (Index i = 0; i < ports.size(); ++i) pos[ports[i]] = i;
  std::vector<std::pair<Index, Index>> out;
  for (Index j = 0; j < scheme.joins().size(); ++j) {
    if (scheme.join_system_a(j) != x || scheme.join_system_b(j) != x) continue;
    for (Index t = 0; t < scheme.join_ports_a(j).size(); ++t) {
      out.emplace_back(pos.at({x, scheme.join_ports_a(j)[t]}), pos.at({x, scheme.join_ports_b(j)[t]}));
    }
  }
  return out;
}

ComplexMatrix evaluate_zy(const ConnectionScheme& scheme, double epsilon, const ReferenceImpedance& ref,
                          Representation rep) {
  const Supersystem sup = assemble_supersystem(scheme, all_systems(scheme), rep);
  const ConnectionSystem con = quasi_delta(rep, delta_system(scheme), epsilon, ref);
  if (sup.c_ports.empty()) return sup.s_nn;
  ComplexMatrix w;
  try {
    w = solve_linear(sup.s_cc + con.matrix, sup.s_cn);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularMatrix) throw;
    throw Error(ErrorCode::SingularInteraction, "X_CC + X_con is singular", e.condition());
  }
  return sup.s_nn - s_nc_times(sup, w);
}

}  // namespace

bool has_odd_cycle(const ConnectionScheme& scheme) {
  for (const auto& comp : components(scheme)) {
    if (two_colouring(scheme, comp).empty()) return true;
  }
  return false;
}

ReductionPlan plan_reduction(const ConnectionScheme& scheme, ReductionObjective objective) {
  if (objective == ReductionObjective::None) return finish_plan(scheme, {});
  if (objective == ReductionObjective::PreferClosedPorts) return finish_plan(scheme, greedy(scheme, all_systems(scheme), true));

  std::vector<Index> chosen;
  for (const auto& comp : components(scheme)) {
    if (comp.size() < 2) continue;
    const auto colour = two_colouring(scheme, comp);
    if (colour.empty()) {
      const auto g = greedy(scheme, comp, false);
      chosen.insert(chosen.end(), g.begin(), g.end());
      continue;
    }
    std::vector<Index> cls[2];
    for (Index v : comp) cls[colour.at(v)].push_back(v);
    // Colour 0 holds the component's first-declared system. Embedding a class
    // with no free ports avoids the star product; otherwise keep colour 0 in
    // the supersystem.
    const Index f0 = free_port_total(scheme, cls[0]), f1 = free_port_total(scheme, cls[1]);
    const int pick = (f0 == 0 && f1 != 0) ? 0 : 1;
    chosen.insert(chosen.end(), cls[pick].begin(), cls[pick].end());
  }
  return finish_plan(scheme, std::move(chosen));
}

ReductionPlan manual_plan(const ConnectionScheme& scheme, std::vector<Index> connection_members) {
  for (Index c : connection_members) {
    if (c >= scheme.size()) fail(ErrorCode::InvalidReduction, "connection member index out of range");
    if (scheme.has_self_join(c)) fail(ErrorCode::InvalidReduction, "connection member is joined to itself");
    for (Index d : connection_members) {
      if (c != d && scheme.adjacent(c, d)) fail(ErrorCode::InvalidReduction, "connection members are adjacent");
    }
  }
  return finish_plan(scheme, std::move(connection_members));
}

EvalResult evaluate(const ConnectionScheme& scheme, const ReductionPlan& plan, const EvalOptions& opt) {
  EvalResult out;
  const auto canonical = scheme.canonical_free_ports();
  if (plan.connection_members.empty()) {
    const Supersystem sup = assemble_supersystem(scheme, all_systems(scheme));
    ConnectResult r = connect_supersystem(sup, delta_system(scheme), opt.keep_cache);
    out.s = std::move(r.s);
    out.cache = std::move(r.cache);
    out.ports = canonical;
    return out;
  }

  const ReductionPlan checked = manual_plan(scheme, plan.connection_members);
  const Supersystem sup = assemble_supersystem(scheme, checked.supersystem_members);
  const ConnectionSystem con = embed_connection(scheme, checked.connection_members);
  if (!checked.requires_star) {
    ConnectResult r = connect_supersystem(sup, con, opt.keep_cache);
    out.s = permute_to(r.s, r.ports, canonical);
    out.cache = std::move(r.cache);
    out.ports = canonical;
    return out;
  }

  const Index nc = sup.c_ports.size(), nf = con.free_ports.size();
  const ConstMatrixView cm = con.matrix.view();
  const TwoPortBlocks u{sup.s_nn, sup.s_nc, sup.s_cn, sup.s_cc};
  const TwoPortBlocks v{cm.block(nc, nc, nf, nf), cm.block(nc, 0, nf, nc), cm.block(0, nc, nc, nf),
                        cm.block(0, 0, nc, nc)};
  const ComplexMatrix s = star_product(u, v);
  std::vector<PortRef> ports = sup.n_ports;
  ports.insert(ports.end(), con.free_ports.begin(), con.free_ports.end());
  out.s = permute_to(s, ports, canonical);
  out.ports = canonical;
  return out;
}

ComplexMatrix iterative_cascade(const ConnectionScheme& scheme, std::span<const Index> order_in) {
  std::vector<Index> order(order_in.begin(), order_in.end());
  if (order.empty()) order = all_systems(scheme);
  {
    std::vector<Index> check = order;
    std::sort(check.begin(), check.end());
    if (check != all_systems(scheme)) fail(ErrorCode::InvalidArgument, "fold order must be a permutation of the systems");
  }
  if (order.empty()) return {};

  std::vector<bool> folded(scheme.size(), false);
  Labelled acc;
  {
    const Index x = order.front();
    acc.s = scheme.system(x).converted(Representation::Scattering).matrix();
    for (Index p = 0; p < scheme.system(x).ports(); ++p) acc.ports.push_back({x, p});
    acc = close_pairs(acc, self_pairs(scheme, x, acc.ports));
    folded[x] = true;
  }

  for (Index step = 1; step < order.size(); ++step) {
    const Index x = order[step];
    const ComplexMatrix sx = scheme.system(x).converted(Representation::Scattering).matrix();
    std::map<PortRef, Index> pos;
    for (Index i = 0; i < acc.ports.size(); ++i) pos[acc.ports[i]] = i;

    std::vector<Index> cu, cv;
    for (Index j = 0; j < scheme.joins().size(); ++j) {
      const Index a = scheme.join_system_a(j), b = scheme.join_system_b(j);
      if (a == x && b != x && folded[b]) {
        for (Index t = 0; t < scheme.join_ports_a(j).size(); ++t) {
          cv.push_back(scheme.join_ports_a(j)[t]);
          cu.push_back(pos.at({b, scheme.join_ports_b(j)[t]}));
        }
      } else if (b == x && a != x && folded[a]) {
        for (Index t = 0; t < scheme.join_ports_b(j).size(); ++t) {
          cv.push_back(scheme.join_ports_b(j)[t]);
          cu.push_back(pos.at({a, scheme.join_ports_a(j)[t]}));
        }
      }
    }
    std::vector<bool> in_cu(acc.ports.size(), false), in_cv(sx.rows(), false);
    for (Index i : cu) in_cu[i] = true;
    for (Index p : cv) in_cv[p] = true;
    std::vector<Index> nu, nv;
    for (Index i = 0; i < acc.ports.size(); ++i) {
      if (!in_cu[i]) nu.push_back(i);
    }
    for (Index p = 0; p < sx.rows(); ++p) {
      if (!in_cv[p]) nv.push_back(p);
    }
    const MemberBlocks ub = member_blocks(acc.s, nu, cu);
    const MemberBlocks vb = member_blocks(sx, nv, cv);
    Labelled next;
    next.s = star_product({ub.nn, ub.nc, ub.cn, ub.cc}, {vb.nn, vb.nc, vb.cn, vb.cc});
    for (Index i : nu) next.ports.push_back(acc.ports[i]);
    for (Index p : nv) next.ports.push_back({x, p});
    acc = close_pairs(next, self_pairs(scheme, x, next.ports));
    folded[x] = true;
  }
  return permute_to(acc.s, acc.ports, scheme.canonical_free_ports());
}

ComplexMatrix evaluate_impedance(const ConnectionScheme& scheme, double epsilon, const ReferenceImpedance& ref) {
  return evaluate_zy(scheme, epsilon, ref, Representation::Impedance);
}

ComplexMatrix evaluate_admittance(const ConnectionScheme& scheme, double epsilon, const ReferenceImpedance& ref) {
  return evaluate_zy(scheme, epsilon, ref, Representation::Admittance);
}

}  // namespace netcascade
