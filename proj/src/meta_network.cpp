#include "netcascade/meta_network.hpp"

#include <numeric>

#include "netcascade/error.hpp"

namespace netcascade {

namespace {

NetworkSystem graph_system(const std::string& name, const SystemLayout& layout, const Graph& g, cplx k) {
  std::vector<PortPartition::Set> sets;
  Index next = 0;
  for (const auto& [label, count] : layout.sets) {
    std::vector<Index> ports(count);
    std::iota(ports.begin(), ports.end(), next);
    next += count;
    sets.emplace_back(label, std::move(ports));
  }
  return NetworkSystem(name, Representation::Scattering, graph_scattering(g, k).s, PortPartition(next, std::move(sets)));
}

Index port_total(const SystemLayout& l) {
  Index n = 0;
  for (const auto& s : l.sets) n += s.second;
  return n;
}

GluedGraph glue_along(const ConnectionScheme& scheme, const std::vector<Graph>& graphs) {
  std::vector<Index> offset(graphs.size(), 0);
  for (Index i = 1; i < graphs.size(); ++i) offset[i] = offset[i - 1] + graphs[i - 1].node_count();
  std::vector<std::pair<Index, Index>> pairs;
  for (Index j = 0; j < scheme.joins().size(); ++j) {
    const Index sa = scheme.join_system_a(j), sb = scheme.join_system_b(j);
    const auto& pa = scheme.join_ports_a(j);
    const auto& pb = scheme.join_ports_b(j);
    for (Index i = 0; i < pa.size(); ++i) pairs.emplace_back(offset[sa] + pa[i], offset[sb] + pb[i]);
  }
  return glue_many(graphs, pairs);
}

}  // namespace

std::vector<Index> GraphNetwork::bonds_of(Index system) const {
  std::vector<Index> out;
  for (Index b = 0; b < glued.bond_owner.size(); ++b)
    if (glued.bond_owner[b] == system) out.push_back(b);
  return out;
}

ComplexMatrix GraphNetwork::oracle() const { return graph_scattering(glued.graph, k).s; }

GraphNetwork build_graph_network(const std::vector<SystemLayout>& layout, std::vector<Join> joins,
                                 std::uint64_t seed, cplx k, double density) {
  GraphNetwork net;
  net.k = k;
  std::vector<NetworkSystem> systems;
  for (Index i = 0; i < layout.size(); ++i) {
    const Index n = port_total(layout[i]);
    net.graphs.push_back(random_graph(n, density, derive_seed(seed, n, i), k));
    systems.push_back(graph_system(layout[i].name, layout[i], net.graphs.back(), k));
  }
  net.scheme = ConnectionScheme(std::move(systems), std::move(joins));
  net.glued = glue_along(net.scheme, net.graphs);
  return net;
}

GraphNetwork regenerate_system(const GraphNetwork& net, Index system, std::uint64_t seed, double density) {
  GraphNetwork out = net;
  const Index n = net.graphs.at(system).node_count();
  out.graphs[system] = random_graph(n, density, derive_seed(seed, n, system, 1), net.k);
  out.scheme = net.scheme.with_system_matrix(system, graph_scattering(out.graphs[system], net.k).s);
  out.glued = glue_along(out.scheme, out.graphs);
  return out;
}

GraphNetwork make_meta_network(Index n_bus, std::uint64_t seed, cplx k, bool modified, double density) {
  if (n_bus < 1) fail(ErrorCode::InvalidArgument, "n_bus must be at least 1");
  const Index n = n_bus;
  std::vector<SystemLayout> layout = {
      {"A", {{"N", n}, {"C_B", n}, {"C_D", n}}},
      {"B", {{"N", n}, {"C_A", n}, {"C_D", n}}},
      {"C", {{"N", n}, {"C_D", n}}},
      {"D", {{"N", n}, {"C_A", n}, {"C_B", n}, {"C_C", n}}},
  };
  if (modified) layout[3].sets.erase(layout[3].sets.begin());
  std::vector<Join> joins = {
      {"A", "C_B", "B", "C_A"},
      {"A", "C_D", "D", "C_A"},
      {"B", "C_D", "D", "C_B"},
      {"C", "C_D", "D", "C_C"},
  };
  return build_graph_network(layout, std::move(joins), derive_seed(seed, modified ? 2 : 1), k, density);
}

GraphNetwork make_chain_network(Index n_systems, Index n_bus, std::uint64_t seed, cplx k, double density) {
  if (n_systems < 2) fail(ErrorCode::InvalidArgument, "a chain needs at least 2 systems");
  std::vector<SystemLayout> layout;
  std::vector<Join> joins;
  for (Index i = 0; i < n_systems; ++i) {
    SystemLayout l{"S" + std::to_string(i + 1), {}};
    l.sets.emplace_back(i == 0 ? "N" : "L", n_bus);
    l.sets.emplace_back(i + 1 == n_systems ? "N" : "R", n_bus);
    layout.push_back(std::move(l));
    if (i > 0) joins.push_back({"S" + std::to_string(i), "R", "S" + std::to_string(i + 1), "L"});
  }
  return build_graph_network(layout, std::move(joins), derive_seed(seed, 3), k, density);
}

}  // namespace netcascade
