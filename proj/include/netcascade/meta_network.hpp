#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "netcascade/graph.hpp"
#include "netcascade/scheme.hpp"

namespace netcascade {

// Port sets of one subsystem, in port order: set i occupies the next sets[i].second ports.
struct SystemLayout {
  std::string name;
  std::vector<std::pair<std::string, Index>> sets;
};

// A connection scheme whose subsystems are random graphs, together with the
// graph obtained by gluing them along every join (the ground truth).
struct GraphNetwork {
  ConnectionScheme scheme;
  std::vector<Graph> graphs;  // one per scheme system; node i carries port i
  GluedGraph glued;
  cplx k;

  Index glued_node(PortRef p) const { return glued.node_map.at(p.system).at(p.port); }
  std::vector<Index> bonds_of(Index system) const;
  // Scattering matrix of the glued graph, in canonical free-port order.
  ComplexMatrix oracle() const;
};

GraphNetwork build_graph_network(const std::vector<SystemLayout>& layout, std::vector<Join> joins,
                                 std::uint64_t seed, cplx k, double density = 0.5);

// Replaces system i by a freshly drawn graph of the same size.
GraphNetwork regenerate_system(const GraphNetwork& net, Index system, std::uint64_t seed, double density = 0.5);

inline const cplx kMetaNetworkK{3.0, 0.05};

// Four subsystems A, B, C, D joined A-B, A-D, B-D, C-D by n_bus ports each;
// A, B, C and D have n_bus free ports each. The modified variant drops D's free ports.
GraphNetwork make_meta_network(Index n_bus, std::uint64_t seed, cplx k = kMetaNetworkK, bool modified = false,
                               double density = 0.5);

// Chain of n_systems joined end to end by n_bus ports; both ends have n_bus free ports.
GraphNetwork make_chain_network(Index n_systems, Index n_bus, std::uint64_t seed, cplx k = kMetaNetworkK,
                                double density = 0.5);

}  // namespace netcascade
