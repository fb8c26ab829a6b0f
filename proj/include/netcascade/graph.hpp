#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "netcascade/linalg/matrix.hpp"

namespace netcascade {

// mt19937_64 with explicit conversions, so draws are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, n), unbiased.
  std::uint64_t below(std::uint64_t n);
  cplx complex_normal();

 private:
  std::array<std::uint64_t, 312> mt_{};
  std::size_t idx_ = 312;
};

// Mixes a base seed with stream identifiers (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

struct Bond {
  Index a = 0;
  Index b = 0;
  double length = 0.0;
};

// Transmission-line graph with Kirchhoff (continuity and flux conservation)
// vertices. External nodes carry one port each, in the listed order.
struct Graph {
  std::vector<std::array<double, 2>> nodes;
  std::vector<Bond> bonds;
  std::vector<Index> external;

  Index node_count() const noexcept { return nodes.size(); }
  // Throws InvalidArgument for self-loops, non-positive lengths, isolated nodes
  // or bad external indices. Parallel bonds are allowed (gluing can create them).
  void validate() const;
  bool is_external(Index node) const;
};

struct GraphSolution {
  ComplexMatrix m;    // n_nodes x n_nodes
  ComplexMatrix psi;  // n_nodes x n_ports, node potentials per unit incident wave
  ComplexMatrix s;    // n_ports x n_ports
};

inline constexpr double kResonanceGuard = 1e-12;

// M_ab = j delta_ab sum_g cot(k l_ag) - j sum_{bonds a-b} csc(k l_ab).
ComplexMatrix graph_m_matrix(const Graph& g, cplx k);

// Psi = 2 (M + W^T W)^-1 W^T and S = W Psi - I, where W selects the external nodes.
GraphSolution graph_scattering(const Graph& g, cplx k);

// Flux leaving node `from` into bond b: j (cot(k l) psi_from - csc(k l) psi_other).
cplx bond_flux(const Bond& b, Index from, cplx k, std::span<const cplx> psi);

struct GluedGraph {
  Graph graph;
  // Node index in the glued graph of node i of graph g: node_map[g][i].
  std::vector<std::vector<Index>> node_map;
  // Source graph of every bond of the glued graph.
  std::vector<Index> bond_owner;
};

// Disjoint union of several graphs, then each listed node pair (global indices
// into the union, both external) is merged into one internal node that keeps the
// lower index. Remaining external nodes keep their relative order.
GluedGraph glue_many(std::span<const Graph> graphs, std::span<const std::pair<Index, Index>> union_pairs);

// Two-graph gluing: pairing lists (external node of g1, external node of g2).
Graph glue_graphs(const Graph& g1, const Graph& g2, std::span<const std::pair<Index, Index>> pairing);

struct SubgraphInterface {
  std::vector<cplx> psi;
  std::vector<cplx> phi;
};

// Potentials at the internal nodes `s` under incident wave `a`, and the flux
// each node sends through bonds outside the subgraph. The subgraph's bonds are
// `subgraph_bonds` when given, otherwise every bond with both ends in s.
SubgraphInterface subgraph_interface(const Graph& g, cplx k, std::span<const Index> s, std::span<const cplx> a,
                                     std::span<const Index> subgraph_bonds = {});

// n_ports nodes placed uniformly in the unit square, all external; round(density
// * n(n-1)/2) distinct node pairs bonded, lengths equal to Euclidean distances.
// The bond set is redrawn (same positions, up to 100 times) while a node is
// isolated or a bond is resonant at k_check.
Graph random_graph(Index n_ports, double density, std::uint64_t seed, cplx k_check);

}  // namespace netcascade
