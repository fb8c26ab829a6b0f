#include "netcascade/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "netcascade/error.hpp"
#include "netcascade/linalg/lu.hpp"

namespace netcascade {

Rng::Rng(std::uint64_t seed) {
  mt_[0] = seed;
  for (std::size_t i = 1; i < mt_.size(); ++i) {
    mt_[i] = 6364136223846793005ULL * (mt_[i - 1] ^ (mt_[i - 1] >> 62)) + i;
  }
}

std::uint64_t Rng::next() {
  constexpr std::size_t n = 312, m = 156;
  constexpr std::uint64_t upper = 0xFFFFFFFF80000000ULL, lower = 0x7FFFFFFFULL;
  constexpr std::uint64_t matrix_a = 0xB5026F5AA96619E9ULL;
  if (idx_ >= n) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t x = (mt_[i] & upper) | (mt_[(i + 1) % n] & lower);
      std::uint64_t xa = x >> 1;
      if (x & 1ULL) xa ^= matrix_a;
      mt_[i] = mt_[(i + m) % n] ^ xa;
    }
    idx_ = 0;
  }
  std::uint64_t x = mt_[idx_++];
  x ^= (x >> 29) & 0x5555555555555555ULL;
  x ^= (x << 17) & 0x71D67FFFEDA60000ULL;
  x ^= (x << 37) & 0xFFF7EEE000000000ULL;
  x ^= x >> 43;
  return x;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "Rng::below(0)");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

cplx Rng::complex_normal() {
  // Box-Muller; each part has unit variance.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * M_PI * u2;
  return {r * std::cos(t), r * std::sin(t)};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(mix(base) ^ a) ^ b) ^ c);
}

void Graph::validate() const {
  std::vector<int> degree(nodes.size(), 0);
  for (const Bond& b : bonds) {
    if (b.a >= nodes.size() || b.b >= nodes.size()) fail(ErrorCode::InvalidArgument, "bond node out of range");
    if (b.a == b.b) fail(ErrorCode::InvalidArgument, "self-loop bond");
    if (!(b.length > 0.0) || !std::isfinite(b.length)) fail(ErrorCode::InvalidArgument, "bond length must be positive");
    ++degree[b.a];
    ++degree[b.b];
  }
  for (Index i = 0; i < nodes.size(); ++i) {
    if (degree[i] == 0) fail(ErrorCode::InvalidArgument, "node " + std::to_string(i) + " has no bond");
  }
  std::vector<bool> seen(nodes.size(), false);
  for (Index e : external) {
    if (e >= nodes.size() || seen[e]) fail(ErrorCode::InvalidArgument, "bad external node list");
    seen[e] = true;
  }
}

bool Graph::is_external(Index node) const {
  return std::find(external.begin(), external.end(), node) != external.end();
}

namespace {

struct BondTrig {
  cplx cot, csc;
};

BondTrig trig(const Bond& b, cplx k) {
  const cplx s = std::sin(k * b.length);
  if (std::abs(s) < kResonanceGuard) fail(ErrorCode::ResonantBond, "bond of length " + std::to_string(b.length) + " is resonant");
  return {std::cos(k * b.length) / s, 1.0 / s};
}

const cplx kJ{0.0, 1.0};

}  // namespace

ComplexMatrix graph_m_matrix(const Graph& g, cplx k) {
  g.validate();
  const Index n = g.node_count();
  ComplexMatrix m(n, n);
  for (const Bond& b : g.bonds) {
    const BondTrig t = trig(b, k);
    m(b.a, b.a) += kJ * t.cot;
    m(b.b, b.b) += kJ * t.cot;
    m(b.a, b.b) -= kJ * t.csc;
    m(b.b, b.a) -= kJ * t.csc;
  }
  return m;
}

GraphSolution graph_scattering(const Graph& g, cplx k) {
  GraphSolution sol;
  sol.m = graph_m_matrix(g, k);
  const Index n = g.node_count(), ne = g.external.size();
  ComplexMatrix a = sol.m;
  ComplexMatrix wt(n, ne);
  for (Index i = 0; i < ne; ++i) {
    a(g.external[i], g.external[i]) += 1.0;
    wt(g.external[i], i) = 2.0;
  }
  try {
    sol.psi = solve_linear(a, wt);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularMatrix) throw;
    throw Error(ErrorCode::ResonantGraph, "M + W^T W is singular", e.condition());
  }
  sol.s = select_rows(sol.psi, g.external);
  for (Index i = 0; i < ne; ++i) sol.s(i, i) -= 1.0;
  return sol;
}

cplx bond_flux(const Bond& b, Index from, cplx k, std::span<const cplx> psi) {
  const BondTrig t = trig(b, k);
  const Index other = from == b.a ? b.b : b.a;
  if (from != b.a && from != b.b) fail(ErrorCode::InvalidArgument, "node is not an end of the bond");
  return kJ * (t.cot * psi[from] - t.csc * psi[other]);
}

GluedGraph glue_many(std::span<const Graph> graphs, std::span<const std::pair<Index, Index>> union_pairs) {
  Graph u;
  std::vector<Index> offset;
  std::vector<Index> owner;
  for (Index gi = 0; gi < graphs.size(); ++gi) {
    const Graph& g = graphs[gi];
    g.validate();
    const Index off = u.nodes.size();
    offset.push_back(off);
    u.nodes.insert(u.nodes.end(), g.nodes.begin(), g.nodes.end());
    for (const Bond& b : g.bonds) {
      u.bonds.push_back({b.a + off, b.b + off, b.length});
      owner.push_back(gi);
    }
    for (Index e : g.external) u.external.push_back(e + off);
  }

  // Union-find over merged pairs; the representative is the lowest index.
  std::vector<Index> parent(u.nodes.size());
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> merged(u.nodes.size(), false);
  for (auto [p, q] : union_pairs) {
    if (p >= u.nodes.size() || q >= u.nodes.size() || !u.is_external(p) || !u.is_external(q) || merged[p] ||
        merged[q] || p == q) {
      fail(ErrorCode::InvalidGluing, "glued nodes must be distinct, unused external nodes");
    }
    merged[p] = merged[q] = true;
    const Index rp = find(p), rq = find(q);
    parent[std::max(rp, rq)] = std::min(rp, rq);
  }

  std::vector<Index> new_index(u.nodes.size(), 0);
  Graph out;
  for (Index i = 0; i < u.nodes.size(); ++i) {
    if (find(i) == i) {
      new_index[i] = out.nodes.size();
      out.nodes.push_back(u.nodes[i]);
    }
  }
  for (Index i = 0; i < u.nodes.size(); ++i) new_index[i] = new_index[find(i)];
  for (const Bond& b : u.bonds) out.bonds.push_back({new_index[b.a], new_index[b.b], b.length});
  for (Index e : u.external) {
    if (!merged[e]) out.external.push_back(new_index[e]);
  }

  GluedGraph res;
  res.graph = std::move(out);
  res.bond_owner = std::move(owner);
  for (Index gi = 0; gi < graphs.size(); ++gi) {
    std::vector<Index> map(graphs[gi].node_count());
    for (Index i = 0; i < map.size(); ++i) map[i] = new_index[offset[gi] + i];
    res.node_map.push_back(std::move(map));
  }
  res.graph.validate();
  return res;
}

Graph glue_graphs(const Graph& g1, const Graph& g2, std::span<const std::pair<Index, Index>> pairing) {
  std::vector<std::pair<Index, Index>> up;
  for (auto [p, q] : pairing) {
    if (!g1.is_external(p) || !g2.is_external(q)) fail(ErrorCode::InvalidGluing, "glued nodes must be external");
    up.emplace_back(p, q + g1.node_count());
  }
  const Graph gs[2] = {g1, g2};
  return glue_many(gs, up).graph;
}

SubgraphInterface subgraph_interface(const Graph& g, cplx k, std::span<const Index> s, std::span<const cplx> a,
                                     std::span<const Index> subgraph_bonds) {
  if (a.size() != g.external.size()) fail(ErrorCode::PortSetMismatch, "incident wave length mismatch");
  std::vector<bool> in_s(g.node_count(), false);
  for (Index v : s) {
    if (v >= g.node_count()) fail(ErrorCode::InvalidSubset, "node out of range");
    if (g.is_external(v)) fail(ErrorCode::InvalidSubset, "subset contains external node " + std::to_string(v));
    in_s[v] = true;
  }
  std::vector<bool> in_sub(g.bonds.size(), false);
  if (subgraph_bonds.empty()) {
    for (Index i = 0; i < g.bonds.size(); ++i) in_sub[i] = in_s[g.bonds[i].a] && in_s[g.bonds[i].b];
  } else {
    for (Index i : subgraph_bonds) in_sub.at(i) = true;
  }

  const GraphSolution sol = graph_scattering(g, k);
  const ComplexMatrix psi = multiply(sol.psi, ComplexMatrix(a.size(), 1, std::vector<cplx>(a.begin(), a.end())));
  const std::span<const cplx> pv(psi.data(), psi.rows());

  SubgraphInterface out;
  for (Index v : s) {
    out.psi.push_back(pv[v]);
    cplx phi = 0.0;
    for (Index i = 0; i < g.bonds.size(); ++i) {
      if (in_sub[i]) continue;
      const Bond& b = g.bonds[i];
      if (b.a == v || b.b == v) phi += bond_flux(b, v, k, pv);
    }
    out.phi.push_back(phi);
  }
  return out;
}

Graph random_graph(Index n_ports, double density, std::uint64_t seed, cplx k_check) {
  if (n_ports < 2) fail(ErrorCode::InvalidArgument, "random_graph needs at least 2 nodes");
  if (!(density > 0.0 && density <= 1.0)) fail(ErrorCode::InvalidArgument, "density must lie in (0, 1]");
  Rng rng(seed);
  Graph g;
  for (Index i = 0; i < n_ports; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    g.nodes.push_back({x, y});
  }
  g.external.resize(n_ports);
  std::iota(g.external.begin(), g.external.end(), Index{0});

  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < n_ports; ++i)
    for (Index j = i + 1; j < n_ports; ++j) pairs.emplace_back(i, j);
  const Index want = std::max<Index>(1, static_cast<Index>(std::llround(density * static_cast<double>(pairs.size()))));

  for (int attempt = 0; attempt < 100; ++attempt) {
    // Partial Fisher-Yates: the first `want` entries form the sample.
    for (Index i = 0; i < want; ++i) {
      const Index j = i + static_cast<Index>(rng.below(pairs.size() - i));
      std::swap(pairs[i], pairs[j]);
    }
    std::vector<std::pair<Index, Index>> chosen(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(want));
    std::sort(chosen.begin(), chosen.end());
    g.bonds.clear();
    std::vector<int> degree(n_ports, 0);
    bool ok = true;
    for (auto [i, j] : chosen) {
      const double dx = g.nodes[i][0] - g.nodes[j][0], dy = g.nodes[i][1] - g.nodes[j][1];
      const double len = std::hypot(dx, dy);
      if (!(len > 0.0) || std::abs(std::sin(k_check * len)) < kResonanceGuard) ok = false;
      g.bonds.push_back({i, j, len});
      ++degree[i];
      ++degree[j];
    }
    if (ok && std::all_of(degree.begin(), degree.end(), [](int d) { return d > 0; })) return g;
  }
  fail(ErrorCode::GenerationFailed, "no admissible bond set after 100 draws");
}

}  // namespace netcascade
