#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "netcascade/cascade.hpp"
#include "netcascade/graph.hpp"
#include "netcascade/network.hpp"
#include "netcascade/scheme.hpp"

namespace netcascade {

using Json = nlohmann::ordered_json;

// Parse errors carry the source name and, for syntax errors, line and column.
Json parse_json(std::string_view text, std::string_view source);
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Matrices are arrays of rows of [re, im] pairs; a bare number is a real entry.
ComplexMatrix matrix_from_json(const Json& j, std::string_view field);
Json matrix_to_json(const ComplexMatrix& m);
std::vector<cplx> vector_from_json(const Json& j, std::string_view field);
Json vector_to_json(std::span<const cplx> v);

// { "name"?, "representation": "S"|"Z"|"Y", "ports": n, "sets": {label: [indices]},
//   "matrix": [[[re, im], ...]], "z0": number | [re, im] | per-port array }
NetworkSystem network_from_json(const Json& j, const std::string& default_name);
Json network_to_json(const NetworkSystem& sys);

// { "systems": [names], "joins": [[sysA, setA, sysB, setB]], "embedded": [names] }
struct SchemeSpec {
  std::vector<std::string> systems;
  std::vector<Join> joins;
  std::vector<std::string> embedded;
};
SchemeSpec scheme_spec_from_json(const Json& j);
Json scheme_spec_to_json(const SchemeSpec& s);
// Orders `networks` by spec.systems; every listed name must be present.
ConnectionScheme build_scheme(const SchemeSpec& spec, const std::vector<NetworkSystem>& networks);

// { "nodes": [[x, y]], "bonds": [[i, j, length]], "external": [indices] }
Graph graph_from_json(const Json& j);
Json graph_to_json(const Graph& g);

// Everything needed to continue with update_subsystem in another process:
// the scheme, the supersystem members and the cached interaction inverse.
Json cache_to_json(const ConnectionScheme& scheme, const CascadeCache& cache);
struct LoadedCache {
  ConnectionScheme scheme;
  CascadeCache cache;
};
LoadedCache cache_from_json(const Json& j);

}  // namespace netcascade
