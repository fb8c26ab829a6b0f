#include "netcascade/json_io.hpp"

#include <fstream>
#include <sstream>

#include "netcascade/connection.hpp"
#include "netcascade/error.hpp"
#include "netcascade/waves.hpp"

namespace netcascade {

namespace {

[[noreturn]] void bad(std::string_view field, const std::string& what) {
  fail(ErrorCode::ParseError, "field '" + std::string(field) + "': " + what);
}

const Json& require(const Json& j, const char* key, std::string_view ctx) {
  if (!j.is_object()) bad(ctx, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string(ctx) + "." + key, "missing");
  return *it;
}

std::string field_name(std::string_view ctx, std::size_t i) { return std::string(ctx) + "[" + std::to_string(i) + "]"; }

cplx complex_from_json(const Json& j, std::string_view field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  bad(field, "expected a number or [re, im]");
}

Json complex_to_json(cplx c) { return Json::array({c.real(), c.imag()}); }

Index index_from_json(const Json& j, std::string_view field) {
  if (!j.is_number_integer() || j.get<long long>() < 0) bad(field, "expected a non-negative integer");
  return static_cast<Index>(j.get<long long>());
}

std::vector<Index> indices_from_json(const Json& j, std::string_view field) {
  if (!j.is_array()) bad(field, "expected an array of indices");
  std::vector<Index> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(index_from_json(j[i], field_name(field, i)));
  return out;
}

std::string string_from_json(const Json& j, std::string_view field) {
  if (!j.is_string()) bad(field, "expected a string");
  return j.get<std::string>();
}

std::vector<std::string> strings_from_json(const Json& j, std::string_view field) {
  if (!j.is_array()) bad(field, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(string_from_json(j[i], field_name(field, i)));
  return out;
}

}  // namespace

Json parse_json(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(ErrorCode::ParseError,
         std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path.string());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << text;
}

ComplexMatrix matrix_from_json(const Json& j, std::string_view field) {
  if (!j.is_array()) bad(field, "expected an array of rows");
  const Index rows = j.size();
  const Index cols = rows ? (j[0].is_array() ? j[0].size() : 0) : 0;
  ComplexMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const std::string rf = field_name(field, r);
    if (!j[r].is_array() || j[r].size() != cols) bad(rf, "rows must be arrays of equal length");
    for (Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c], field_name(rf, c));
  }
  return m;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<cplx> vector_from_json(const Json& j, std::string_view field) {
  if (!j.is_array()) bad(field, "expected an array");
  std::vector<cplx> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(complex_from_json(j[i], field_name(field, i)));
  return v;
}

Json vector_to_json(std::span<const cplx> v) {
  Json out = Json::array();
  for (cplx c : v) out.push_back(complex_to_json(c));
  return out;
}

NetworkSystem network_from_json(const Json& j, const std::string& default_name) {
  const std::string name = j.contains("name") ? string_from_json(j["name"], "name") : default_name;
  Representation rep = Representation::Scattering;
  if (j.contains("representation")) {
    try {
      rep = parse_representation(string_from_json(j["representation"], "representation"));
    } catch (const Error&) {
      bad("representation", "expected \"S\", \"Z\" or \"Y\"");
    }
  }
  ComplexMatrix m = matrix_from_json(require(j, "matrix", "network"), "matrix");
  const Index ports = j.contains("ports") ? index_from_json(j["ports"], "ports") : m.rows();
  if (m.rows() != ports || m.cols() != ports) bad("matrix", "expected a " + std::to_string(ports) + "x" + std::to_string(ports) + " matrix");

  PortPartition partition = PortPartition::trivial(ports);
  if (j.contains("sets")) {
    const Json& sets = j["sets"];
    if (!sets.is_object()) bad("sets", "expected an object of label: [indices]");
    std::vector<PortPartition::Set> list;
    for (auto it = sets.begin(); it != sets.end(); ++it) list.emplace_back(it.key(), indices_from_json(it.value(), "sets." + it.key()));
    partition = PortPartition(ports, std::move(list));
  }

  ReferenceImpedance ref;
  if (j.contains("z0")) {
    const Json& z = j["z0"];
    if (z.is_number() || (z.is_array() && z.size() == 2 && z[0].is_number())) {
      ref = ReferenceImpedance::uniform(complex_from_json(z, "z0"));
    } else if (z.is_array()) {
      ref = ReferenceImpedance::per_port(vector_from_json(z, "z0"));
    } else {
      bad("z0", "expected a number, [re, im] or a per-port array");
    }
  }
  return NetworkSystem(name, rep, std::move(m), std::move(partition), std::move(ref));
}

Json network_to_json(const NetworkSystem& sys) {
  Json j;
  j["name"] = sys.name();
  j["representation"] = std::string(to_string(sys.representation()));
  j["ports"] = sys.ports();
  Json sets = Json::object();
  for (const auto& [label, ports] : sys.partition().sets()) sets[label] = ports;
  j["sets"] = std::move(sets);
  j["matrix"] = matrix_to_json(sys.matrix());
  const ReferenceImpedance& ref = sys.reference();
  if (ref.is_uniform()) {
    j["z0"] = ref.is_uniform_real() ? Json(ref.uniform_value().real()) : complex_to_json(ref.uniform_value());
  } else {
    j["z0"] = vector_to_json(ref.values());
  }
  return j;
}

SchemeSpec scheme_spec_from_json(const Json& j) {
  SchemeSpec s;
  s.systems = strings_from_json(require(j, "systems", "scheme"), "systems");
  const Json& joins = require(j, "joins", "scheme");
  if (!joins.is_array()) bad("joins", "expected an array");
  for (std::size_t i = 0; i < joins.size(); ++i) {
    const std::string f = field_name("joins", i);
    const auto parts = strings_from_json(joins[i], f);
    if (parts.size() != 4) bad(f, "expected [systemA, setA, systemB, setB]");
    s.joins.push_back({parts[0], parts[1], parts[2], parts[3]});
  }
  if (j.contains("embedded")) s.embedded = strings_from_json(j["embedded"], "embedded");
  return s;
}

Json scheme_spec_to_json(const SchemeSpec& s) {
  Json j;
  j["systems"] = s.systems;
  Json joins = Json::array();
  for (const Join& jn : s.joins) joins.push_back({jn.system_a, jn.set_a, jn.system_b, jn.set_b});
  j["joins"] = std::move(joins);
  j["embedded"] = s.embedded;
  return j;
}

ConnectionScheme build_scheme(const SchemeSpec& spec, const std::vector<NetworkSystem>& networks) {
  std::vector<NetworkSystem> ordered;
  for (const std::string& name : spec.systems) {
    auto it = std::find_if(networks.begin(), networks.end(), [&](const NetworkSystem& n) { return n.name() == name; });
    if (it == networks.end()) bad("systems", "no network named '" + name + "' was supplied");
    ordered.push_back(*it);
  }
  return ConnectionScheme(std::move(ordered), spec.joins, spec.embedded);
}

Graph graph_from_json(const Json& j) {
  Graph g;
  const Json& nodes = require(j, "nodes", "graph");
  if (!nodes.is_array()) bad("nodes", "expected an array of [x, y]");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string f = field_name("nodes", i);
    if (!nodes[i].is_array() || nodes[i].size() != 2 || !nodes[i][0].is_number() || !nodes[i][1].is_number())
      bad(f, "expected [x, y]");
    g.nodes.push_back({nodes[i][0].get<double>(), nodes[i][1].get<double>()});
  }
  const Json& bonds = require(j, "bonds", "graph");
  if (!bonds.is_array()) bad("bonds", "expected an array of [i, j, length]");
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    const std::string f = field_name("bonds", i);
    if (!bonds[i].is_array() || bonds[i].size() != 3 || !bonds[i][2].is_number()) bad(f, "expected [i, j, length]");
    g.bonds.push_back({index_from_json(bonds[i][0], f + "[0]"), index_from_json(bonds[i][1], f + "[1]"), bonds[i][2].get<double>()});
  }
  g.external = indices_from_json(require(j, "external", "graph"), "external");
  try {
    g.validate();
  } catch (const Error& e) {
    bad("graph", e.what());
  }
  return g;
}

Json graph_to_json(const Graph& g) {
  Json j;
  Json nodes = Json::array();
  for (const auto& p : g.nodes) nodes.push_back({p[0], p[1]});
  Json bonds = Json::array();
  for (const Bond& b : g.bonds) bonds.push_back({b.a, b.b, b.length});
  j["nodes"] = std::move(nodes);
  j["bonds"] = std::move(bonds);
  j["external"] = g.external;
  return j;
}

Json cache_to_json(const ConnectionScheme& scheme, const CascadeCache& cache) {
  Json j;
  j["format"] = "netcascade-cache-1";
  Json systems = Json::array();
  SchemeSpec spec;
  for (const NetworkSystem& s : scheme.systems()) {
    systems.push_back(network_to_json(s));
    spec.systems.push_back(s.name());
  }
  spec.joins = scheme.joins();
  spec.embedded = scheme.embedded();
  j["networks"] = std::move(systems);
  j["scheme"] = scheme_spec_to_json(spec);
  Json embedded = Json::array();
  for (Index i = 0; i < scheme.size(); ++i)
    if (std::find(cache.sup->members.begin(), cache.sup->members.end(), i) == cache.sup->members.end())
      embedded.push_back(scheme.system(i).name());
  j["connection_members"] = std::move(embedded);
  j["s_bar"] = matrix_to_json(cache.s_bar);
  j["s_tilde"] = matrix_to_json(cache.s_tilde);
  j["chained_updates"] = cache.chained_updates;
  j["rebuilds"] = cache.rebuilds;
  j["creation_residual"] = cache.creation_residual;
  return j;
}

LoadedCache cache_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", "") != "netcascade-cache-1") bad("format", "not a netcascade cache file");
  const Json& nets = require(j, "networks", "cache");
  if (!nets.is_array()) bad("networks", "expected an array");
  std::vector<NetworkSystem> networks;
  for (std::size_t i = 0; i < nets.size(); ++i) networks.push_back(network_from_json(nets[i], "system" + std::to_string(i)));
  LoadedCache out;
  out.scheme = build_scheme(scheme_spec_from_json(require(j, "scheme", "cache")), networks);

  std::vector<Index> embedded;
  for (const std::string& name : strings_from_json(require(j, "connection_members", "cache"), "connection_members"))
    embedded.push_back(out.scheme.index_of(name));
  std::vector<Index> members;
  for (Index i = 0; i < out.scheme.size(); ++i)
    if (std::find(embedded.begin(), embedded.end(), i) == embedded.end()) members.push_back(i);

  auto sup = std::make_shared<Supersystem>(assemble_supersystem(out.scheme, members));
  auto con = std::make_shared<ConnectionSystem>(embed_connection(out.scheme, embedded));
  CascadeCache& c = out.cache;
  c.s_bar = matrix_from_json(require(j, "s_bar", "cache"), "s_bar");
  c.s_tilde = matrix_from_json(require(j, "s_tilde", "cache"), "s_tilde");
  const Index nc = sup->c_ports.size();
  if (c.s_bar.rows() != nc || c.s_bar.cols() != nc) bad("s_bar", "size does not match the scheme");
  if (c.s_tilde.rows() != sup->n_ports.size() || c.s_tilde.cols() != sup->n_ports.size())
    bad("s_tilde", "size does not match the scheme");
  c.chained_updates = index_from_json(require(j, "chained_updates", "cache"), "chained_updates");
  c.rebuilds = j.contains("rebuilds") ? index_from_json(j["rebuilds"], "rebuilds") : 0;
  c.creation_residual = j.value("creation_residual", 0.0);
  c.sup = std::move(sup);
  c.con = std::move(con);
  c.waves = make_lazy_wave_maps();
  return out;
}

}  // namespace netcascade
