#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netcascade/bench.hpp"
#include "netcascade/error.hpp"
#include "netcascade/json_io.hpp"
#include "netcascade/planner.hpp"
#include "netcascade/update.hpp"
#include "netcascade/waves.hpp"

using namespace netcascade;
namespace fs = std::filesystem;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitNumerical = 3;

cplx parse_k(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "--k expects re,im");
  }
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    write_text_file(out, text);
  }
}

Json ports_to_json(const ConnectionScheme& scheme, const std::vector<PortRef>& ports) {
  Json arr = Json::array();
  for (const PortRef& p : ports) arr.push_back({scheme.system(p.system).name(), p.port});
  return arr;
}

ReductionPlan plan_from_name(const ConnectionScheme& scheme, const std::string& name) {
  if (name == "global") return plan_reduction(scheme, ReductionObjective::None);
  if (name == "reduced") return plan_reduction(scheme, ReductionObjective::MaxReduction);
  if (name == "closed") return plan_reduction(scheme, ReductionObjective::PreferClosedPorts);
  if (name == "declared") {
    std::vector<Index> embedded;
    for (const std::string& n : scheme.embedded()) embedded.push_back(scheme.index_of(n));
    return manual_plan(scheme, embedded);
  }
  fail(ErrorCode::ParseError, "--plan expects global, reduced, closed or declared");
}

struct ConnectArgs {
  std::vector<std::string> networks;
  std::string scheme;
  std::string plan = "global";
  std::string as = "S";
  double eps = kDefaultQuasiDeltaEpsilon;
  std::string waves;
  std::string save_cache;
  std::string out;
};

int run_connect(const ConnectArgs& a) {
  std::vector<NetworkSystem> nets;
  for (const std::string& f : a.networks) nets.push_back(network_from_json(read_json_file(f), fs::path(f).stem().string()));
  const ConnectionScheme scheme = build_scheme(scheme_spec_from_json(read_json_file(a.scheme)), nets);
  const Representation as = parse_representation(a.as);

  Json out;
  out["representation"] = a.as;
  out["ports"] = ports_to_json(scheme, scheme.canonical_free_ports());
  if (as != Representation::Scattering) {
    if (!a.waves.empty() || !a.save_cache.empty())
      fail(ErrorCode::InvalidArgument, "--recover-waves and --save-cache need the scattering path");
    const ComplexMatrix m = as == Representation::Impedance ? evaluate_impedance(scheme, a.eps) : evaluate_admittance(scheme, a.eps);
    out["epsilon"] = a.eps;
    out["matrix"] = matrix_to_json(m);
    emit(out.dump(2), a.out);
    return 0;
  }

  const ReductionPlan plan = plan_from_name(scheme, a.plan);
  const bool need_cache = !a.waves.empty() || !a.save_cache.empty();
  const EvalResult r = evaluate(scheme, plan, {.keep_cache = need_cache});
  out["plan"] = {{"connection_members", Json::array()}, {"fully_reduced", plan.fully_reduced}, {"requires_star", plan.requires_star}};
  for (Index i : plan.connection_members) out["plan"]["connection_members"].push_back(scheme.system(i).name());
  out["matrix"] = matrix_to_json(r.s);

  if (need_cache && !r.cache) fail(ErrorCode::InvalidArgument, "this plan keeps no cache (embedded systems have free ports)");
  if (!a.waves.empty()) {
    const std::vector<cplx> a_n = vector_from_json(read_json_file(a.waves), "a_n");
    if (a_n.size() != r.s.rows()) fail(ErrorCode::PortSetMismatch, "a_n must have one entry per free port");
    const WaveMaps& maps = wave_maps(*r.cache);
    const ComplexMatrix av(a_n.size(), 1, a_n);
    const ComplexMatrix psi = multiply(maps.psi_cn, av), phi = multiply(maps.phi_cn, av);
    std::vector<PortRef> c_ports;
    for (const ConnectedPort& c : maps.c_ports) c_ports.push_back(c.ref);
    out["waves"] = {{"c_ports", ports_to_json(scheme, c_ports)},
                    {"psi_c", vector_to_json(std::span<const cplx>(psi.data(), psi.rows()))},
                    {"phi_c", vector_to_json(std::span<const cplx>(phi.data(), phi.rows()))}};
  }
  if (!a.save_cache.empty()) write_text_file(a.save_cache, cache_to_json(scheme, *r.cache).dump());
  emit(out.dump(2), a.out);
  return 0;
}

struct UpdateArgs {
  std::string cache, system, matrix, save_cache, out;
};

int run_update(const UpdateArgs& a) {
  LoadedCache lc = cache_from_json(read_json_file(a.cache));
  const Index sys = lc.scheme.index_of(a.system);
  const Json mj = read_json_file(a.matrix);
  ComplexMatrix m;
  if (mj.is_object()) {
    m = network_from_json(mj, a.system).converted(Representation::Scattering).matrix();
  } else {
    m = matrix_from_json(mj, "matrix");
  }
  const UpdateResult u = update_subsystem(lc.cache, {sys, m});
  Json out;
  out["representation"] = "S";
  out["ports"] = ports_to_json(lc.scheme, u.cache.sup->n_ports);
  out["matrix"] = matrix_to_json(u.s);
  out["rebuilt"] = u.rebuilt;
  if (!a.save_cache.empty()) write_text_file(a.save_cache, cache_to_json(lc.scheme.with_system_matrix(sys, m), u.cache).dump());
  emit(out.dump(2), a.out);
  return 0;
}

struct BenchArgs {
  std::vector<Index> n_bus;
  std::uint64_t seed = 1;
  std::string k = "3,0.05";
  Index trials = 0;
  Index reps = 5;
  std::vector<double> eps;
  std::string format = "csv";
  std::string out;
};

int run_bench_cmd(BenchExperiment e, const BenchArgs& a) {
  BenchConfig cfg;
  cfg.experiment = e;
  if (!a.n_bus.empty()) cfg.n_bus = a.n_bus;
  cfg.seed = a.seed;
  cfg.k = parse_k(a.k);
  if (a.trials > 0) cfg.trials = a.trials;
  cfg.repetitions = a.reps;
  cfg.epsilons = a.eps;
  const BenchReport rep = run_bench(cfg);
  if (a.format == "csv") {
    emit(rep.to_csv(), a.out);
  } else {
    Json rows = Json::array();
    for (const BenchRow& r : rep.rows)
      rows.push_back({{"experiment", r.experiment}, {"n_bus", r.n_bus}, {"method", r.method}, {"subsystem", r.subsystem},
                      {"median_time_s", r.median_time_s}, {"rel_std_err", r.rel_std_err}, {"trials", r.trials}});
    Json out{{"rows", rows}};
    if (!rep.best_epsilon.empty()) {
      Json best = Json::array();
      for (auto [n, eps] : rep.best_epsilon) best.push_back({{"n_bus", n}, {"epsilon", eps}});
      out["best_epsilon"] = best;
    }
    emit(out.dump(2), a.out);
  }
  for (auto [n, eps] : rep.best_epsilon) std::fprintf(stderr, "n_bus=%zu: minimising epsilon %.3g\n", n, eps);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Connect multiport networks, update them and run the benchmark experiments"};
  app.require_subcommand(1);

  ConnectArgs ca;
  auto* connect = app.add_subcommand("connect", "Evaluate a connection scheme");
  connect->add_option("networks", ca.networks, "Network JSON files")->required()->check(CLI::ExistingFile);
  connect->add_option("--scheme", ca.scheme, "Scheme JSON file")->required()->check(CLI::ExistingFile);
  connect->add_option("--plan", ca.plan, "global, reduced, closed or declared");
  connect->add_option("--as", ca.as, "Result representation: S, Z or Y (Z/Y use a quasi-delta connection)");
  connect->add_option("--eps", ca.eps, "Quasi-delta epsilon for --as Z|Y");
  connect->add_option("--recover-waves", ca.waves, "JSON array a_N; adds psi_C and phi_C to the output");
  connect->add_option("--save-cache", ca.save_cache, "Write the cascade cache for later updates");
  connect->add_option("--out", ca.out, "Output file (default stdout)");

  UpdateArgs ua;
  auto* update = app.add_subcommand("update", "Replace one subsystem using a saved cache");
  update->add_option("--cache", ua.cache, "Cache file from connect --save-cache")->required()->check(CLI::ExistingFile);
  update->add_option("--system", ua.system, "Name of the changed subsystem")->required();
  update->add_option("--matrix", ua.matrix, "Network JSON or bare matrix")->required()->check(CLI::ExistingFile);
  update->add_option("--save-cache", ua.save_cache, "Write the updated cache");
  update->add_option("--out", ua.out, "Output file (default stdout)");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Benchmark experiments");
  bench->require_subcommand(1);
  auto add_bench_opts = [&](CLI::App* c) {
    c->add_option("--n-bus", ba.n_bus, "Comma-separated N_bus values")->delimiter(',');
    c->add_option("--seed", ba.seed, "Base seed");
    c->add_option("--k", ba.k, "Wavevector re,im");
    c->add_option("--trials", ba.trials, "Trials per point (default max(3, round(600/N_bus)))");
    c->add_option("--reps", ba.reps, "Timed repetitions after one warm-up");
    c->add_option("--format", ba.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--out", ba.out, "Output file (default stdout)");
  };
  auto* b_methods = bench->add_subcommand("methods", "Global vs reduced vs iterative");
  auto* b_update = bench->add_subcommand("update", "Woodbury update vs re-evaluation");
  auto* b_eps = bench->add_subcommand("epsilon", "Quasi-delta epsilon sweep on the impedance path");
  for (auto* c : {b_methods, b_update, b_eps}) add_bench_opts(c);
  b_eps->add_option("--eps", ba.eps, "Comma-separated epsilon grid")->delimiter(',');

  auto* graph = app.add_subcommand("graph", "Transmission-line graph oracle");
  graph->require_subcommand(1);
  Index g_n = 4;
  double g_density = 0.5;
  std::uint64_t g_seed = 1;
  std::string g_k = "3,0.05", g_out, g_file, g_file2;
  std::vector<std::string> g_pairs;
  auto* g_gen = graph->add_subcommand("gen", "Random all-external graph");
  g_gen->add_option("--n", g_n, "Number of nodes (= ports)");
  g_gen->add_option("--density", g_density, "Fraction of node pairs bonded");
  g_gen->add_option("--seed", g_seed, "Seed");
  auto* g_scatter = graph->add_subcommand("scatter", "Scattering matrix of a graph");
  g_scatter->add_option("graph", g_file, "Graph JSON")->required()->check(CLI::ExistingFile);
  auto* g_glue = graph->add_subcommand("glue", "Glue two graphs at paired external nodes");
  g_glue->add_option("first", g_file, "Graph JSON")->required()->check(CLI::ExistingFile);
  g_glue->add_option("second", g_file2, "Graph JSON")->required()->check(CLI::ExistingFile);
  g_glue->add_option("--pair", g_pairs, "i:j pairs, comma-separated")->delimiter(',');
  for (auto* c : {g_gen, g_scatter, g_glue}) {
    c->add_option("--k", g_k, "Wavevector re,im");
    c->add_option("--out", g_out, "Output file (default stdout)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }

  try {
    if (*connect) return run_connect(ca);
    if (*update) return run_update(ua);
    if (*b_methods) return run_bench_cmd(BenchExperiment::MethodsCompare, ba);
    if (*b_update) return run_bench_cmd(BenchExperiment::UpdateCompare, ba);
    if (*b_eps) return run_bench_cmd(BenchExperiment::EpsilonSweep, ba);
    if (*g_gen) {
      emit(graph_to_json(random_graph(g_n, g_density, g_seed, parse_k(g_k))).dump(2), g_out);
      return 0;
    }
    if (*g_scatter) {
      const GraphSolution sol = graph_scattering(graph_from_json(read_json_file(g_file)), parse_k(g_k));
      emit(Json{{"representation", "S"}, {"matrix", matrix_to_json(sol.s)}}.dump(2), g_out);
      return 0;
    }
    if (*g_glue) {
      std::vector<std::pair<Index, Index>> pairs;
      for (const std::string& p : g_pairs) {
        const auto colon = p.find(':');
        if (colon == std::string::npos) fail(ErrorCode::ParseError, "--pair expects i:j");
        try {
          pairs.emplace_back(std::stoul(p.substr(0, colon)), std::stoul(p.substr(colon + 1)));
        } catch (const std::exception&) {
          fail(ErrorCode::ParseError, "--pair expects i:j");
        }
      }
      const Graph g = glue_graphs(graph_from_json(read_json_file(g_file)), graph_from_json(read_json_file(g_file2)), pairs);
      emit(graph_to_json(g).dump(2), g_out);
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    if (e.condition()) std::fprintf(stderr, "condition estimate: %.3e\n", *e.condition());
    return is_numerical(e.code()) ? kExitNumerical : kExitParse;
  }
  return 0;
}
