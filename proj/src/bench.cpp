#include "netcascade/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "netcascade/error.hpp"
#include "netcascade/meta_network.hpp"
#include "netcascade/planner.hpp"
#include "netcascade/update.hpp"

namespace netcascade {

std::string to_string(BenchExperiment e) {
  switch (e) {
    case BenchExperiment::MethodsCompare: return "methods-compare";
    case BenchExperiment::UpdateCompare: return "update-compare";
    case BenchExperiment::EpsilonSweep: return "epsilon-sweep";
  }
  return "unknown";
}

void BenchConfig::validate() const {
  if (n_bus.empty()) fail(ErrorCode::InvalidArgument, "no n_bus values");
  for (Index n : n_bus)
    if (n < 1) fail(ErrorCode::InvalidArgument, "n_bus values must be at least 1");
  if (trials && *trials < 1) fail(ErrorCode::InvalidArgument, "trials must be at least 1");
  if (repetitions < 1) fail(ErrorCode::InvalidArgument, "repetitions must be at least 1");
  for (double e : epsilons)
    if (!(e > 0.0 && e < 1.0)) fail(ErrorCode::InvalidEpsilon, "epsilon must lie in (0, 1)");
}

Index BenchConfig::trials_for(Index n) const {
  if (trials) return *trials;
  return std::max<Index>(3, static_cast<Index>(std::llround(600.0 / static_cast<double>(n))));
}

std::vector<double> BenchConfig::epsilon_grid() const {
  if (!epsilons.empty()) return epsilons;
  std::vector<double> g;
  for (int i = 0; i <= 20; ++i) g.push_back(std::pow(10.0, -12.0 + 0.5 * i));
  return g;
}

std::string BenchReport::to_csv() const {
  std::ostringstream out;
  out << kBenchCsvHeader << '\n';
  char buf[64];
  for (const BenchRow& r : rows) {
    out << r.experiment << ',' << r.n_bus << ',' << r.method << ',' << r.subsystem << ',';
    std::snprintf(buf, sizeof buf, "%.6e", r.median_time_s);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.rel_std_err);
    out << buf << ',' << r.trials << '\n';
  }
  return out.str();
}

double relative_std_error(const ComplexMatrix& x, const ComplexMatrix& ref) {
  if (x.rows() != ref.rows() || x.cols() != ref.cols()) fail(ErrorCode::InvalidArgument, "shape mismatch");
  const Index n = x.rows() * x.cols();
  if (n == 0) return 0.0;
  cplx mean = 0.0;
  double mean_ref = 0.0;
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) {
      mean += x(i, j) - ref(i, j);
      mean_ref += std::abs(ref(i, j));
    }
  mean /= static_cast<double>(n);
  mean_ref /= static_cast<double>(n);
  double var = 0.0;
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j) var += std::norm(x(i, j) - ref(i, j) - mean);
  var /= static_cast<double>(n);
  return std::sqrt(var) / mean_ref;
}

double median_time(const std::function<void()>& fn, Index reps) {
  using clock = std::chrono::steady_clock;
  fn();
  std::vector<double> t;
  for (Index r = 0; r < reps; ++r) {
    const auto t0 = clock::now();
    fn();
    t.push_back(std::chrono::duration<double>(clock::now() - t0).count());
  }
  std::sort(t.begin(), t.end());
  const std::size_t m = t.size() / 2;
  return t.size() % 2 ? t[m] : 0.5 * (t[m - 1] + t[m]);
}

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct Accum {
  std::vector<double> times;
  double err_sum = 0.0;
  Index count = 0;
  void add_error(double e) {
    err_sum += e;
    ++count;
  }
  double mean_error() const { return count ? err_sum / static_cast<double>(count) : 0.0; }
};

std::uint64_t trial_seed(const BenchConfig& cfg, Index n_bus, Index trial) {
  return derive_seed(cfg.seed, n_bus, trial);
}

}  // namespace

BenchReport run_methods_compare(const BenchConfig& cfg) {
  cfg.validate();
  BenchReport rep;
  const char* methods[] = {"global", "reduced", "iterative"};
  for (bool modified : {false, true}) {
    for (Index n : cfg.n_bus) {
      const Index trials = cfg.trials_for(n);
      Accum acc[3];
      for (Index t = 0; t < trials; ++t) {
        const GraphNetwork net = make_meta_network(n, trial_seed(cfg, n, t), cfg.k, modified);
        const ComplexMatrix ref = net.oracle();
        const ReductionPlan global = plan_reduction(net.scheme, ReductionObjective::None);
        const ReductionPlan reduced = plan_reduction(net.scheme, ReductionObjective::MaxReduction);
        const EvalOptions no_cache{.keep_cache = false};
        std::function<ComplexMatrix()> run[3] = {
            [&] { return evaluate(net.scheme, global, no_cache).s; },
            [&] { return evaluate(net.scheme, reduced, no_cache).s; },
            [&] { return iterative_cascade(net.scheme); },
        };
        for (int m = 0; m < 3; ++m) {
          acc[m].add_error(relative_std_error(run[m](), ref));
          if (t == 0 || cfg.time_all_trials) acc[m].times.push_back(median_time([&] { (void)run[m](); }, cfg.repetitions));
        }
      }
      for (int m = 0; m < 3; ++m) {
        rep.rows.push_back({"methods-compare", n, methods[m], modified ? "meta-modified" : "meta",
                            median_of(acc[m].times), acc[m].mean_error(), trials});
      }
    }
  }
  return rep;
}

BenchReport run_update_compare(const BenchConfig& cfg) {
  cfg.validate();
  BenchReport rep;
  // "global" also produces an updatable cache, as the update itself needs one;
  // "global-nocache" is the cheapest from-scratch evaluation.
  const char* methods[] = {"update", "global", "global-nocache", "iterative"};
  constexpr int kMethods = 4;
  for (Index n : cfg.n_bus) {
    const Index trials = cfg.trials_for(n);
    for (const char* name : {"A", "C", "D"}) {
      Accum acc[kMethods];
      for (Index t = 0; t < trials; ++t) {
        const std::uint64_t seed = trial_seed(cfg, n, t);
        const GraphNetwork net = make_meta_network(n, seed, cfg.k);
        const Index sys = net.scheme.index_of(name);
        const ReductionPlan global = plan_reduction(net.scheme, ReductionObjective::None);
        const CascadeCache cache = *evaluate(net.scheme, global).cache;
        const GraphNetwork next = regenerate_system(net, sys, seed);
        const SubsystemUpdate upd{sys, next.scheme.system(sys).matrix()};
        const EvalOptions no_cache{.keep_cache = false};

        const ComplexMatrix fresh = evaluate(next.scheme, global).s;
        const ComplexMatrix ref = next.oracle();
        acc[0].add_error(relative_std_error(update_subsystem(cache, upd).s, fresh));
        acc[1].add_error(relative_std_error(fresh, ref));
        acc[2].add_error(relative_std_error(evaluate(next.scheme, global, no_cache).s, ref));
        acc[3].add_error(relative_std_error(iterative_cascade(next.scheme), ref));
        if (t == 0 || cfg.time_all_trials) {
          acc[0].times.push_back(median_time([&] { (void)update_subsystem(cache, upd); }, cfg.repetitions));
          acc[1].times.push_back(median_time([&] { (void)evaluate(next.scheme, global); }, cfg.repetitions));
          acc[2].times.push_back(median_time([&] { (void)evaluate(next.scheme, global, no_cache); }, cfg.repetitions));
          acc[3].times.push_back(median_time([&] { (void)iterative_cascade(next.scheme); }, cfg.repetitions));
        }
      }
      for (int m = 0; m < kMethods; ++m) {
        rep.rows.push_back({"update-compare", n, methods[m], name, median_of(acc[m].times), acc[m].mean_error(), trials});
      }
    }
  }
  return rep;
}

BenchReport run_epsilon_sweep(const BenchConfig& cfg) {
  cfg.validate();
  BenchReport rep;
  const std::vector<double> grid = cfg.epsilon_grid();
  for (Index n : cfg.n_bus) {
    const Index trials = cfg.trials_for(n);
    std::vector<Accum> acc(grid.size());
    for (Index t = 0; t < trials; ++t) {
      const GraphNetwork net = make_meta_network(n, trial_seed(cfg, n, t), cfg.k);
      const ComplexMatrix z_ref = z_from_s(net.oracle());
      for (std::size_t e = 0; e < grid.size(); ++e) {
        acc[e].add_error(relative_std_error(evaluate_impedance(net.scheme, grid[e]), z_ref));
        if (t == 0 || cfg.time_all_trials)
          acc[e].times.push_back(median_time([&] { (void)evaluate_impedance(net.scheme, grid[e]); }, cfg.repetitions));
      }
    }
    std::size_t best = 0;
    char buf[32];
    for (std::size_t e = 0; e < grid.size(); ++e) {
      std::snprintf(buf, sizeof buf, "%.3g", grid[e]);
      rep.rows.push_back({"epsilon-sweep", n, "impedance", buf, median_of(acc[e].times), acc[e].mean_error(), trials});
      if (acc[e].mean_error() < acc[best].mean_error()) best = e;
    }
    rep.best_epsilon.emplace_back(n, grid[best]);
  }
  return rep;
}

BenchReport run_bench(const BenchConfig& cfg) {
  switch (cfg.experiment) {
    case BenchExperiment::MethodsCompare: return run_methods_compare(cfg);
    case BenchExperiment::UpdateCompare: return run_update_compare(cfg);
    case BenchExperiment::EpsilonSweep: return run_epsilon_sweep(cfg);
  }
  fail(ErrorCode::InvalidArgument, "unknown experiment");
}

}  // namespace netcascade
