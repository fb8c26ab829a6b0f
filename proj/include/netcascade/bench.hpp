#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "netcascade/linalg/matrix.hpp"

namespace netcascade {

enum class BenchExperiment { MethodsCompare, UpdateCompare, EpsilonSweep };

std::string to_string(BenchExperiment e);

struct BenchConfig {
  BenchExperiment experiment = BenchExperiment::MethodsCompare;
  std::vector<Index> n_bus = {1, 2, 5, 10, 20, 50, 100};
  std::optional<Index> trials;  // per point; default max(3, round(600 / n_bus))
  std::uint64_t seed = 1;
  cplx k{3.0, 0.05};
  Index repetitions = 5;  // timed runs after one warm-up
  std::vector<double> epsilons;  // empty: 21 log-spaced points in [1e-12, 1e-2]
  bool time_all_trials = false;  // time every trial instead of the first one only

  void validate() const;
  Index trials_for(Index n_bus) const;
  std::vector<double> epsilon_grid() const;
};

struct BenchRow {
  std::string experiment;
  Index n_bus = 0;
  std::string method;
  std::string subsystem;  // variant, updated subsystem or epsilon, depending on the experiment
  double median_time_s = 0.0;
  double rel_std_err = 0.0;  // mean over trials
  Index trials = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  // Epsilon sweep only: minimising epsilon per n_bus, in n_bus order.
  std::vector<std::pair<Index, double>> best_epsilon;

  std::string to_csv() const;
};

inline constexpr const char* kBenchCsvHeader = "experiment,n_bus,method,subsystem,median_time_s,rel_std_err,trials";

// std(x - ref) / mean(|ref|) over all entries, std taken over complex values.
double relative_std_error(const ComplexMatrix& x, const ComplexMatrix& ref);

// Median wall time of `reps` runs of fn after one warm-up run.
double median_time(const std::function<void()>& fn, Index reps);

// Global, reduced and iterative evaluation of the meta-network and its
// modified variant, errors against the glued-graph oracle.
BenchReport run_methods_compare(const BenchConfig& cfg);

// Woodbury update of A, C or D against global (with and without the cache the
// update needs) and iterative re-evaluation. The update row's error is against
// a from-scratch global evaluation of the updated network; the other rows are
// against the glued-graph oracle.
BenchReport run_update_compare(const BenchConfig& cfg);

// Impedance path with a quasi-delta connection, error against the oracle S
// converted to Z; the subsystem column holds epsilon.
BenchReport run_epsilon_sweep(const BenchConfig& cfg);

BenchReport run_bench(const BenchConfig& cfg);

}  // namespace netcascade
