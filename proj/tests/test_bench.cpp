#include <gtest/gtest.h>

#include <sstream>

#include "netcascade/bench.hpp"
#include "test_support.hpp"

using namespace netcascade;
using namespace nc_test;

namespace {

BenchConfig small(BenchExperiment e) {
  BenchConfig cfg;
  cfg.experiment = e;
  cfg.n_bus = {1, 3};
  cfg.trials = 2;
  cfg.repetitions = 1;
  cfg.seed = 9;
  return cfg;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Bench, RelativeStdError) {
  const ComplexMatrix ref{{3.0, cplx(0.0, -4.0)}, {1.0, 2.0}};
  EXPECT_EQ(relative_std_error(ref, ref), 0.0);
  // Differences d and -d have zero mean and std |d|; mean |ref| is 2.5.
  const cplx d(0.3, 0.4);
  const ComplexMatrix x{{3.0 + d, cplx(0.0, -4.0) - d}, {1.0 + d, 2.0 - d}};
  EXPECT_NEAR(relative_std_error(x, ref), 0.5 / 2.5, 1e-15);
  EXPECT_EQ(code_of([&] { (void)relative_std_error(ComplexMatrix(1, 2), ref); }), ErrorCode::InvalidArgument);
}

TEST(Bench, ConfigDefaultsAndValidation) {
  BenchConfig cfg;
  EXPECT_EQ(cfg.trials_for(1), 600u);
  EXPECT_EQ(cfg.trials_for(100), 6u);
  EXPECT_EQ(cfg.trials_for(500), 3u);
  const auto grid = cfg.epsilon_grid();
  ASSERT_EQ(grid.size(), 21u);
  EXPECT_DOUBLE_EQ(grid.front(), 1e-12);
  EXPECT_DOUBLE_EQ(grid.back(), 1e-2);
  cfg.n_bus = {};
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::InvalidArgument);
  cfg.n_bus = {0};
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::InvalidArgument);
  cfg.n_bus = {2};
  cfg.epsilons = {2.0};
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::InvalidEpsilon);
}

TEST(Bench, MethodsCompareRows) {
  const BenchReport rep = run_bench(small(BenchExperiment::MethodsCompare));
  ASSERT_EQ(rep.rows.size(), 2u * 2u * 3u);
  for (const BenchRow& r : rep.rows) {
    EXPECT_EQ(r.experiment, "methods-compare");
    EXPECT_TRUE(r.subsystem == "meta" || r.subsystem == "meta-modified");
    EXPECT_TRUE(r.method == "global" || r.method == "reduced" || r.method == "iterative");
    EXPECT_LT(r.rel_std_err, 1e-11) << r.method << " " << r.n_bus;
    EXPECT_GT(r.median_time_s, 0.0);
    EXPECT_EQ(r.trials, 2u);
  }
  const auto csv = lines(rep.to_csv());
  ASSERT_EQ(csv.size(), rep.rows.size() + 1);
  EXPECT_EQ(csv.front(), kBenchCsvHeader);
  for (std::size_t i = 1; i < csv.size(); ++i) EXPECT_EQ(std::count(csv[i].begin(), csv[i].end(), ','), 6);
}

TEST(Bench, UpdateCompareRows) {
  const BenchReport rep = run_bench(small(BenchExperiment::UpdateCompare));
  ASSERT_EQ(rep.rows.size(), 2u * 3u * 4u);
  for (const BenchRow& r : rep.rows) {
    EXPECT_TRUE(r.subsystem == "A" || r.subsystem == "C" || r.subsystem == "D");
    EXPECT_LT(r.rel_std_err, 1e-11) << r.method << " " << r.subsystem;
  }
  EXPECT_EQ(rep.rows[0].method, "update");
  EXPECT_EQ(rep.rows[1].method, "global");
  EXPECT_EQ(rep.rows[2].method, "global-nocache");
  EXPECT_EQ(rep.rows[3].method, "iterative");
}

TEST(Bench, EpsilonSweepRows) {
  BenchConfig cfg = small(BenchExperiment::EpsilonSweep);
  cfg.epsilons = {1e-2, 1e-5, 1e-8};
  const BenchReport rep = run_bench(cfg);
  ASSERT_EQ(rep.rows.size(), 2u * 3u);
  EXPECT_EQ(rep.rows[1].subsystem, "1e-05");
  ASSERT_EQ(rep.best_epsilon.size(), 2u);
  for (auto [n, eps] : rep.best_epsilon) EXPECT_LT(eps, 1e-2) << n;
  EXPECT_GT(rep.rows[0].rel_std_err, rep.rows[1].rel_std_err);
}

TEST(Bench, ErrorsAreDeterministic) {
  const BenchConfig cfg = small(BenchExperiment::MethodsCompare);
  const BenchReport a = run_bench(cfg), b = run_bench(cfg);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].rel_std_err, b.rows[i].rel_std_err);
}
