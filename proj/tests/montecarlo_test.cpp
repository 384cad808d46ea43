#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "test_support.hpp"
#include "uwbpc/montecarlo.hpp"

namespace uwbpc::mc {
namespace {

using testing::rel_diff;

std::size_t column(const ExperimentResult& r, const std::string& name) {
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    if (r.columns[i] == name) return i;
  }
  throw std::out_of_range("no column " + name);
}

double real(const csv::Row& row, std::size_t i) {
  if (const auto* d = std::get_if<double>(&row[i])) return *d;
  return static_cast<double>(std::get<std::int64_t>(row[i]));
}

std::string to_csv(const ExperimentResult& r) {
  std::ostringstream os;
  csv::write(os, r.columns, r.rows);
  return os.str();
}

void expect_count_columns(const ExperimentResult& r) {
  EXPECT_NO_THROW(column(r, "realizations"));
  EXPECT_NO_THROW(column(r, "excluded"));
}

TEST(ParallelMapTest, KeepsIndexOrder) {
  const auto out = parallel_map(1000, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  ASSERT_EQ(out.size(), 1000u);
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], static_cast<int>(i * i));
  EXPECT_TRUE(parallel_map(0, 3, [](std::size_t) { return 1; }).empty());
}

TEST(ParallelMapTest, RethrowsTaskErrors) {
  EXPECT_THROW(parallel_map(100, 3,
                            [](std::size_t i) {
                              if (i == 17) throw std::runtime_error("boom");
                              return 0;
                            }),
               std::runtime_error);
}

TEST(ParallelMapTest, UsesSeveralWorkers) {
  std::atomic<int> live{0}, peak{0};
  parallel_map(8, 4, [&](std::size_t) {
    const int now = ++live;
    int p = peak.load();
    while (now > p && !peak.compare_exchange_weak(p, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    --live;
    return 0;
  });
  EXPECT_GT(peak.load(), 1);
}

TEST(LoadFactorMappingTest, HitsTarget) {
  for (double rho : {0.01, 0.02, 0.03, 0.04, 0.05}) {
    const LoadFactorDimensions d = dimensions_for_load_factor(rho, 200);
    EXPECT_GE(d.chips, 10);
    EXPECT_GE(d.paths, 2);
    EXPECT_LE(d.paths, 200);
    EXPECT_LE(rel_diff(d.rho, load_factor(d.paths, d.chips)), 1e-15);
    EXPECT_LT(std::abs(d.rho - rho) / rho, 0.01) << rho;
  }
  const LoadFactorDimensions d = dimensions_for_load_factor(0.02, 200);
  EXPECT_EQ(d.chips, 55);
  EXPECT_EQ(d.paths, 189);
  EXPECT_THROW(dimensions_for_load_factor(0.0, 200), ConfigError);
  EXPECT_THROW(dimensions_for_load_factor(5.0, 200), ConfigError);
}

TEST(DefaultSpecTest, KnownIds) {
  for (const std::string& id : experiment_ids()) EXPECT_EQ(default_spec(id).id, id);
  EXPECT_EQ(default_spec("table1").chips_frames.size() * default_spec("table1").paths_users.size(), 24u);
  EXPECT_EQ(default_spec("table2").rho.size() * default_spec("table2").frames_users.size(), 20u);
  EXPECT_EQ(default_spec("fig5").base.users, 32);
  EXPECT_THROW(default_spec("fig7"), ConfigError);
}

TEST(Table1Test, SingleUserHasNoDispersion) {
  ExperimentSpec s = default_spec("table1");
  s.realizations = 20;
  s.paths_users = {{20, 1}};
  s.chips_frames = {{30, 10}};
  const ExperimentResult r = run_experiment(s);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(real(r.rows[0], column(r, "ratio")), 0.0);
  expect_count_columns(r);
}

TEST(Table1Test, SmallRunIsWellBelowOne) {
  ExperimentSpec s = default_spec("table1");
  s.realizations = 40;
  s.chips_frames = {{30, 10}, {100, 50}};
  s.paths_users = {{20, 8}};
  const ExperimentResult r = run_experiment(s);
  ASSERT_EQ(r.rows.size(), 2u);
  const double a = real(r.rows[0], column(r, "ratio"));
  const double b = real(r.rows[1], column(r, "ratio"));
  EXPECT_GT(a, b);
  EXPECT_LT(a, 1e-2);
  EXPECT_GT(b, 0.0);
  EXPECT_EQ(real(r.rows[0], column(r, "excluded")), 0.0);
}

TEST(Table2Test, SingleUserReducesToSelfInterference) {
  ExperimentSpec s = default_spec("table2");
  s.realizations = 50;
  s.rho = {0.02};
  s.frames_users = {{20, 1}};
  const ExperimentResult r = run_experiment(s);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(real(r.rows[0], column(r, "approximation")), 0.0);
  EXPECT_GT(real(r.rows[0], column(r, "mean_interference")), 0.0);
  EXPECT_TRUE(std::isfinite(real(r.rows[0], column(r, "nmse"))));
}

TEST(Table2Test, GridOrderAndDimensions) {
  ExperimentSpec s = default_spec("table2");
  s.realizations = 30;
  s.rho = {0.01, 0.05};
  const ExperimentResult r = run_experiment(s);
  ASSERT_EQ(r.rows.size(), 8u);
  EXPECT_EQ(real(r.rows[0], column(r, "rho")), 0.01);
  EXPECT_EQ(real(r.rows[1], column(r, "K")), 12.0);
  EXPECT_EQ(real(r.rows[4], column(r, "rho")), 0.05);
  EXPECT_EQ(r.metadata["dimensions"].size(), 2u);
  for (const auto& row : r.rows) EXPECT_LT(real(row, column(r, "nmse")), 0.05);
  expect_count_columns(r);
}

TEST(Fig3Test, IncreasingTowardsTarget) {
  const ExperimentResult r = run_experiment(default_spec("fig3"));
  ASSERT_EQ(r.rows.size(), 101u);
  const std::size_t c = column(r, "gamma_star_db");
  for (std::size_t i = 1; i < r.rows.size(); ++i) EXPECT_GT(real(r.rows[i], c), real(r.rows[i - 1], c));
  EXPECT_NEAR(real(r.rows.back(), c), 11.1, 0.05);
  EXPECT_NEAR(real(r.rows.back(), column(r, "gamma_bar_star_db")), 11.12, 0.01);
}

TEST(Fig4Test, NormalizedUtilityIsConstantPerCurve) {
  ExperimentSpec s = default_spec("fig4");
  s.realizations = 30;
  const ExperimentResult r = run_experiment(s);
  ASSERT_EQ(r.summary_rows.size(), 2u);
  EXPECT_EQ(r.rows.size(), 2u * 30u * 5u);
  const std::size_t med = [&] {
    for (std::size_t i = 0; i < r.summary_columns.size(); ++i)
      if (r.summary_columns[i] == "median_rel_error") return i;
    return std::size_t{0};
  }();
  for (const auto& row : r.summary_rows) EXPECT_LT(real(row, med), 0.05);
  const std::size_t th = r.summary_columns.size() - 1;
  EXPECT_GT(real(r.summary_rows[0], th), real(r.summary_rows[1], th));
  const std::size_t u = column(r, "u_theory"), h = column(r, "h");
  const double c0 = real(r.rows[0], u) / real(r.rows[0], h);
  for (std::size_t i = 0; i < 150; ++i) EXPECT_LE(rel_diff(real(r.rows[i], u) / real(r.rows[i], h), c0), 1e-12);
}

TEST(Fig5Test, OutageFallsWithFrames) {
  ExperimentSpec s = default_spec("fig5");
  s.realizations = 60;
  s.frames = {5, 9, 20};
  const ExperimentResult r = run_experiment(s);
  ASSERT_EQ(r.rows.size(), 3u);
  const std::size_t p = column(r, "p_out");
  EXPECT_GE(real(r.rows[0], p), 0.95);
  EXPECT_GE(real(r.rows[0], p), real(r.rows[1], p));
  EXPECT_GE(real(r.rows[1], p), real(r.rows[2], p));
  EXPECT_LE(real(r.rows[2], p), 0.05);
  EXPECT_EQ(real(r.rows[0], column(r, "N_f_min")), 9.0);
  expect_count_columns(r);
}

TEST(Fig6Test, GapWidensWithLoad) {
  ExperimentSpec s = default_spec("fig6");
  s.realizations = 20;
  s.rho = {0.01, 0.03, 0.05};
  const ExperimentResult r = run_experiment(s);
  ASSERT_EQ(r.rows.size(), 3u);
  const std::size_t ns = column(r, "nash_sim"), ps = column(r, "pareto_sim");
  const std::size_t nt = column(r, "nash_theory"), pt = column(r, "pareto_theory");
  double prev_gap = -1.0;
  for (const auto& row : r.rows) {
    EXPECT_GE(real(row, ps), real(row, ns) * (1 - 1e-9));
    EXPECT_GE(real(row, pt), real(row, nt));
    const double gap = (real(row, pt) - real(row, nt)) / real(row, pt);
    EXPECT_GT(gap, prev_gap);
    prev_gap = gap;
  }
  EXPECT_LT((real(r.rows[0], ps) - real(r.rows[0], ns)) / real(r.rows[0], ps), 0.05);
  EXPECT_LT(rel_diff(real(r.rows[0], ns), real(r.rows[0], nt)), 0.1);
}

TEST(DeterminismTest, ByteIdenticalAcrossThreadCounts) {
  ExperimentSpec s = default_spec("table1");
  s.realizations = 12;
  s.chips_frames = {{30, 10}};
  s.paths_users = {{20, 8}};
  s.threads = 1;
  const std::string a = to_csv(run_experiment(s));
  s.threads = 3;
  const std::string b = to_csv(run_experiment(s));
  EXPECT_EQ(a, b);
  s.seed = 2;
  EXPECT_NE(a, to_csv(run_experiment(s)));
}

TEST(ValidationTest, RejectsEmptyRuns) {
  ExperimentSpec s = default_spec("fig5");
  s.realizations = 0;
  EXPECT_THROW(run_experiment(s), ConfigError);
  s = default_spec("fig4");
  s.chips_frames.clear();
  EXPECT_THROW(run_experiment(s), ConfigError);
}

TEST(WriteResultTest, WritesCsvAndSidecar) {
  const auto dir = std::filesystem::temp_directory_path() / "uwbpc_mc_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  ExperimentSpec s = default_spec("fig4");
  s.realizations = 3;
  const ExperimentResult r = run_experiment(s);
  write_result(r, dir.string());
  std::ifstream csv_in(dir / "fig4.csv");
  std::string header;
  std::getline(csv_in, header);
  EXPECT_EQ(header.rfind("N_c,N_f,ratio,", 0), 0u);
  EXPECT_TRUE(std::filesystem::exists(dir / "fig4_summary.csv"));
  std::ifstream json_in(dir / "fig4.json");
  const io::json meta = io::json::parse(json_in);
  EXPECT_EQ(meta["experiment"], "fig4");
  EXPECT_EQ(meta["realizations"], 3);
  EXPECT_TRUE(meta.contains("wall_time_s"));
  EXPECT_TRUE(meta.contains("version"));
  EXPECT_EQ(meta["config"]["K"], 5);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace uwbpc::mc
