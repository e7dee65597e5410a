#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "test_util.hpp"

using namespace igi;
namespace fs = std::filesystem;

namespace {

RunRecord rec(std::string task, std::string algo, bool solved, double time, std::size_t size,
              std::uint64_t evals = 100) {
  return RunRecord{std::move(task), std::move(algo), solved, time, evals, size};
}

const AlgorithmSummary& row(const Summary& s, const std::string& algo) {
  for (const auto& r : s.rows)
    if (r.algorithm == algo) return r;
  throw std::runtime_error("no row for " + algo);
}

Budget evals(std::uint64_t n) {
  Budget b;
  b.max_evaluations = n;
  return b;
}

}  // namespace

TEST(Harness, AlgorithmNames) {
  for (Algorithm a : all_algorithms()) EXPECT_EQ(parse_algorithm(algorithm_name(a)), a);
  EXPECT_THROW(parse_algorithm("hill-climb"), ConfigError);
}

TEST(Harness, ParameterOverrides) {
  auto c = make_config(Algorithm::IgiSbs, {{"beam_width", "10"}, {"init_samples", "7"}}, {}, 3);
  const auto& igi = std::get<IgiConfig>(c.config);
  EXPECT_EQ(std::get<SbsParams>(igi.inner).beam_width, 10u);
  EXPECT_EQ(igi.init_sample_count(), 7u);
  EXPECT_EQ(c.seed(), 3u);

  auto sa = make_config(Algorithm::Sa, {{"t_start", "2.5"}}, {}, 0);
  EXPECT_EQ(std::get<SaParams>(std::get<BaselineConfig>(sa.config).params).t_start, 2.5);

  EXPECT_THROW(make_config(Algorithm::Mh, {{"beam_width", "3"}}, {}, 0), ConfigError);
  EXPECT_THROW(make_config(Algorithm::Gp, {{"init_samples", "3"}}, {}, 0), ConfigError);
  EXPECT_THROW(make_config(Algorithm::IgiSbs, {{"beam_width", "x"}}, {}, 0), ConfigError);
  EXPECT_THROW(make_config(Algorithm::IgiSbs, {{"beam_width", "-1"}}, {}, 0), ConfigError);
  EXPECT_THROW(make_config(Algorithm::IgiSbs, {{"beam_width", "0"}}, {}, 0), ConfigError);
  EXPECT_THROW(make_config(Algorithm::IgiLgp, {{"crossover_prob", "1.5"}}, {}, 0), ConfigError);
  EXPECT_THROW(split_assignment("novalue"), ConfigError);
  EXPECT_EQ(split_assignment("a=b=c"), (std::pair<std::string, std::string>{"a", "b=c"}));
}

TEST(Harness, ResultJsonReproducesRun) {
  auto task = testutil::worked_task();
  Task hard = task;
  hard.examples.push_back({{Value(std::int64_t{1}), Value(std::int64_t{2})}, Value(std::int64_t{-100})});
  auto dir = fs::temp_directory_path() / "igi_harness_repro";
  fs::remove_all(dir);
  for (Algorithm a : all_algorithms()) {
    std::vector<std::pair<std::string, std::string>> params;
    if (a == Algorithm::Gp) params.emplace_back("population", "100");
    auto cfg = make_config(a, params, evals(2000), 17);
    auto j = run_and_save(hard, cfg, dir);
    EXPECT_TRUE(fs::exists(dir / (result_stem(hard, cfg) + ".json")));
    EXPECT_TRUE(fs::exists(dir / j["trace"].get<std::string>()));
    auto again = run_synthesis(hard, config_from_result(j));
    EXPECT_EQ(again.evaluations, j["evaluations"].get<std::uint64_t>());
    EXPECT_EQ(again.solved, j["solved"].get<bool>());
    EXPECT_EQ(format_program(again.best, *hard.ps), j["best_program"].get<std::string>());
  }
}

TEST(Harness, ZeroTimeoutRunsInitializationOnly) {
  auto task = testutil::worked_task();
  Task hard = task;
  hard.examples.push_back({{Value(std::int64_t{1}), Value(std::int64_t{2})}, Value(std::int64_t{-100})});
  Budget b;
  b.seconds = 0.0;
  auto cfg = make_config(Algorithm::IgiSbs, {}, b, 1);
  auto r = run_synthesis(hard, cfg);
  EXPECT_FALSE(r.solved);
  EXPECT_EQ(r.evaluations, std::get<IgiConfig>(cfg.config).init_sample_count());
}

TEST(Harness, WorkedTaskSolvedThroughHarness) {
  auto task = testutil::worked_task();
  Budget b;
  b.seconds = 60;
  auto r = run_synthesis(task, make_config(Algorithm::IgiSbs, {}, b, 0));
  EXPECT_TRUE(r.solved);
}

TEST(Summarize, SingleSolvedResult) {
  auto s = summarize({rec("a", "igi-sbs", true, 2.5, 7)});
  const auto& r = row(s, "igi-sbs");
  EXPECT_EQ(r.total_solved, 1u);
  EXPECT_EQ(r.fastest_solved, 1u);
  EXPECT_EQ(r.smallest_solved, 1u);
  EXPECT_EQ(r.average_time, 2.5);
  EXPECT_EQ(r.median_size, 7.0);
}

TEST(Summarize, FastestCreditsOnlyTheMinimum) {
  auto s = summarize({rec("a", "igi-sbs", true, 10, 5), rec("a", "gp", true, 20, 5)});
  EXPECT_EQ(row(s, "igi-sbs").fastest_solved, 1u);
  EXPECT_EQ(row(s, "gp").fastest_solved, 0u);
  // equal sizes: both credited
  EXPECT_EQ(row(s, "igi-sbs").smallest_solved, 1u);
  EXPECT_EQ(row(s, "gp").smallest_solved, 1u);
}

TEST(Summarize, TiesCreditEveryAlgorithm) {
  auto s = summarize({rec("a", "mh", true, 3, 4), rec("a", "sa", true, 3, 9), rec("a", "sihc", false, 1, 2)});
  EXPECT_EQ(row(s, "mh").fastest_solved, 1u);
  EXPECT_EQ(row(s, "sa").fastest_solved, 1u);
  EXPECT_EQ(row(s, "sihc").fastest_solved, 0u);
  EXPECT_EQ(row(s, "sihc").total_solved, 0u);
  EXPECT_EQ(row(s, "sa").smallest_solved, 0u);
}

TEST(Summarize, EmptyResultSetIsAllZero) {
  auto s = summarize({});
  EXPECT_EQ(s.rows.size(), all_algorithms().size());
  for (const auto& r : s.rows) {
    EXPECT_EQ(r.total_solved, 0u);
    EXPECT_EQ(r.fastest_solved, 0u);
    EXPECT_EQ(r.average_time, 0.0);
    EXPECT_EQ(r.median_size, 0.0);
  }
  EXPECT_TRUE(s.series.empty());
}

TEST(Summarize, StatisticsAndInvariants) {
  std::vector<RunRecord> runs;
  for (int t = 0; t < 5; ++t) {
    std::string name = "t" + std::to_string(t);
    runs.push_back(rec(name, "igi-sbs", t != 4, 1.0 + t, 5 + static_cast<std::size_t>(t), 10 + t));
    runs.push_back(rec(name, "gp", t % 2 == 0, 2.0 + t, 4, 100));
  }
  auto s = summarize(runs);
  const auto& igi = row(s, "igi-sbs");
  EXPECT_EQ(igi.total_solved, 4u);
  EXPECT_EQ(igi.average_time, 2.5);
  EXPECT_EQ(igi.median_time, 2.5);
  EXPECT_EQ(igi.average_size, 6.5);
  for (const auto& r : s.rows) {
    EXPECT_LE(r.fastest_solved, r.total_solved);
    EXPECT_LE(r.smallest_solved, r.total_solved);
  }
  std::size_t last = 0;
  for (const auto& p : s.series)
    if (p.algorithm == "igi-sbs" && p.axis == "evaluations") last = p.solved;
  EXPECT_EQ(last, 4u);
  std::ostringstream csv;
  write_summary_csv(csv, s);
  EXPECT_NE(csv.str().find("igi-sbs,4,4,2,2.500000,2.500000,6.500000,6.500000"), std::string::npos) << csv.str();
}

TEST(Summarize, MixedTaskSetsRejected) {
  EXPECT_THROW(summarize({rec("a", "gp", true, 1, 1), rec("b", "mh", true, 1, 1)}), ConfigError);
  EXPECT_THROW(summarize({rec("a", "gp", true, 1, 1), rec("a", "gp", true, 2, 1)}), ConfigError);
}

TEST(Sweep, AverageRanks) {
  EXPECT_EQ(average_ranks_desc({0.5, 0.9, 0.5}), (std::vector<double>{2.5, 1.0, 2.5}));
}

TEST(Sweep, TieResolvedToFirstInGridOrder) {
  std::vector<SweepEntry> e(3);
  e[0].params = {{"beam_width", "10"}};
  e[0].mean_fitness = {0.5, 0.9};
  e[1].params = {{"beam_width", "20"}};
  e[1].mean_fitness = {0.9, 0.5};
  e[2].params = {{"beam_width", "30"}};
  e[2].mean_fitness = {0.1, 0.1};
  auto out = rank_combinations(e);
  EXPECT_EQ(out.selected, 0u);
  EXPECT_EQ(out.tied_with_selected, (std::vector<std::size_t>{1}));
  auto j = sweep_json(out);
  EXPECT_EQ(j["selected"]["beam_width"], "10");
  EXPECT_EQ(j["tied"].size(), 1u);
}

TEST(Sweep, SingleCombinationSelected) {
  auto task = std::make_shared<const Task>(testutil::worked_task());
  auto out = sweep({task}, Algorithm::IgiSbs, {parse_grid_axis("beam_width=10")}, 2, evals(3000), 5);
  ASSERT_EQ(out.entries.size(), 1u);
  EXPECT_EQ(out.selected, 0u);
  EXPECT_TRUE(out.tied_with_selected.empty());
  EXPECT_THROW(sweep({task}, Algorithm::IgiSbs, {parse_grid_axis("t_start=1")}, 1, evals(10), 0), ConfigError);
  EXPECT_THROW(parse_grid_axis("beam_width="), ConfigError);
}

TEST(Sweep, GridExpansionOrder) {
  auto g = expand_grid({parse_grid_axis("a=1,2"), parse_grid_axis("b=x,y")});
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g[1], (std::vector<std::pair<std::string, std::string>>{{"a", "1"}, {"b", "y"}}));
  EXPECT_EQ(g[2], (std::vector<std::pair<std::string, std::string>>{{"a", "2"}, {"b", "x"}}));
}
