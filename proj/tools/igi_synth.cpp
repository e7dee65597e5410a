#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "igi/igi.hpp"

namespace fs = std::filesystem;

namespace {

struct BudgetFlags {
  std::optional<double> timeout;
  std::optional<std::uint64_t> max_evals;

  igi::Budget budget() const {
    igi::Budget b{timeout, max_evals};
    // one hour when no limit is given
    if (!b.seconds && !b.max_evaluations) b.seconds = 3600.0;
    return b;
  }
};

void add_budget(CLI::App* cmd, BudgetFlags& f) {
  cmd->add_option("--timeout", f.timeout, "Wall-clock limit per run in seconds")->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-evals", f.max_evals, "Fitness-evaluation limit per run");
}

void add_seed(CLI::App* cmd, std::uint64_t& seed) {
  cmd->add_option("--seed", seed, "Random seed")->envname("IGI_SYNTH_SEED");
}

std::vector<std::pair<std::string, std::string>> parse_params(const std::vector<std::string>& raw) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& kv : raw) out.push_back(igi::split_assignment(kv));
  return out;
}

std::vector<std::shared_ptr<const igi::Task>> load_tasks(const std::vector<std::string>& paths) {
  std::vector<std::shared_ptr<const igi::Task>> tasks;
  for (const auto& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(p))
        if (e.path().extension() == ".json") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) tasks.push_back(std::make_shared<const igi::Task>(igi::load_task(f)));
    } else {
      tasks.push_back(std::make_shared<const igi::Task>(igi::load_task(p)));
    }
  }
  if (tasks.empty()) throw igi::ConfigError("no task files given");
  return tasks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterative genetic improvement program synthesis"};
  app.require_subcommand(1);

  // run
  std::vector<std::string> run_algos, run_tasks, run_params;
  std::uint64_t run_seed = 0;
  BudgetFlags run_budget;
  std::string run_out = "results";
  std::size_t run_jobs = 1;
  auto* run = app.add_subcommand("run", "Run synthesis jobs (every algorithm on every task)");
  run->add_option("--algo", run_algos, "igi-sbs, igi-lgp, mh, gp, sihc or sa (repeatable)")->required();
  run->add_option("--task", run_tasks, "Task file or directory of task files (repeatable)")->required();
  add_seed(run, run_seed);
  add_budget(run, run_budget);
  run->add_option("--out", run_out, "Directory for result JSON and trace CSV files");
  run->add_option("--param", run_params, "Algorithm parameter override k=v (repeatable)");
  run->add_option("--jobs", run_jobs, "Concurrent runs")->check(CLI::PositiveNumber);

  // gen-bench
  std::string gen_out = "bench";
  std::size_t gen_count = 1, gen_min = 10, gen_max = 15, gen_examples = 100;
  std::uint64_t gen_seed = 0;
  std::string gen_prefix = "lm";
  auto* gen = app.add_subcommand("gen-bench", "Generate list-manipulation benchmark tasks");
  gen->add_option("--out", gen_out, "Output directory");
  gen->add_option("--count", gen_count, "Number of tasks");
  gen->add_option("--min-size", gen_min, "Smallest oracle size");
  gen->add_option("--max-size", gen_max, "Largest oracle size");
  gen->add_option("--examples", gen_examples, "Examples per task");
  gen->add_option("--prefix", gen_prefix, "Task name prefix");
  add_seed(gen, gen_seed);

  // holdout
  std::string ho_task, ho_program, ho_result, ho_out;
  std::size_t ho_n = 100;
  std::uint64_t ho_seed = 0;
  auto* ho = app.add_subcommand("holdout", "Generate hold-out examples and check a program against them");
  ho->add_option("--task", ho_task, "Task file with an oracle")->required();
  ho->add_option("--n", ho_n, "Number of hold-out examples");
  ho->add_option("--program", ho_program, "Program to check, as prefix text");
  ho->add_option("--result", ho_result, "Result file whose best program is checked");
  ho->add_option("--out", ho_out, "Write the hold-out set as a task file");
  add_seed(ho, ho_seed);

  // summarize
  std::vector<std::string> sum_inputs;
  std::string sum_out;
  auto* sum = app.add_subcommand("summarize", "Aggregate result files into summary statistics");
  sum->add_option("results", sum_inputs, "Result files or directories")->required();
  sum->add_option("--out", sum_out, "Directory for summary.csv and series.csv (default: print summary)");

  // sweep
  std::string sw_algo, sw_out;
  std::vector<std::string> sw_tasks, sw_grid, sw_params;
  std::size_t sw_reps = 10;
  std::uint64_t sw_seed = 0;
  BudgetFlags sw_budget;
  auto* sw = app.add_subcommand("sweep", "Grid search over algorithm parameters");
  sw->add_option("--algo", sw_algo, "Algorithm")->required();
  sw->add_option("--task", sw_tasks, "Task files (repeatable)")->required();
  sw->add_option("--grid", sw_grid, "Grid axis k=v1,v2,... (repeatable)")->required();
  sw->add_option("--reps", sw_reps, "Repetitions per combination and task")->check(CLI::PositiveNumber);
  sw->add_option("--param", sw_params, "Fixed parameter k=v (repeatable)");
  sw->add_option("--out", sw_out, "Write the ranking as JSON");
  add_seed(sw, sw_seed);
  add_budget(sw, sw_budget);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto tasks = load_tasks(run_tasks);
      auto params = parse_params(run_params);
      std::vector<igi::CampaignJob> jobs;
      for (const auto& name : run_algos) {
        auto algo = igi::parse_algorithm(name);
        for (const auto& t : tasks) jobs.push_back({t, igi::make_config(algo, params, run_budget.budget(), run_seed)});
      }
      igi::run_campaign(jobs, run_out, run_jobs, [](const nlohmann::json& r) {
        std::cout << r["task"].get<std::string>() << ' ' << r["algorithm"].get<std::string>()
                  << (r["solved"].get<bool>() ? " solved " : " unsolved ") << "fitness=" << r["best_fitness"]
                  << " size=" << r["best_size"] << " evaluations=" << r["evaluations"] << " time=" << r["time"]
                  << '\n';
      });
    } else if (*gen) {
      igi::GenSpec spec;
      spec.min_oracle_size = gen_min;
      spec.max_oracle_size = gen_max;
      spec.num_examples = gen_examples;
      fs::create_directories(gen_out);
      for (std::size_t i = 0; i < gen_count; ++i) {
        igi::Rng rng(igi::repetition_seed(gen_seed, i, 0));
        char name[64];
        std::snprintf(name, sizeof name, "%s_%03zu", gen_prefix.c_str(), i);
        auto task = igi::generate_benchmark(spec, rng, name);
        auto path = fs::path(gen_out) / (std::string(name) + ".json");
        igi::save_task(task, path);
        std::cout << path.string() << ' ' << igi::format_program(*task.oracle, *task.ps) << '\n';
      }
    } else if (*ho) {
      auto task = igi::load_task(ho_task);
      igi::Rng rng(ho_seed);
      auto holdout = igi::generate_holdout(task, ho_n, rng);
      if (!ho_out.empty()) {
        igi::Task copy = task;
        copy.name = task.name + "_holdout";
        copy.examples = holdout;
        igi::save_task(copy, ho_out);
      }
      std::string program = ho_program;
      if (!ho_result.empty()) {
        auto results = igi::load_results({ho_result});
        program = results.front().at("best_program").get<std::string>();
      }
      if (!program.empty()) {
        auto tree = igi::parse_program(program, *task.ps);
        double frac = igi::check_generalization(tree, *task.ps, holdout);
        std::cout << "generalization " << frac << (frac == 1.0 ? " generalizes" : " does-not-generalize") << '\n';
      } else {
        std::cout << holdout.size() << " hold-out examples\n";
      }
    } else if (*sum) {
      std::vector<fs::path> paths(sum_inputs.begin(), sum_inputs.end());
      std::vector<igi::RunRecord> records;
      for (const auto& j : igi::load_results(paths)) records.push_back(igi::record_from_json(j));
      auto s = igi::summarize(records);
      if (sum_out.empty()) {
        igi::write_summary_csv(std::cout, s);
      } else {
        fs::create_directories(sum_out);
        std::ostringstream a, b;
        igi::write_summary_csv(a, s);
        igi::write_series_csv(b, s);
        igi::write_file_atomic(fs::path(sum_out) / "summary.csv", a.str());
        igi::write_file_atomic(fs::path(sum_out) / "series.csv", b.str());
      }
    } else if (*sw) {
      auto tasks = load_tasks(sw_tasks);
      std::vector<igi::GridAxis> grid;
      for (const auto& g : sw_grid) grid.push_back(igi::parse_grid_axis(g));
      auto outcome = igi::sweep(tasks, igi::parse_algorithm(sw_algo), grid, sw_reps, sw_budget.budget(), sw_seed,
                                parse_params(sw_params));
      auto j = igi::sweep_json(outcome);
      if (!sw_out.empty()) igi::write_file_atomic(sw_out, j.dump(2) + "\n");
      std::cout << j.dump(2) << '\n';
      if (!outcome.tied_with_selected.empty())
        std::cerr << "note: " << outcome.tied_with_selected.size()
                  << " combination(s) tie with the selected one; the first in grid order was chosen\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
