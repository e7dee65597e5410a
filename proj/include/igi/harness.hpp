#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "igi/baselines.hpp"
#include "igi/igi_search.hpp"
#include "igi/task_io.hpp"

namespace igi {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Algorithm { IgiSbs, IgiLgp, Mh, Gp, Sihc, Sa };

inline const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> algos = {Algorithm::IgiSbs, Algorithm::IgiLgp, Algorithm::Mh,
                                               Algorithm::Gp,     Algorithm::Sihc,   Algorithm::Sa};
  return algos;
}

inline std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::IgiSbs:
      return "igi-sbs";
    case Algorithm::IgiLgp:
      return "igi-lgp";
    case Algorithm::Mh:
      return "mh";
    case Algorithm::Gp:
      return "gp";
    case Algorithm::Sihc:
      return "sihc";
    case Algorithm::Sa:
      return "sa";
  }
  return "?";
}

inline Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : all_algorithms())
    if (algorithm_name(a) == name) return a;
  throw ConfigError("unknown algorithm '" + name + "' (expected igi-sbs, igi-lgp, mh, gp, sihc or sa)");
}

// Every tunable parameter of a params struct, by CLI name.
template <class F>
void for_each_param(SbsParams& p, F&& f) {
  f("beam_width", p.beam_width);
  f("successors", p.successors);
  f("max_patch_length", p.max_patch_length);
  f("tournament_size", p.tournament_size);
}
template <class F>
void for_each_param(LgpParams& p, F&& f) {
  f("population", p.population);
  f("generations", p.generations);
  f("tournament_size", p.tournament_size);
  f("crossover_prob", p.crossover_prob);
  f("mutation_prob", p.mutation_prob);
}
template <class F>
void for_each_param(MhParams& p, F&& f) {
  f("switch_prob", p.switch_prob);
  f("beta", p.beta);
  f("max_depth", p.max_depth);
}
template <class F>
void for_each_param(GpParams& p, F&& f) {
  f("population", p.population);
  f("crossover_prob", p.crossover_prob);
  f("mutation_prob", p.mutation_prob);
  f("tournament_size", p.tournament_size);
  f("dmin", p.dmin);
  f("dmax", p.dmax);
  f("max_depth", p.max_depth);
}
template <class F>
void for_each_param(SihcParams& p, F&& f) {
  f("max_mutations", p.max_mutations);
  f("dmin", p.dmin);
  f("dmax", p.dmax);
  f("max_depth", p.max_depth);
}
template <class F>
void for_each_param(SaParams& p, F&& f) {
  f("t_start", p.t_start);
  f("t_final", p.t_final);
  f("stepsize", p.stepsize);
  f("dmin", p.dmin);
  f("dmax", p.dmax);
  f("max_depth", p.max_depth);
}

namespace detail {

inline std::size_t parse_count(const std::string& key, const std::string& v) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ConfigError("parameter '" + key + "' expects a nonnegative integer, got '" + v + "'");
  return out;
}

inline double parse_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty() || !std::isfinite(out))
    throw ConfigError("parameter '" + key + "' expects a real number, got '" + v + "'");
  return out;
}

inline void assign(const std::string& key, std::size_t& field, const std::string& v) { field = parse_count(key, v); }
inline void assign(const std::string& key, double& field, const std::string& v) { field = parse_real(key, v); }

}  // namespace detail

struct SynthConfig {
  Algorithm algorithm = Algorithm::IgiSbs;
  std::variant<IgiConfig, BaselineConfig> config;

  explicit SynthConfig(Algorithm a = Algorithm::IgiSbs) : algorithm(a) {
    switch (a) {
      case Algorithm::IgiSbs:
        config = IgiConfig{};
        break;
      case Algorithm::IgiLgp: {
        IgiConfig c;
        c.inner = LgpParams{};
        config = c;
        break;
      }
      case Algorithm::Mh:
        config = BaselineConfig{MhParams{}, {}, 0};
        break;
      case Algorithm::Gp:
        config = BaselineConfig{GpParams{}, {}, 0};
        break;
      case Algorithm::Sihc:
        config = BaselineConfig{SihcParams{}, {}, 0};
        break;
      case Algorithm::Sa:
        config = BaselineConfig{SaParams{}, {}, 0};
        break;
    }
  }

  Budget& budget() { return std::visit([](auto& c) -> Budget& { return c.budget; }, config); }
  const Budget& budget() const { return std::visit([](const auto& c) -> const Budget& { return c.budget; }, config); }
  std::uint64_t& seed() { return std::visit([](auto& c) -> std::uint64_t& { return c.seed; }, config); }
  std::uint64_t seed() const { return std::visit([](const auto& c) { return c.seed; }, config); }

  // Calls f(name, field) for every tunable parameter of the algorithm.
  template <class F>
  void visit_params(F&& f) {
    if (auto* igi = std::get_if<IgiConfig>(&config)) {
      std::visit([&](auto& inner) { for_each_param(inner, f); }, igi->inner);
      f("perturbations", igi->perturbations);
      f("min_perturb_size", igi->min_perturb_size);
      f("dmin", igi->dmin);
      f("dmax", igi->dmax);
    } else {
      std::visit([&](auto& p) { for_each_param(p, f); }, std::get<BaselineConfig>(config).params);
    }
  }

  void set_param(const std::string& key, const std::string& value) {
    if (key == "init_samples") {
      auto* igi = std::get_if<IgiConfig>(&config);
      if (!igi) throw ConfigError("parameter 'init_samples' does not apply to " + algorithm_name(algorithm));
      igi->init_samples = detail::parse_count(key, value);
      return;
    }
    bool found = false;
    visit_params([&](const char* name, auto& field) {
      if (key == name) {
        detail::assign(key, field, value);
        found = true;
      }
    });
    if (!found) throw ConfigError("unknown parameter '" + key + "' for " + algorithm_name(algorithm));
  }

  std::vector<std::string> param_names() {
    std::vector<std::string> names;
    visit_params([&](const char* name, auto&) { names.emplace_back(name); });
    if (std::holds_alternative<IgiConfig>(config)) names.emplace_back("init_samples");
    return names;
  }

  void validate() const {
    try {
      std::visit([](const auto& c) { c.validate(); }, config);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
  }

  nlohmann::json params_json() const {
    auto self = *this;
    nlohmann::json j = nlohmann::json::object();
    self.visit_params([&](const char* name, auto& field) { j[name] = field; });
    if (auto* igi = std::get_if<IgiConfig>(&self.config)) j["init_samples"] = igi->init_sample_count();
    return j;
  }
};

// "k=v" into a (key, value) pair.
inline std::pair<std::string, std::string> split_assignment(const std::string& kv) {
  auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got '" + kv + "'");
  return {kv.substr(0, eq), kv.substr(eq + 1)};
}

inline SynthConfig make_config(Algorithm algo, const std::vector<std::pair<std::string, std::string>>& params,
                               Budget budget, std::uint64_t seed) {
  SynthConfig c(algo);
  for (const auto& [k, v] : params) c.set_param(k, v);
  c.budget() = budget;
  c.seed() = seed;
  c.validate();
  return c;
}

inline RunResult run_synthesis(const Task& task, const SynthConfig& cfg, SearchHooks hooks = {}) {
  cfg.validate();
  if (const auto* igi = std::get_if<IgiConfig>(&cfg.config)) return run_igi(task, *igi, std::move(hooks));
  return run_baseline(task, std::get<BaselineConfig>(cfg.config), std::move(hooks));
}

// Fields that legitimately differ between identical reruns.
inline const std::vector<std::string>& wall_time_fields() {
  static const std::vector<std::string> f = {"time"};
  return f;
}

inline nlohmann::json result_json(const Task& task, const SynthConfig& cfg, const RunResult& r,
                                  const std::string& trace_file) {
  nlohmann::json j;
  j["task"] = task.name;
  j["algorithm"] = algorithm_name(cfg.algorithm);
  j["solved"] = r.solved;
  j["time"] = r.wall_time;
  j["evaluations"] = r.evaluations;
  j["best_program"] = format_program(r.best, *task.ps);
  j["best_fitness"] = r.best_score.fitness;
  j["best_size"] = r.best_score.size;
  j["seed"] = cfg.seed();
  nlohmann::json conf;
  conf["params"] = cfg.params_json();
  const Budget& b = cfg.budget();
  conf["timeout"] = b.seconds ? nlohmann::json(*b.seconds) : nlohmann::json(nullptr);
  conf["max_evals"] = b.max_evaluations ? nlohmann::json(*b.max_evaluations) : nlohmann::json(nullptr);
  j["config"] = conf;
  j["trace"] = trace_file;
  return j;
}

// Rebuilds the configuration echoed in a result file.
inline SynthConfig config_from_result(const nlohmann::json& result) {
  SynthConfig c(parse_algorithm(result.at("algorithm").get<std::string>()));
  for (const auto& [k, v] : result.at("config").at("params").items()) c.set_param(k, v.dump());
  const auto& conf = result.at("config");
  if (!conf.at("timeout").is_null()) c.budget().seconds = conf.at("timeout").get<double>();
  if (!conf.at("max_evals").is_null()) c.budget().max_evaluations = conf.at("max_evals").get<std::uint64_t>();
  c.seed() = result.at("seed").get<std::uint64_t>();
  c.validate();
  return c;
}

inline std::string result_stem(const Task& task, const SynthConfig& cfg) {
  std::string stem = task.name + "__" + algorithm_name(cfg.algorithm) + "__" + std::to_string(cfg.seed());
  for (char& ch : stem)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.')) ch = '_';
  return stem;
}

// Runs one job and writes <stem>.json and <stem>.trace.csv into out_dir.
inline nlohmann::json run_and_save(const Task& task, const SynthConfig& cfg, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  RunResult r = run_synthesis(task, cfg);
  std::string stem = result_stem(task, cfg);
  std::ostringstream trace;
  write_trace_csv(trace, r.trace);
  write_file_atomic(out_dir / (stem + ".trace.csv"), trace.str());
  auto j = result_json(task, cfg, r, stem + ".trace.csv");
  write_file_atomic(out_dir / (stem + ".json"), j.dump(2) + "\n");
  return j;
}

struct CampaignJob {
  std::shared_ptr<const Task> task;
  SynthConfig config;
};

// Runs independent jobs on `workers` threads; results come back in job order.
// Each run stays sequential, the threads share only the immutable tasks.
inline std::vector<nlohmann::json> run_campaign(const std::vector<CampaignJob>& jobs, const std::filesystem::path& out_dir,
                                                std::size_t workers = 1,
                                                const std::function<void(const nlohmann::json&)>& on_done = {}) {
  std::vector<nlohmann::json> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex report;
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        results[i] = run_and_save(*jobs[i].task, jobs[i].config, out_dir);
        if (on_done) {
          std::lock_guard lock(report);
          on_done(results[i]);
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, jobs.size()));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

// ---- summary statistics ----

struct AlgorithmSummary {
  std::string algorithm;
  std::size_t total_solved = 0;
  std::size_t fastest_solved = 0;
  std::size_t smallest_solved = 0;
  double average_time = 0.0;
  double median_time = 0.0;
  double average_size = 0.0;
  double median_size = 0.0;
};

struct SeriesPoint {
  std::string algorithm;
  std::string axis;  // "time" or "evaluations"
  double x = 0.0;
  std::size_t solved = 0;
};

struct Summary {
  std::vector<AlgorithmSummary> rows;
  std::vector<SeriesPoint> series;
};

struct RunRecord {
  std::string task;
  std::string algorithm;
  bool solved = false;
  double time = 0.0;
  std::uint64_t evaluations = 0;
  std::size_t size = 0;
};

inline RunRecord record_from_json(const nlohmann::json& j) {
  try {
    return RunRecord{j.at("task").get<std::string>(),     j.at("algorithm").get<std::string>(),
                     j.at("solved").get<bool>(),          j.at("time").get<double>(),
                     j.at("evaluations").get<std::uint64_t>(), j.at("best_size").get<std::size_t>()};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed result record: ") + e.what());
  }
}

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

// Solved runs are accumulated in task-name order so the sums are reproducible
// by any reader that follows the same order.
inline Summary summarize(std::vector<RunRecord> runs) {
  Summary out;
  if (runs.empty()) {
    for (Algorithm a : all_algorithms()) out.rows.push_back(AlgorithmSummary{algorithm_name(a)});
    return out;
  }
  std::sort(runs.begin(), runs.end(),
            [](const RunRecord& a, const RunRecord& b) { return std::tie(a.algorithm, a.task) < std::tie(b.algorithm, b.task); });

  std::map<std::string, std::set<std::string>> tasks_of;
  for (const auto& r : runs)
    if (!tasks_of[r.algorithm].insert(r.task).second)
      throw ConfigError("duplicate result for task '" + r.task + "' and algorithm '" + r.algorithm + "'");
  const auto& reference = tasks_of.begin()->second;
  for (const auto& [algo, tasks] : tasks_of)
    if (tasks != reference)
      throw ConfigError("results cover different task sets ('" + tasks_of.begin()->first + "' vs '" + algo + "')");

  std::map<std::string, double> best_time;
  std::map<std::string, std::size_t> best_size;
  for (const auto& r : runs) {
    if (!r.solved) continue;
    auto t = best_time.find(r.task);
    if (t == best_time.end() || r.time < t->second) best_time[r.task] = r.time;
    auto s = best_size.find(r.task);
    if (s == best_size.end() || r.size < s->second) best_size[r.task] = r.size;
  }

  for (const auto& [algo, tasks] : tasks_of) {
    AlgorithmSummary row;
    row.algorithm = algo;
    std::vector<double> times, sizes;
    std::vector<std::uint64_t> evals;
    for (const auto& r : runs) {
      if (r.algorithm != algo || !r.solved) continue;
      ++row.total_solved;
      row.fastest_solved += r.time == best_time[r.task];
      row.smallest_solved += r.size == best_size[r.task];
      times.push_back(r.time);
      sizes.push_back(static_cast<double>(r.size));
      evals.push_back(r.evaluations);
    }
    if (!times.empty()) {
      double st = 0, ss = 0;
      for (double t : times) st += t;
      for (double s : sizes) ss += s;
      row.average_time = st / static_cast<double>(times.size());
      row.average_size = ss / static_cast<double>(sizes.size());
      row.median_time = median_of(times);
      row.median_size = median_of(sizes);
    }
    std::sort(times.begin(), times.end());
    std::sort(evals.begin(), evals.end());
    for (std::size_t i = 0; i < times.size(); ++i) out.series.push_back({algo, "time", times[i], i + 1});
    for (std::size_t i = 0; i < evals.size(); ++i)
      out.series.push_back({algo, "evaluations", static_cast<double>(evals[i]), i + 1});
    out.rows.push_back(row);
  }
  return out;
}

inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

inline void write_summary_csv(std::ostream& os, const Summary& s) {
  os << "algorithm,total_solved,fastest_solved,smallest_solved,average_time,median_time,average_size,median_size\n";
  for (const auto& r : s.rows)
    os << r.algorithm << ',' << r.total_solved << ',' << r.fastest_solved << ',' << r.smallest_solved << ','
       << format_real(r.average_time) << ',' << format_real(r.median_time) << ',' << format_real(r.average_size) << ','
       << format_real(r.median_size) << '\n';
}

inline void write_series_csv(std::ostream& os, const Summary& s) {
  os << "algorithm,axis,x,cumulative_solved\n";
  for (const auto& p : s.series) os << p.algorithm << ',' << p.axis << ',' << format_real(p.x) << ',' << p.solved << '\n';
}

inline std::vector<nlohmann::json> load_results(const std::vector<std::filesystem::path>& paths) {
  std::vector<nlohmann::json> out;
  auto load = [&](const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot read result file " + p.string());
    try {
      out.push_back(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(p.string() + ": " + e.what());
    }
  };
  for (const auto& p : paths) {
    if (std::filesystem::is_directory(p)) {
      std::vector<std::filesystem::path> files;
      for (const auto& e : std::filesystem::directory_iterator(p))
        if (e.path().extension() == ".json") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) load(f);
    } else {
      load(p);
    }
  }
  return out;
}

// ---- parameter sweep ----

struct GridAxis {
  std::string name;
  std::vector<std::string> values;
};

// "k=v1,v2,v3"
inline GridAxis parse_grid_axis(const std::string& spec) {
  auto [key, rest] = split_assignment(spec);
  GridAxis axis{key, {}};
  std::stringstream ss(rest);
  for (std::string v; std::getline(ss, v, ',');)
    if (!v.empty()) axis.values.push_back(v);
  if (axis.values.empty()) throw ConfigError("grid axis '" + key + "' has no values");
  return axis;
}

// Cartesian product in grid order: the last axis varies fastest.
inline std::vector<std::vector<std::pair<std::string, std::string>>> expand_grid(const std::vector<GridAxis>& grid) {
  std::vector<std::vector<std::pair<std::string, std::string>>> combos(1);
  for (const auto& axis : grid) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto& c : combos)
      for (const auto& v : axis.values) {
        auto e = c;
        e.emplace_back(axis.name, v);
        next.push_back(std::move(e));
      }
    combos = std::move(next);
  }
  return combos;
}

struct SweepEntry {
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<double> mean_fitness;  // per task
  std::vector<double> rank;          // per task, 1 = best, ties share the mean rank
  double average_rank = 0.0;
};

struct SweepOutcome {
  std::vector<SweepEntry> entries;  // grid order
  std::size_t selected = 0;
  std::vector<std::size_t> tied_with_selected;
};

// Seeds of repetition r, shared by every combination so they face the same draws.
inline std::uint64_t repetition_seed(std::uint64_t base, std::size_t task_index, std::size_t rep) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (1 + task_index * 1000003ULL + rep);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::vector<double> average_ranks_desc(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<double> rank(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    double r = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) rank[order[k]] = r;
    i = j;
  }
  return rank;
}

// Ranks precomputed mean best fitnesses: fitness[c][t] for combination c on task t.
inline SweepOutcome rank_combinations(std::vector<SweepEntry> entries) {
  SweepOutcome out;
  if (entries.empty()) throw ConfigError("empty parameter grid");
  std::size_t tasks = entries.front().mean_fitness.size();
  for (auto& e : entries) e.rank.assign(tasks, 0.0);
  for (std::size_t t = 0; t < tasks; ++t) {
    std::vector<double> col;
    for (const auto& e : entries) col.push_back(e.mean_fitness[t]);
    auto r = average_ranks_desc(col);
    for (std::size_t c = 0; c < entries.size(); ++c) entries[c].rank[t] = r[c];
  }
  for (auto& e : entries) {
    double s = 0;
    for (double r : e.rank) s += r;
    e.average_rank = tasks ? s / static_cast<double>(tasks) : 0.0;
  }
  for (std::size_t c = 1; c < entries.size(); ++c)
    if (entries[c].average_rank < entries[out.selected].average_rank) out.selected = c;
  for (std::size_t c = 0; c < entries.size(); ++c)
    if (c != out.selected && entries[c].average_rank == entries[out.selected].average_rank)
      out.tied_with_selected.push_back(c);
  out.entries = std::move(entries);
  return out;
}

inline SweepOutcome sweep(const std::vector<std::shared_ptr<const Task>>& tasks, Algorithm algo,
                          const std::vector<GridAxis>& grid, std::size_t repetitions, Budget budget, std::uint64_t seed,
                          const std::vector<std::pair<std::string, std::string>>& fixed = {}) {
  if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
  if (tasks.empty()) throw ConfigError("sweep needs at least one task");
  auto names = SynthConfig(algo).param_names();
  for (const auto& axis : grid)
    if (std::find(names.begin(), names.end(), axis.name) == names.end())
      throw ConfigError("grid parameter '" + axis.name + "' is not a parameter of " + algorithm_name(algo));
  std::vector<SweepEntry> entries;
  for (auto& combo : expand_grid(grid)) {
    SweepEntry e;
    e.params = combo;
    auto params = fixed;
    params.insert(params.end(), combo.begin(), combo.end());
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      double sum = 0;
      for (std::size_t r = 0; r < repetitions; ++r) {
        auto cfg = make_config(algo, params, budget, repetition_seed(seed, t, r));
        sum += run_synthesis(*tasks[t], cfg).best_score.fitness;
      }
      e.mean_fitness.push_back(sum / static_cast<double>(repetitions));
    }
    entries.push_back(std::move(e));
  }
  return rank_combinations(std::move(entries));
}

inline nlohmann::json sweep_json(const SweepOutcome& s) {
  nlohmann::json j;
  auto params = [](const SweepEntry& e) {
    nlohmann::json p = nlohmann::json::object();
    for (const auto& [k, v] : e.params) p[k] = v;
    return p;
  };
  j["ranking"] = nlohmann::json::array();
  std::vector<std::size_t> order(s.entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s.entries[a].average_rank < s.entries[b].average_rank; });
  for (std::size_t i : order)
    j["ranking"].push_back({{"params", params(s.entries[i])},
                            {"average_rank", s.entries[i].average_rank},
                            {"mean_fitness", s.entries[i].mean_fitness},
                            {"grid_index", i}});
  j["selected"] = params(s.entries[s.selected]);
  j["tied"] = nlohmann::json::array();
  for (std::size_t i : s.tied_with_selected) j["tied"].push_back(params(s.entries[i]));
  return j;
}

}  // namespace igi
