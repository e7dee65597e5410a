// Acceptance suite: one PASS/FAIL line per criterion. Thresholds are fixed
// here and not configurable.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "../conformance_cases.hpp"
#include "../test_util.hpp"

using namespace igi;
namespace fs = std::filesystem;

namespace {

constexpr double kConformanceSeconds = 1.0;
constexpr double kWorkedTimeout = 10.0;
constexpr int kWorkedSeeds = 10;
constexpr int kWorkedRequired = 9;
constexpr int kEditTrials = 100000;
constexpr double kEditSeconds = 120.0;
constexpr int kPatchTrials = 10000;
constexpr int kLevenshteinPairs = 1000;
constexpr double kLevenshteinTolerance = 1e-12;
constexpr int kPatchLengthDraws = 10000;
constexpr double kPatchLengthMean = 2.0;
constexpr double kPatchLengthTolerance = 0.1;
constexpr int kMonotoneTasks = 10;
constexpr int kMonotoneSeedsPerTask = 5;  // per inner search
constexpr std::uint64_t kMonotoneMaxEvals = 20000;
constexpr int kScaledTasks = 30;
constexpr double kScaledTimeout = 120.0;
constexpr double kScaledSbsShare = 0.60;
constexpr double kScaledCpuHours = 6.0;
constexpr std::uint64_t kScaledBenchSeed = 2024;
constexpr std::uint64_t kScaledRunSeed = 1;
constexpr int kHoldoutExamples = 100;
constexpr double kGeneralizationShare = 0.80;
constexpr double kFormulaTolerance = 1e-12;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Env {
  std::string synth;
  fs::path work;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs a shell command; returns its exit status and captured stdout.
std::pair<int, std::string> sh(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

Outcome interpreter_conformance(const Env&) {
  auto t0 = std::chrono::steady_clock::now();
  std::size_t total = 0, passed = 0;
  std::set<std::string> lm, st;
  for (auto cases : {conformance::list_cases, conformance::string_cases}) {
    for (const auto& c : cases()) {
      ++total;
      if (conformance::run_case(c) == c.expected) {
        ++passed;
        (c.dsl == "dsl-lm" ? lm : st).insert(c.function);
      }
    }
  }
  double secs = seconds_since(t0);
  bool ok = passed == total && lm.size() == 38 && st.size() == 16 && secs < kConformanceSeconds;
  return {ok, fmt("%zu/%zu cases pass, %zu/38 list and %zu/16 string functions covered, %.3f s (limit %.0f s)",
                  passed, total, lm.size(), st.size(), secs, kConformanceSeconds)};
}

Outcome worked_example(const Env&) {
  auto task = testutil::worked_task();
  double f = fitness(parse_program(testutil::kWorkedProgram, *task.ps), task).fitness;
  int solved = 0;
  for (int seed = 0; seed < kWorkedSeeds; ++seed) {
    Budget b;
    b.seconds = kWorkedTimeout;
    auto r = run_synthesis(task, make_config(Algorithm::IgiSbs, {}, b, static_cast<std::uint64_t>(seed)));
    solved += r.solved && r.wall_time <= kWorkedTimeout;
  }
  return {f == 1.0 && solved >= kWorkedRequired,
          fmt("fitness of the worked program %.17g; IGI-SBS solved %d/%d seeds within %.0f s (need %d)", f, solved,
              kWorkedSeeds, kWorkedTimeout, kWorkedRequired)};
}

Outcome edit_type_safety(const Env&) {
  auto t0 = std::chrono::steady_clock::now();
  auto sets = testutil::property_sets();
  Rng rng(20240601);
  int violations = 0, applied = 0, attempts = 0;
  std::set<std::string> dsls;
  while (applied < kEditTrials && attempts < 10 * kEditTrials) {
    const auto& set = sets[static_cast<std::size_t>(attempts++) % sets.size()];
    auto base = random_tree_ramped(set.ps, set.root, 2, 6, rng);
    auto e = random_edit(base, set.ps, rng);
    if (!e) continue;
    auto t = apply_edit_at(base, *base.find(e->target), *e);
    violations += !type_check(t, set.ps).ok() || t.root_type() != set.root;
    dsls.insert(set.dsl);
    ++applied;
  }
  double secs = seconds_since(t0);
  return {violations == 0 && applied == kEditTrials && dsls.size() == 3 && secs < kEditSeconds,
          fmt("%d edits over %zu DSLs, %d type violations, %.1f s (limit %.0f s)", applied, dsls.size(), violations,
              secs, kEditSeconds)};
}

Outcome patch_conflict_law(const Env&) {
  auto sets = testutil::property_sets();
  Rng rng(99);
  int violations = 0, disabled_total = 0;
  for (int i = 0; i < kPatchTrials; ++i) {
    const auto& set = sets[static_cast<std::size_t>(i) % sets.size()];
    auto base = random_tree_ramped(set.ps, set.root, 2, 5, rng);
    // splice two independent patches so conflicts actually occur
    auto a = random_patch(base, set.ps, initial_patch_length(rng), rng).first;
    auto b = random_patch(base, set.ps, initial_patch_length(rng), rng).first;
    auto [x, y] = one_point_crossover(a, b, uniform_real(rng));
    if (coin(rng, 0.5)) mutate_patch(x, base, set.ps, rng);
    x.edits.insert(x.edits.end(), y.edits.begin(), y.edits.end());
    std::shuffle(x.edits.begin(), x.edits.end(), rng);

    auto r1 = apply_patch(base, x);
    auto r2 = apply_patch(base, x);
    violations += !(r1.tree == r2.tree) || r1.disabled != r2.disabled;
    ProgramTree cur = base;
    std::vector<std::size_t> absent;
    for (std::size_t k = 0; k < x.edits.size(); ++k) {
      auto pos = cur.find(x.edits[k].target);
      if (!pos) {
        absent.push_back(k);
        continue;
      }
      cur = apply_edit_at(cur, *pos, x.edits[k]);
    }
    violations += absent != r1.disabled || !(cur == r1.tree) || !type_check(r1.tree, set.ps).ok();
    disabled_total += static_cast<int>(r1.disabled.size());
  }
  return {violations == 0, fmt("%d (base, patch) pairs, %d disabled edits checked, %d violations", kPatchTrials,
                               disabled_total, violations)};
}

std::size_t dp_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
  return d[a.size()][b.size()];
}

Outcome levenshtein(const Env&) {
  Rng rng(5);
  double worst = 0;
  auto draw = [&] {
    std::string s(uniform_int<std::size_t>(rng, 0, 40), 'a');
    for (auto& c : s) c = "abcde "[uniform_int<int>(rng, 0, 5)];
    return s;
  };
  for (int i = 0; i < kLevenshteinPairs; ++i) {
    auto a = draw(), b = draw();
    std::size_t longest = std::max(a.size(), b.size());
    double oracle = longest == 0 ? 1.0 : 1.0 - static_cast<double>(dp_distance(a, b)) / static_cast<double>(longest);
    worst = std::max(worst, std::abs(sim_levenshtein(Value(a), Value(b)) - oracle));
  }
  double kitten = sim_levenshtein(Value(std::string("kitten")), Value(std::string("sitting")));
  double kitten_err = std::abs(kitten - 4.0 / 7.0);
  return {worst <= kLevenshteinTolerance && kitten_err <= kLevenshteinTolerance,
          fmt("%d pairs, max |sim - oracle| = %.3g; sim(kitten,sitting) = %.15f (4/7 = %.15f), tolerance %.0e",
              kLevenshteinPairs, worst, kitten, 4.0 / 7.0, kLevenshteinTolerance)};
}

Outcome patch_length_distribution(const Env&) {
  Rng rng(7);
  double sum = 0;
  for (int i = 0; i < kPatchLengthDraws; ++i) sum += static_cast<double>(initial_patch_length(rng));
  double mean = sum / kPatchLengthDraws;
  return {std::abs(mean - kPatchLengthMean) <= kPatchLengthTolerance,
          fmt("mean initial patch length %.4f over %d draws (target %.1f +- %.1f)", mean, kPatchLengthDraws,
              kPatchLengthMean, kPatchLengthTolerance)};
}

Outcome epoch_monotonicity(const Env&) {
  GenSpec spec;
  spec.min_oracle_size = 5;
  spec.max_oracle_size = 8;
  Rng gen(31337);
  int runs = 0, epochs = 0, violations = 0;
  for (int t = 0; t < kMonotoneTasks; ++t) {
    auto task = generate_benchmark(spec, gen, "mono_" + std::to_string(t));
    for (bool lgp : {false, true}) {
      for (int s = 0; s < kMonotoneSeedsPerTask; ++s) {
        IgiConfig cfg;
        if (lgp) cfg.inner = LgpParams{};
        cfg.seed = static_cast<std::uint64_t>(1000 * t + s);
        cfg.budget.max_evaluations = kMonotoneMaxEvals;
        SearchHooks hooks;
        hooks.on_epoch = [&](const Score& from, const Score& to) {
          ++epochs;
          violations += !better(to, from);
        };
        auto r = run_igi(task, cfg, hooks);
        for (std::size_t i = 1; i < r.trace.size(); ++i) {
          const auto& a = r.trace[i - 1];
          const auto& b = r.trace[i];
          violations += b.best_fitness < a.best_fitness ||
                        (b.best_fitness == a.best_fitness && b.best_size > a.best_size) ||
                        b.evaluations < a.evaluations;
        }
        ++runs;
      }
    }
  }
  return {violations == 0 && runs == 2 * kMonotoneTasks * kMonotoneSeedsPerTask,
          fmt("%d runs (SBS and LGP), %d consecutive epoch pairs, %d violations", runs, epochs, violations)};
}

// ---- scaled experiment, driven through the command-line tool ----

struct ScaledRuns {
  std::map<std::string, int> solved;  // per algorithm
  std::map<std::string, std::vector<fs::path>> solved_files;
  std::size_t tasks = 0;
  double cpu_seconds = 0;
  bool ok = false;
  std::string error;
};

ScaledRuns& scaled_runs(const Env& env) {
  static std::optional<ScaledRuns> cache;
  if (cache) return *cache;
  cache.emplace();
  auto& out = *cache;
  fs::path dir = env.work / "scaled";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto tasks = dir / "tasks", results = dir / "results";
  auto [gen_status, gen_out] =
      sh(env.synth + " gen-bench --out " + q(tasks) + fmt(" --count %d --min-size 5 --max-size 8 --examples 100", kScaledTasks) +
         fmt(" --seed %llu", static_cast<unsigned long long>(kScaledBenchSeed)));
  if (gen_status != 0) {
    out.error = "gen-bench failed: " + gen_out;
    return out;
  }
  std::string algos;
  for (Algorithm a : all_algorithms()) algos += " --algo " + algorithm_name(a);
  auto t0 = std::chrono::steady_clock::now();
  auto [run_status, run_out] = sh(env.synth + " run" + algos + " --task " + q(tasks) +
                                  fmt(" --seed %llu --timeout %.0f --jobs 1 --out ", static_cast<unsigned long long>(kScaledRunSeed),
                                      kScaledTimeout) +
                                  q(results) + " > " + q(dir / "run_log.txt"));
  out.cpu_seconds = seconds_since(t0);
  if (run_status != 0) {
    out.error = "run failed";
    return out;
  }
  sh(env.synth + " summarize " + q(results) + " --out " + q(dir / "summary") + " > " + q(dir / "summary.txt"));

  std::set<std::string> task_names;
  for (const auto& e : fs::directory_iterator(results)) {
    if (e.path().extension() != ".json") continue;
    auto j = load_results({e.path()}).front();
    auto algo = j["algorithm"].get<std::string>();
    task_names.insert(j["task"].get<std::string>());
    out.solved[algo];
    if (j["solved"].get<bool>()) {
      ++out.solved[algo];
      out.solved_files[algo].push_back(e.path());
    }
  }
  out.tasks = task_names.size();
  out.ok = out.tasks == static_cast<std::size_t>(kScaledTasks) && out.solved.size() == all_algorithms().size();
  if (!out.ok) out.error = fmt("expected %d tasks x 6 algorithms of results, found %zu tasks", kScaledTasks, out.tasks);
  return out;
}

Outcome scalability(const Env& env) {
  auto& r = scaled_runs(env);
  if (!r.ok) return {false, r.error};
  int sbs = r.solved["igi-sbs"], lgp = r.solved["igi-lgp"];
  int best_baseline = 0;
  std::string counts;
  for (Algorithm a : all_algorithms()) {
    auto name = algorithm_name(a);
    counts += fmt("%s %d, ", name.c_str(), r.solved[name]);
    if (a != Algorithm::IgiSbs && a != Algorithm::IgiLgp) best_baseline = std::max(best_baseline, r.solved[name]);
  }
  double hours = r.cpu_seconds / 3600.0;
  bool ok = sbs >= best_baseline && lgp >= best_baseline &&
            static_cast<double>(sbs) >= kScaledSbsShare * kScaledTasks && hours <= kScaledCpuHours;
  return {ok, fmt("solved of %d: %sbest baseline %d; IGI-SBS share %.1f%% (need %.0f%%); %.2f CPU-hours (limit %.0f)",
                  kScaledTasks, counts.c_str(), best_baseline, 100.0 * sbs / kScaledTasks, 100 * kScaledSbsShare, hours,
                  kScaledCpuHours)};
}

Outcome generalization(const Env& env) {
  auto& r = scaled_runs(env);
  if (!r.ok) return {false, r.error};
  fs::path tasks = env.work / "scaled" / "tasks";
  std::map<std::string, std::pair<int, int>> gen;  // algo -> (generalizes, solved)
  for (const auto& [algo, files] : r.solved_files) {
    for (const auto& f : files) {
      auto j = load_results({f}).front();
      auto task_file = tasks / (j["task"].get<std::string>() + ".json");
      auto [status, text] = sh(env.synth + " holdout --task " + q(task_file) + fmt(" --n %d --seed 7 --result ", kHoldoutExamples) +
                               q(f));
      if (status != 0) return {false, "holdout failed for " + f.string() + ": " + text};
      ++gen[algo].second;
      gen[algo].first += text.find(" generalizes") != std::string::npos;
    }
  }
  std::string all;
  for (Algorithm a : all_algorithms()) {
    auto [g, s] = gen[algorithm_name(a)];
    all += fmt("%s %d/%d, ", algorithm_name(a).c_str(), g, s);
  }
  auto [g, s] = gen["igi-sbs"];
  double share = s ? static_cast<double>(g) / s : 0.0;
  return {s > 0 && share >= kGeneralizationShare,
          fmt("programs generalizing to %d hold-out examples: %sIGI-SBS %.1f%% (need %.0f%%)", kHoldoutExamples,
              all.c_str(), 100 * share, 100 * kGeneralizationShare)};
}

Outcome determinism(const Env& env) {
  fs::path dir = env.work / "determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto [gs, go] = sh(env.synth + " gen-bench --out " + q(dir / "tasks") +
                     " --count 2 --min-size 5 --max-size 8 --examples 100 --seed 11");
  if (gs != 0) return {false, "gen-bench failed: " + go};
  std::string algos;
  for (Algorithm a : all_algorithms())
    if (a != Algorithm::Gp) algos += " --algo " + algorithm_name(a);
  for (const char* sub : {"a", "b"}) {
    auto common = " --task " + q(dir / "tasks") + " --seed 5 --max-evals 20000 --out " + q(dir / sub) + " > /dev/null 2>&1";
    auto [s1, o1] = sh(env.synth + " run" + algos + common);
    auto [s2, o2] = sh(env.synth + " run --algo gp --param population=500" + common);
    if (s1 != 0 || s2 != 0) return {false, "run failed"};
  }
  int files = 0, mismatches = 0;
  auto strip_time = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    if (p.extension() == ".json") {
      auto j = nlohmann::json::parse(in);
      for (const auto& f : wall_time_fields()) j.erase(f);
      return j.dump(2);
    }
    // trace CSV: drop the leading time column
    std::string line, out;
    while (std::getline(in, line)) out += line.substr(line.find(',')) + "\n";
    return out;
  };
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    ++files;
    auto other = dir / "b" / e.path().filename();
    if (!fs::exists(other) || strip_time(e.path()) != strip_time(other)) ++mismatches;
  }
  return {files == 2 * 6 * 2 && mismatches == 0,
          fmt("%d result and trace files compared across two identical invocations, %d differ beyond wall time", files,
              mismatches)};
}

Outcome formulas(const Env&) {
  double mh = mh_acceptance(3.0, 4.0, 0.7);
  double sa = sa_acceptance(0.6, 0.5, 0.05);
  double e1 = std::abs(mh - std::exp(-0.7)), e2 = std::abs(sa - std::exp(-2.0));
  bool extra = mh_acceptance(4.0, 3.0, 0.7) == 1.0 && sa_acceptance(0.5, 0.6, 0.05) == 1.0;
  return {e1 <= kFormulaTolerance && e2 <= kFormulaTolerance && extra,
          fmt("MH(dC=1, beta=0.7) = %.15f vs exp(-0.7) = %.15f; SA(df=-0.1, T=0.05) = %.15f vs exp(-2) = %.15f", mh,
              std::exp(-0.7), sa, std::exp(-2.0))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  Env env;
  std::string criteria = "1,2,3,4,5,6,7,8,9,10,11";
  env.work = "acceptance_work";
  app.add_option("--synth", env.synth, "Path to the igi_synth binary")->required();
  app.add_option("--work", env.work, "Scratch directory");
  app.add_option("--criteria", criteria, "Comma-separated criterion numbers");
  CLI11_PARSE(app, argc, argv);

  const std::map<int, std::pair<std::string, std::function<Outcome(const Env&)>>> all = {
      {1, {"interpreter conformance", interpreter_conformance}},
      {2, {"worked example reproduction", worked_example}},
      {3, {"edit type safety", edit_type_safety}},
      {4, {"patch determinism and conflict law", patch_conflict_law}},
      {5, {"Levenshtein oracle equivalence", levenshtein}},
      {6, {"LGP initial patch length", patch_length_distribution}},
      {7, {"epoch monotonicity", epoch_monotonicity}},
      {8, {"scaled scalability experiment", scalability}},
      {9, {"generalization to hold-out examples", generalization}},
      {10, {"run determinism", determinism}},
      {11, {"baseline acceptance formulas", formulas}},
  };

  fs::create_directories(env.work);
  bool all_pass = true;
  std::stringstream ss(criteria);
  for (std::string tok; std::getline(ss, tok, ',');) {
    int n = std::stoi(tok);
    auto it = all.find(n);
    if (it == all.end()) {
      std::cerr << "unknown criterion " << n << '\n';
      return 2;
    }
    Outcome o;
    try {
      o = it->second.second(env);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all_pass &= o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << " (" << it->second.first << "): " << o.detail
              << std::endl;
  }
  return all_pass ? 0 : 1;
}
