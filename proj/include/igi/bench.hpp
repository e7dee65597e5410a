#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "igi/fitness.hpp"
#include "igi/generate.hpp"

namespace igi {

struct GenSpec {
  std::size_t min_oracle_size = 10;
  std::size_t max_oracle_size = 15;
  std::size_t num_examples = 100;
  std::int64_t min_value = -255;
  std::int64_t max_value = 255;
  std::size_t max_list_length = 20;
  std::size_t attempt_limit = 5000;
  std::size_t oracle_limit = 1000;
  // empty: drawn per task from the DeepCoder-style signatures
  std::vector<SemType> input_signature;
};

class BenchmarkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::vector<SemType>>& list_signatures() {
  using enum SemType;
  static const std::vector<std::vector<SemType>> sigs = {{IntArray}, {IntArray, IntArray}, {IntArray, Integer}};
  return sigs;
}

inline bool references_input(const ProgramTree& t, const PrimitiveSet& ps) {
  return std::any_of(t.nodes().begin(), t.nodes().end(), [&](const Node& n) { return ps[n.prim].op == Op::Input; });
}

inline InputEnv random_inputs(const std::vector<SemType>& sig, const GenSpec& spec, Rng& rng) {
  InputEnv env;
  for (SemType t : sig) {
    if (t == SemType::IntArray) {
      IntArray a(uniform_int<std::size_t>(rng, 1, spec.max_list_length));
      for (auto& v : a) v = uniform_int<std::int64_t>(rng, spec.min_value, spec.max_value);
      env.emplace_back(std::move(a));
    } else {
      env.emplace_back(uniform_int<std::int64_t>(rng, spec.min_value, spec.max_value));
    }
  }
  return env;
}

// Non-Null, every integer within the value range, arrays nonempty.
inline bool valid_output(const Value& v, const GenSpec& spec) {
  if (v.is_null()) return false;
  auto in_range = [&](std::int64_t x) { return x >= spec.min_value && x <= spec.max_value; };
  switch (*v.type()) {
    case SemType::Integer:
      return in_range(v.as_int());
    case SemType::IntArray:
      return !v.as_array().empty() && std::all_of(v.as_array().begin(), v.as_array().end(), in_range);
    default:
      return true;
  }
}

// Samples up to `count` valid examples of `oracle` whose inputs are not in
// `excluded` (which is extended with every accepted input).
inline std::vector<Example> sample_examples(const ProgramTree& oracle, const PrimitiveSet& ps,
                                            const std::vector<SemType>& sig, const GenSpec& spec, std::size_t count,
                                            std::size_t attempts, std::set<std::string>& excluded, Rng& rng) {
  std::vector<Example> out;
  for (std::size_t a = 0; a < attempts && out.size() < count; ++a) {
    InputEnv env = random_inputs(sig, spec, rng);
    Value y = evaluate(oracle, ps, env);
    if (!valid_output(y, spec)) continue;
    std::string key;
    for (const auto& v : env) key += to_string(v) + ";";
    if (!excluded.insert(key).second) continue;
    out.push_back(Example{std::move(env), std::move(y)});
  }
  return out;
}

// A list-manipulation task with a hidden random oracle; oracles that cannot
// produce enough valid examples within the attempt limit are discarded.
inline Task generate_benchmark(const GenSpec& spec, Rng& rng, std::string name = "generated") {
  if (spec.min_oracle_size < 1 || spec.max_oracle_size < spec.min_oracle_size || spec.num_examples < 1 ||
      spec.min_value > spec.max_value || spec.max_list_length < 1)
    throw BenchmarkError("invalid generation spec");
  for (std::size_t o = 0; o < spec.oracle_limit; ++o) {
    auto sig = spec.input_signature.empty() ? pick(list_signatures(), rng) : spec.input_signature;
    auto ps = make_task_primitives("dsl-lm", {}, std::nullopt, sig);
    SemType out_type = coin(rng, 0.5) ? SemType::Integer : SemType::IntArray;
    auto size = uniform_int<std::size_t>(rng, spec.min_oracle_size, spec.max_oracle_size);
    auto oracle = random_tree_of_size(*ps, out_type, size, rng);
    if (!oracle || !references_input(*oracle, *ps)) continue;
    std::set<std::string> seen;
    auto examples = sample_examples(*oracle, *ps, sig, spec, spec.num_examples, spec.attempt_limit, seen, rng);
    if (examples.size() < spec.num_examples) continue;
    Task t;
    t.name = std::move(name);
    t.dsl = "dsl-lm";
    t.input_signature = sig;
    t.examples = std::move(examples);
    t.oracle = std::move(*oracle);
    t.ps = std::move(ps);
    return t;
  }
  throw BenchmarkError("no oracle produced enough valid examples within the oracle limit");
}

// Fresh examples from the task's oracle, disjoint from its training inputs.
inline std::vector<Example> generate_holdout(const Task& task, std::size_t n, Rng& rng, const GenSpec& spec = {}) {
  if (!task.oracle) throw BenchmarkError("task '" + task.name + "' has no oracle program; cannot generate hold-out examples");
  if (n == 0) return {};
  std::set<std::string> seen;
  for (const auto& ex : task.examples) {
    std::string key;
    for (const auto& v : ex.inputs) key += to_string(v) + ";";
    seen.insert(key);
  }
  auto out = sample_examples(*task.oracle, *task.ps, task.input_signature, spec, n, spec.attempt_limit * n, seen, rng);
  if (out.size() < n) throw BenchmarkError("could not sample enough hold-out examples");
  return out;
}

// Fraction of hold-out examples reproduced exactly.
inline double check_generalization(const ProgramTree& p, const PrimitiveSet& ps, const std::vector<Example>& holdout) {
  if (holdout.empty()) throw BenchmarkError("empty hold-out set");
  std::size_t hits = 0;
  for (const auto& ex : holdout) hits += sim_exact(ex.output, evaluate(p, ps, ex.inputs)) == 1.0;
  return static_cast<double>(hits) / static_cast<double>(holdout.size());
}

}  // namespace igi
