#pragma once

#include <algorithm>
#include <compare>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "igi/interpreter.hpp"

namespace igi {

struct Example {
  InputEnv inputs;
  Value output;

  bool operator==(const Example&) const = default;
};

enum class SimKind { Exact, Levenshtein };

// A programming-by-example problem. `ps` already contains the input
// terminals for `input_signature`.
struct Task {
  std::string name;
  std::string dsl;
  std::optional<std::vector<std::string>> allowed_functions;
  std::vector<Value> constants;
  std::vector<SemType> input_signature;
  std::vector<Example> examples;
  std::optional<ProgramTree> oracle;
  std::shared_ptr<const PrimitiveSet> ps;

  SemType output_type() const { return *examples.front().output.type(); }
  SimKind sim_kind() const { return dsl == "dsl-st" ? SimKind::Levenshtein : SimKind::Exact; }
  const PrimitiveSet& primitives() const { return *ps; }
};

inline std::shared_ptr<const PrimitiveSet> make_task_primitives(const std::string& dsl,
                                                                const std::vector<Value>& constants,
                                                                const std::optional<std::vector<std::string>>& allowed,
                                                                const std::vector<SemType>& signature) {
  return std::make_shared<const PrimitiveSet>(builtin_primitive_set(dsl, constants, allowed).with_inputs(signature));
}

struct Score {
  double fitness = 0.0;
  std::size_t size = 1;

  bool operator==(const Score&) const = default;
};

// Higher fitness is better; equal fitness prefers the smaller program.
// `greater` means `a` is better than `b`.
inline std::weak_ordering compare(const Score& a, const Score& b) {
  if (a.fitness > b.fitness) return std::weak_ordering::greater;
  if (a.fitness < b.fitness) return std::weak_ordering::less;
  if (a.size < b.size) return std::weak_ordering::greater;
  if (a.size > b.size) return std::weak_ordering::less;
  return std::weak_ordering::equivalent;
}

inline bool better(const Score& a, const Score& b) { return compare(a, b) > 0; }

inline bool is_solution(const Score& s) { return s.fitness == 1.0; }

inline double sim_exact(const Value& expected, const Value& actual) {
  if (actual.is_null() || expected.is_null()) return 0.0;
  return expected == actual ? 1.0 : 0.0;
}

inline std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
      diag = up;
    }
  }
  return row[b.size()];
}

// 1 - lev(a, b) / max(|a|, |b|); 1 for two empty strings. Any non-string
// actual value scores 0.
inline double sim_levenshtein(const Value& expected, const Value& actual) {
  if (expected.type() != SemType::String || actual.type() != SemType::String) return 0.0;
  const auto& a = expected.as_string();
  const auto& b = actual.as_string();
  std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein_distance(a, b)) / static_cast<double>(longest);
}

inline double sim(SimKind kind, const Value& expected, const Value& actual) {
  return kind == SimKind::Exact ? sim_exact(expected, actual) : sim_levenshtein(expected, actual);
}

inline double fitness_of_nodes(std::span<const Node> nodes, const Task& task) {
  const auto kind = task.sim_kind();
  if (kind == SimKind::Exact) {
    std::size_t hits = 0;
    for (const auto& ex : task.examples) hits += sim_exact(ex.output, evaluate_nodes(nodes, *task.ps, ex.inputs)) == 1.0;
    return static_cast<double>(hits) / static_cast<double>(task.examples.size());
  }
  // summed in sorted order so the mean does not depend on example order
  std::vector<double> sims;
  sims.reserve(task.examples.size());
  for (const auto& ex : task.examples) sims.push_back(sim_levenshtein(ex.output, evaluate_nodes(nodes, *task.ps, ex.inputs)));
  std::sort(sims.begin(), sims.end());
  double total = 0.0;
  for (double s : sims) total += s;
  return total / static_cast<double>(sims.size());
}

inline Score fitness(const ProgramTree& p, const Task& task) {
  return Score{fitness_of_nodes(p.nodes(), task), p.size()};
}

}  // namespace igi
