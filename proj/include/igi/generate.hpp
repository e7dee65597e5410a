#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "igi/tree.hpp"

namespace igi {

using Rng = std::mt19937_64;

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename T>
T uniform_int(Rng& rng, T lo, T hi) {
  return std::uniform_int_distribution<T>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline bool coin(Rng& rng, double p) { return uniform_real(rng) < p; }

template <typename C>
const auto& pick(const C& items, Rng& rng) {
  return items[uniform_int<std::size_t>(rng, 0, items.size() - 1)];
}

namespace detail {

inline bool grow_node(const PrimitiveSet& ps, SemType t, std::size_t depth, std::size_t height, std::size_t dmin,
                      bool full, Rng& rng, std::vector<Node>& out) {
  std::vector<std::uint16_t> funcs;
  for (auto f : ps.functions_returning(t))
    if (ps.min_completion_depth(f) + depth - 1 <= height) funcs.push_back(f);
  const auto& terms = ps.terminals_of(t);

  std::uint16_t chosen;
  if (full || depth < dmin) {
    if (!funcs.empty()) {
      chosen = pick(funcs, rng);
    } else if (!terms.empty()) {
      chosen = pick(terms, rng);
    } else {
      return false;
    }
  } else {
    std::size_t total = funcs.size() + terms.size();
    if (total == 0) return false;
    std::size_t k = uniform_int<std::size_t>(rng, 0, total - 1);
    chosen = k < terms.size() ? terms[k] : funcs[k - terms.size()];
  }
  out.push_back(make_node(ps, chosen));
  for (SemType a : ps[chosen].arg_types)
    if (!grow_node(ps, a, depth + 1, height, dmin, full, rng, out)) return false;
  return true;
}

// Splits `total` into `parts` nonnegative integers, uniformly over all
// compositions.
inline std::vector<std::size_t> random_composition(std::size_t total, std::size_t parts, Rng& rng) {
  std::vector<std::size_t> out(parts, 0);
  if (parts == 0) return out;
  if (parts == 1) {
    out[0] = total;
    return out;
  }
  // choose parts-1 bar positions among total+parts-1 slots
  std::vector<std::size_t> slots(total + parts - 1);
  for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = i;
  std::vector<std::size_t> bars;
  for (std::size_t i = 0; i < parts - 1; ++i) {
    std::size_t j = uniform_int<std::size_t>(rng, i, slots.size() - 1);
    std::swap(slots[i], slots[j]);
    bars.push_back(slots[i]);
  }
  std::sort(bars.begin(), bars.end());
  std::size_t prev = 0;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    out[i] = bars[i] - prev;
    prev = bars[i] + 1;
  }
  out[parts - 1] = total + parts - 1 - prev;
  return out;
}

inline bool sized_node(const PrimitiveSet& ps, SemType t, std::size_t n, Rng& rng, std::vector<Node>& out) {
  if (n == 1) {
    const auto& terms = ps.terminals_of(t);
    if (terms.empty()) return false;
    out.push_back(make_node(ps, pick(terms, rng)));
    return true;
  }
  std::vector<std::uint16_t> funcs;
  for (auto f : ps.functions_returning(t))
    if (ps.min_completion_size(f) <= n) funcs.push_back(f);
  if (funcs.empty()) return false;
  std::uint16_t f = pick(funcs, rng);
  const auto& args = ps[f].arg_types;
  auto extra = random_composition(n - ps.min_completion_size(f), args.size(), rng);
  out.push_back(make_node(ps, f));
  for (std::size_t i = 0; i < args.size(); ++i)
    if (!sized_node(ps, args[i], ps.min_size(args[i]) + extra[i], rng, out)) return false;
  return true;
}

}  // namespace detail

// Ramped half-and-half: target depth uniform in [dmin, dmax], then "full" or
// "grow" with equal probability. Trees outside the depth range are redrawn.
inline ProgramTree random_tree_ramped(const PrimitiveSet& ps, SemType root, std::size_t dmin, std::size_t dmax,
                                      Rng& rng) {
  if (dmin < 1 || dmax < dmin) throw GenerationError("invalid depth range");
  if (ps.min_depth(root) == kUnreachable || ps.min_depth(root) > dmax)
    throw GenerationError("no tree of type " + std::string(type_name(root)) + " fits the depth range");
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto height = uniform_int<std::size_t>(rng, dmin, dmax);
    bool full = coin(rng, 0.5);
    std::vector<Node> nodes;
    if (!detail::grow_node(ps, root, 1, height, dmin, full, rng, nodes)) continue;
    ProgramTree tree(std::move(nodes));
    auto d = tree.depth();
    if (d >= dmin && d <= dmax) return tree.renumbered();
  }
  throw GenerationError("could not generate a tree of type " + std::string(type_name(root)) +
                        " within the depth range");
}

// Exact-size generation by recursive budget splitting, up to 50 attempts.
inline std::optional<ProgramTree> random_tree_of_size(const PrimitiveSet& ps, SemType root, std::size_t size,
                                                      Rng& rng) {
  if (size == 0 || ps.min_size(root) == kUnreachable || ps.min_size(root) > size) return std::nullopt;
  for (int attempt = 0; attempt < 50; ++attempt) {
    std::vector<Node> nodes;
    if (detail::sized_node(ps, root, size, rng, nodes)) return ProgramTree(std::move(nodes)).renumbered();
  }
  return std::nullopt;
}

// Functions of type t whose arguments can all be filled with terminals.
inline std::vector<std::uint16_t> terminal_fillable_functions(const PrimitiveSet& ps, SemType t) {
  std::vector<std::uint16_t> out;
  for (auto f : ps.functions_returning(t)) {
    const auto& args = ps[f].arg_types;
    if (std::all_of(args.begin(), args.end(), [&](SemType a) { return ps.has_terminal(a); })) out.push_back(f);
  }
  return out;
}

inline bool has_filler(const PrimitiveSet& ps, SemType t) {
  return ps.has_terminal(t) || !terminal_fillable_functions(ps, t).empty();
}

// A random terminal of type t, or, when the set has none, a function of type t
// applied to random terminals. Nodes carry kFreshId.
inline std::optional<std::vector<Node>> random_filler(const PrimitiveSet& ps, SemType t, Rng& rng) {
  if (ps.has_terminal(t)) return std::vector<Node>{make_node(ps, pick(ps.terminals_of(t), rng))};
  auto funcs = terminal_fillable_functions(ps, t);
  if (funcs.empty()) return std::nullopt;
  auto f = pick(funcs, rng);
  std::vector<Node> out{make_node(ps, f)};
  for (SemType a : ps[f].arg_types) out.push_back(make_node(ps, pick(ps.terminals_of(a), rng)));
  return out;
}

}  // namespace igi
