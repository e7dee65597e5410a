#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "igi/generate.hpp"
#include "igi/tree.hpp"

namespace igi {

enum class EditKind : std::uint8_t { Replacement, Insertion, Deletion };

// One edit against a base tree, addressed by base NodeId.
//
// Replacement: in place (same signature, children kept) unless
// `whole_subtree` is set, in which case the subtree at the target becomes
// `prim` applied to `fillers`; the new root keeps the target id.
// Insertion: a fresh `prim` node takes the target's place; the old subtree
// becomes argument `slot`, the remaining arguments come from `fillers`.
// Deletion: child `slot` of the target replaces the target's subtree.
struct Edit {
  EditKind kind = EditKind::Replacement;
  NodeId target = 0;
  std::uint16_t prim = 0;
  std::uint8_t slot = 0;
  bool whole_subtree = false;
  std::vector<Node> fillers;

  bool operator==(const Edit&) const = default;
};

struct Patch {
  std::vector<Edit> edits;
  std::size_t base_size = 0;
  SemType base_root = SemType::Integer;

  static Patch empty_for(const ProgramTree& base) { return Patch{{}, base.size(), base.root_type()}; }
  bool matches(const ProgramTree& base) const { return base_size == base.size() && base_root == base.root_type(); }
  std::size_t length() const { return edits.size(); }
};

struct PatchResult {
  ProgramTree tree;
  std::vector<std::size_t> disabled;  // positions in patch.edits that were skipped
};

namespace detail {

inline void append(std::vector<Node>& out, std::span<const Node> more) { out.insert(out.end(), more.begin(), more.end()); }

inline std::vector<std::span<const Node>> split_subtrees(std::span<const Node> seq) {
  std::vector<std::span<const Node>> out;
  std::size_t pos = 0;
  while (pos < seq.size()) {
    std::size_t end = subtree_end(seq, pos);
    out.push_back(seq.subspan(pos, end - pos));
    pos = end;
  }
  return out;
}

}  // namespace detail

// Applies a single edit whose target exists at `pos` in `tree`.
inline ProgramTree apply_edit_at(const ProgramTree& tree, std::size_t pos, const Edit& e) {
  const Node& target = tree[pos];
  switch (e.kind) {
    case EditKind::Replacement: {
      if (!e.whole_subtree) {
        ProgramTree out = tree;
        out.mutable_nodes()[pos].prim = e.prim;
        return out;
      }
      std::vector<Node> repl;
      repl.reserve(1 + e.fillers.size());
      repl.push_back(Node{e.prim, 0, target.type, target.id});
      detail::append(repl, e.fillers);
      repl.front().arity = static_cast<std::uint8_t>(detail::split_subtrees(e.fillers).size());
      return tree.with_subtree(pos, repl);
    }
    case EditKind::Insertion: {
      auto fillers = detail::split_subtrees(e.fillers);
      std::size_t arity = fillers.size() + 1;
      std::vector<Node> repl;
      repl.push_back(Node{e.prim, static_cast<std::uint8_t>(arity), target.type, kFreshId});
      std::size_t end = tree.subtree_end(pos);
      std::size_t next_filler = 0;
      for (std::size_t k = 0; k < arity; ++k) {
        if (k == e.slot) {
          detail::append(repl, tree.nodes().subspan(pos, end - pos));
        } else {
          detail::append(repl, fillers[next_filler++]);
        }
      }
      return tree.with_subtree(pos, repl);
    }
    case EditKind::Deletion: {
      auto kids = tree.children(pos);
      std::size_t c = kids.at(e.slot);
      std::vector<Node> promoted(tree.nodes().begin() + static_cast<std::ptrdiff_t>(c),
                                 tree.nodes().begin() + static_cast<std::ptrdiff_t>(tree.subtree_end(c)));
      return tree.with_subtree(pos, promoted);
    }
  }
  return tree;
}

// Applies the edits in order; an edit whose target id is no longer present
// is disabled and skipped.
inline PatchResult apply_patch(const ProgramTree& base, const Patch& patch) {
  if (!patch.matches(base)) throw std::invalid_argument("patch was generated against a different base tree");
  PatchResult result{base, {}};
  for (std::size_t i = 0; i < patch.edits.size(); ++i) {
    const Edit& e = patch.edits[i];
    auto pos = result.tree.find(e.target);
    if (!pos) {
      result.disabled.push_back(i);
      continue;
    }
    result.tree = apply_edit_at(result.tree, *pos, e);
  }
  return result;
}

inline bool patches_equivalent(const ProgramTree& base, const Patch& p1, const Patch& p2) {
  return same_structure(apply_patch(base, p1).tree, apply_patch(base, p2).tree);
}

namespace detail {

inline std::optional<std::vector<Node>> fill_arguments(const PrimitiveSet& ps, std::span<const SemType> args,
                                                       std::optional<std::size_t> skip, Rng& rng) {
  std::vector<Node> out;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (skip && *skip == k) continue;
    auto f = random_filler(ps, args[k], rng);
    if (!f) return std::nullopt;
    append(out, *f);
  }
  return out;
}

inline bool fillable(const PrimitiveSet& ps, std::uint16_t f, std::optional<std::size_t> skip) {
  const auto& args = ps[f].arg_types;
  for (std::size_t k = 0; k < args.size(); ++k)
    if ((!skip || *skip != k) && !has_filler(ps, args[k])) return false;
  return true;
}

inline std::optional<Edit> make_replacement(const ProgramTree& tree, const PrimitiveSet& ps, std::size_t pos, Rng& rng) {
  const Node& n = tree[pos];
  const Primitive& cur = ps[n.prim];
  Edit e;
  e.kind = EditKind::Replacement;
  e.target = n.id;
  if (n.arity == 0) {
    std::vector<std::uint16_t> pool;
    for (auto t : ps.terminals_of(n.type))
      if (t != n.prim) pool.push_back(t);
    for (auto f : ps.functions_returning(n.type))
      if (fillable(ps, f, std::nullopt)) pool.push_back(f);
    if (pool.empty()) return std::nullopt;
    e.prim = pick(pool, rng);
    e.whole_subtree = true;
    auto fill = fill_arguments(ps, ps[e.prim].arg_types, std::nullopt, rng);
    if (!fill) return std::nullopt;
    e.fillers = std::move(*fill);
    return e;
  }
  std::vector<std::uint16_t> pool;
  for (auto f : ps.functions_returning(n.type))
    if (f != n.prim && ps[f].arg_types == cur.arg_types) pool.push_back(f);
  if (pool.empty()) return std::nullopt;
  e.prim = pick(pool, rng);
  return e;
}

inline std::optional<Edit> make_insertion(const ProgramTree& tree, const PrimitiveSet& ps, std::size_t pos, Rng& rng) {
  const Node& n = tree[pos];
  // functions are drawn uniformly, then a receiving slot within the function
  std::vector<std::uint16_t> funcs;
  for (auto f : ps.functions_returning(n.type)) {
    const auto& args = ps[f].arg_types;
    bool ok = false;
    for (std::size_t k = 0; k < args.size() && !ok; ++k)
      ok = args[k] == n.type && fillable(ps, f, k);
    if (ok) funcs.push_back(f);
  }
  if (funcs.empty()) return std::nullopt;
  auto f = pick(funcs, rng);
  std::vector<std::size_t> slots;
  for (std::size_t k = 0; k < ps[f].arity(); ++k)
    if (ps[f].arg_types[k] == n.type && fillable(ps, f, k)) slots.push_back(k);
  std::size_t slot = pick(slots, rng);
  auto fill = fill_arguments(ps, ps[f].arg_types, slot, rng);
  if (!fill) return std::nullopt;
  Edit e;
  e.kind = EditKind::Insertion;
  e.target = n.id;
  e.prim = f;
  e.slot = static_cast<std::uint8_t>(slot);
  e.fillers = std::move(*fill);
  return e;
}

inline std::optional<Edit> make_deletion(const ProgramTree& tree, std::size_t pos, Rng& rng) {
  const Node& n = tree[pos];
  auto kids = tree.children(pos);
  std::vector<std::size_t> same;
  for (std::size_t k = 0; k < kids.size(); ++k)
    if (tree[kids[k]].type == n.type) same.push_back(k);
  if (same.empty()) return std::nullopt;
  Edit e;
  e.kind = EditKind::Deletion;
  e.target = n.id;
  e.slot = static_cast<std::uint8_t>(pick(same, rng));
  return e;
}

}  // namespace detail

inline constexpr int kEditRetryBudget = 20;

inline std::optional<Edit> make_edit(const ProgramTree& tree, const PrimitiveSet& ps, std::size_t pos, EditKind kind,
                                     Rng& rng) {
  switch (kind) {
    case EditKind::Replacement:
      return detail::make_replacement(tree, ps, pos, rng);
    case EditKind::Insertion:
      return detail::make_insertion(tree, ps, pos, rng);
    case EditKind::Deletion:
      return detail::make_deletion(tree, pos, rng);
  }
  return std::nullopt;
}

// Draws a target uniformly from `positions` and an edit kind uniformly,
// retrying with a fresh pair when the pair admits no legal edit.
inline std::optional<Edit> random_edit_at(const ProgramTree& tree, const PrimitiveSet& ps,
                                          std::span<const std::size_t> positions, Rng& rng,
                                          int budget = kEditRetryBudget) {
  if (positions.empty()) return std::nullopt;
  for (int attempt = 0; attempt < budget; ++attempt) {
    std::size_t pos = positions[uniform_int<std::size_t>(rng, 0, positions.size() - 1)];
    auto kind = static_cast<EditKind>(uniform_int<int>(rng, 0, 2));
    if (auto e = make_edit(tree, ps, pos, kind, rng)) return e;
  }
  return std::nullopt;
}

// Random edit with the target drawn uniformly over all nodes of `tree`,
// whose ids must be its preorder positions.
inline std::optional<Edit> random_edit(const ProgramTree& tree, const PrimitiveSet& ps, Rng& rng,
                                       int budget = kEditRetryBudget) {
  std::vector<std::size_t> all(tree.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return random_edit_at(tree, ps, all, rng, budget);
}

inline char edit_kind_letter(EditKind k) {
  switch (k) {
    case EditKind::Replacement:
      return 'R';
    case EditKind::Insertion:
      return 'I';
    case EditKind::Deletion:
      return 'D';
  }
  return '?';
}

// Debug text, one line per edit, e.g. "R 3 SUB", "I 0 ADD slot=1 [1]",
// "D 2 child=0".
inline std::string format_edit(const Edit& e, const PrimitiveSet& ps) {
  std::string out(1, edit_kind_letter(e.kind));
  out += ' ' + std::to_string(e.target) + ' ';
  switch (e.kind) {
    case EditKind::Replacement: {
      if (!e.whole_subtree) return out + ps[e.prim].symbol;
      std::vector<Node> repl{Node{e.prim, static_cast<std::uint8_t>(ps[e.prim].arity()), ps[e.prim].return_type, 0}};
      detail::append(repl, e.fillers);
      return out + format_nodes(repl, ps);
    }
    case EditKind::Insertion: {
      out += ps[e.prim].symbol + " slot=" + std::to_string(e.slot) + " [";
      auto parts = detail::split_subtrees(e.fillers);
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += "; ";
        out += format_nodes(parts[i], ps);
      }
      return out + "]";
    }
    case EditKind::Deletion:
      return out + "child=" + std::to_string(e.slot);
  }
  return out;
}

inline std::string format_patch(const Patch& p, const PrimitiveSet& ps) {
  std::string out;
  for (const auto& e : p.edits) out += format_edit(e, ps) + "\n";
  return out;
}

}  // namespace igi
