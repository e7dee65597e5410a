#pragma once

#include <optional>
#include <random>
#include <stdexcept>
#include <tuple>
#include <variant>
#include <vector>

#include "igi/patch.hpp"
#include "igi/run.hpp"

namespace igi {

struct SbsParams {
  std::size_t beam_width = 50;
  std::size_t successors = 5;
  std::size_t max_patch_length = 3;
  std::size_t tournament_size = 2;
};

struct LgpParams {
  std::size_t population = 100;
  std::size_t generations = 5;
  std::size_t tournament_size = 2;
  double crossover_prob = 1.0;
  double mutation_prob = 1.0;
};

struct IgiConfig {
  std::variant<SbsParams, LgpParams> inner = SbsParams{};
  std::optional<std::size_t> init_samples;  // K; defaults to B*C*Lmax or N*G
  std::size_t perturbations = 200;          // M
  std::size_t min_perturb_size = 4;         // S_min
  std::size_t dmin = 2;
  std::size_t dmax = 4;
  Budget budget;
  std::uint64_t seed = 0;

  std::size_t init_sample_count() const {
    if (init_samples) return *init_samples;
    if (const auto* s = std::get_if<SbsParams>(&inner)) return s->beam_width * s->successors * s->max_patch_length;
    const auto& l = std::get<LgpParams>(inner);
    return l.population * l.generations;
  }

  void validate() const {
    if (init_sample_count() < 1) throw std::invalid_argument("K must be at least 1");
    if (dmin < 1 || dmax < dmin) throw std::invalid_argument("invalid initialization depth range");
    if (perturbations < 1) throw std::invalid_argument("M must be at least 1");
    if (budget.seconds && *budget.seconds < 0) throw std::invalid_argument("negative timeout");
    if (const auto* s = std::get_if<SbsParams>(&inner)) {
      if (s->beam_width < 1 || s->successors < 1 || s->max_patch_length < 1 || s->tournament_size < 1)
        throw std::invalid_argument("SBS parameters must be positive");
    } else {
      const auto& l = std::get<LgpParams>(inner);
      if (l.population < 2 || l.generations < 1 || l.tournament_size < 1)
        throw std::invalid_argument("LGP needs population >= 2 and positive generations/tournament size");
      if (l.crossover_prob < 0 || l.crossover_prob > 1 || l.mutation_prob < 0 || l.mutation_prob > 1)
        throw std::invalid_argument("LGP probabilities must lie in [0,1]");
    }
  }
};

struct Candidate {
  ProgramTree tree;
  Score score;
};

// Best of `tournament_size` uniform draws with replacement; the first drawn
// wins ties.
template <typename T, typename ScoreOf>
std::size_t tournament(const std::vector<T>& pool, std::size_t tournament_size, Rng& rng, ScoreOf&& score_of) {
  std::size_t best = uniform_int<std::size_t>(rng, 0, pool.size() - 1);
  for (std::size_t i = 1; i < tournament_size; ++i) {
    std::size_t j = uniform_int<std::size_t>(rng, 0, pool.size() - 1);
    if (better(score_of(pool[j]), score_of(pool[best]))) best = j;
  }
  return best;
}

// K ramped half-and-half samples; the best one (first wins ties). With
// `respect_budget` the sampling stops early once the run must stop.
inline Candidate init_prog(SearchContext& ctx, const IgiConfig& cfg, bool respect_budget = false) {
  const std::size_t k = cfg.init_sample_count();
  std::optional<Candidate> best;
  for (std::size_t i = 0; i < k; ++i) {
    if (respect_budget && best && ctx.should_stop()) break;
    auto tree = random_tree_ramped(ctx.ps(), ctx.task().output_type(), cfg.dmin, cfg.dmax, ctx.rng());
    Score s = ctx.evaluate(tree);
    if (!best || better(s, best->score)) best = Candidate{std::move(tree), s};
    if (!respect_budget && ctx.solved()) break;
  }
  return *best;
}

namespace detail {

// Tracks the first strict improvement over the epoch's starting program and
// decides whether the epoch keeps searching.
class EpochTracker {
 public:
  explicit EpochTracker(Score current) : current_(current) {}

  // Returns true when the epoch should return right away.
  bool observe(const ProgramTree& tree, const Score& s, const Score& best_ever_before) {
    if (!better(s, current_)) return false;
    if (!best_) {
      best_ = Candidate{tree.renumbered(), s};
      // not a new global best: hand it back immediately
      return !better(s, best_ever_before);
    }
    if (better(s, best_->score)) best_ = Candidate{tree.renumbered(), s};
    return false;
  }

  std::optional<Candidate> result() const { return best_; }

 private:
  Score current_;
  std::optional<Candidate> best_;
};

struct PatchedCandidate {
  Patch patch;
  ProgramTree tree;
  Score score;
};

// Base positions (== base ids) that still exist in a patched tree.
inline std::vector<std::size_t> surviving_base_positions(const ProgramTree& patched) {
  std::vector<std::size_t> out;
  out.reserve(patched.size());
  for (const Node& n : patched.nodes())
    if (n.id != kFreshId) out.push_back(static_cast<std::size_t>(n.id));
  return out;
}

// Extends `from` by one edit generated against `base` whose target still
// exists in the patched tree, so the new edit never conflicts.
inline std::optional<std::pair<Patch, ProgramTree>> extend_patch(const ProgramTree& base, const Patch& patch,
                                                                 const ProgramTree& patched, const PrimitiveSet& ps,
                                                                 Rng& rng) {
  auto positions = surviving_base_positions(patched);
  auto edit = random_edit_at(base, ps, positions, rng);
  if (!edit) return std::nullopt;
  auto pos = patched.find(edit->target);
  ProgramTree next = apply_edit_at(patched, *pos, *edit);
  Patch extended = patch;
  extended.edits.push_back(std::move(*edit));
  return std::pair{std::move(extended), std::move(next)};
}

}  // namespace detail

// One stochastic-beam-search epoch. Returns a program strictly better than
// `current`, or nullopt when none was found by the maximum patch length.
inline std::optional<Candidate> sbs_epoch(SearchContext& ctx, const SbsParams& prm, const Candidate& current) {
  const ProgramTree& base = current.tree;
  const PrimitiveSet& ps = ctx.ps();
  detail::EpochTracker tracker(current.score);

  std::vector<detail::PatchedCandidate> beam(prm.beam_width,
                                             detail::PatchedCandidate{Patch::empty_for(base), base, current.score});
  for (std::size_t len = 0; len < prm.max_patch_length; ++len) {
    std::vector<detail::PatchedCandidate> pool;
    pool.reserve(beam.size() * prm.successors);
    for (const auto& parent : beam) {
      for (std::size_t c = 0; c < prm.successors; ++c) {
        if (ctx.should_stop()) return tracker.result();
        auto ext = detail::extend_patch(base, parent.patch, parent.tree, ps, ctx.rng());
        if (!ext) continue;
        Score prior = ctx.best_score();
        Score s = ctx.evaluate(ext->second);
        if (tracker.observe(ext->second, s, prior)) return tracker.result();
        pool.push_back({std::move(ext->first), std::move(ext->second), s});
      }
    }
    if (pool.empty()) break;
    std::vector<detail::PatchedCandidate> next;
    next.reserve(prm.beam_width);
    for (std::size_t b = 0; b < prm.beam_width; ++b)
      next.push_back(pool[tournament(pool, prm.tournament_size, ctx.rng(), [](const auto& p) { return p.score; })]);
    beam = std::move(next);
  }
  return tracker.result();
}

// Cut points floor(alpha*L1), floor(alpha*L2); the tails are swapped.
inline std::pair<Patch, Patch> one_point_crossover(const Patch& a, const Patch& b, double alpha) {
  auto cut_a = static_cast<std::size_t>(alpha * static_cast<double>(a.length()));
  auto cut_b = static_cast<std::size_t>(alpha * static_cast<double>(b.length()));
  Patch x{{}, a.base_size, a.base_root};
  Patch y{{}, b.base_size, b.base_root};
  x.edits.assign(a.edits.begin(), a.edits.begin() + static_cast<std::ptrdiff_t>(cut_a));
  x.edits.insert(x.edits.end(), b.edits.begin() + static_cast<std::ptrdiff_t>(cut_b), b.edits.end());
  y.edits.assign(b.edits.begin(), b.edits.begin() + static_cast<std::ptrdiff_t>(cut_b));
  y.edits.insert(y.edits.end(), a.edits.begin() + static_cast<std::ptrdiff_t>(cut_a), a.edits.end());
  return {std::move(x), std::move(y)};
}

enum class PatchMutation { Remove, Replace, InsertAfter };

// One edit chosen uniformly is removed, replaced by a random edit, or
// followed by a new random edit. An empty patch receives one random edit.
inline void mutate_patch(Patch& patch, const ProgramTree& base, const PrimitiveSet& ps, Rng& rng) {
  if (patch.edits.empty()) {
    if (auto e = random_edit(base, ps, rng)) patch.edits.push_back(std::move(*e));
    return;
  }
  std::size_t i = uniform_int<std::size_t>(rng, 0, patch.edits.size() - 1);
  auto op = static_cast<PatchMutation>(uniform_int<int>(rng, 0, 2));
  switch (op) {
    case PatchMutation::Remove:
      patch.edits.erase(patch.edits.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    case PatchMutation::Replace:
      if (auto e = random_edit(base, ps, rng)) patch.edits[i] = std::move(*e);
      break;
    case PatchMutation::InsertAfter:
      if (auto e = random_edit(base, ps, rng))
        patch.edits.insert(patch.edits.begin() + static_cast<std::ptrdiff_t>(i) + 1, std::move(*e));
      break;
  }
}

inline std::size_t initial_patch_length(Rng& rng) {
  return 1 + static_cast<std::size_t>(std::poisson_distribution<int>(1.0)(rng));
}

// Random patch of the given length, built edit by edit so that no edit
// conflicts with the ones before it.
inline std::pair<Patch, ProgramTree> random_patch(const ProgramTree& base, const PrimitiveSet& ps, std::size_t length,
                                                  Rng& rng) {
  Patch patch = Patch::empty_for(base);
  ProgramTree tree = base;
  for (std::size_t i = 0; i < length; ++i) {
    auto ext = detail::extend_patch(base, patch, tree, ps, rng);
    if (!ext) break;
    patch = std::move(ext->first);
    tree = std::move(ext->second);
  }
  return {std::move(patch), std::move(tree)};
}

// One linear-GP epoch over patches. The initial population counts as the
// first of at most G generations.
inline std::optional<Candidate> lgp_epoch(SearchContext& ctx, const LgpParams& prm, const Candidate& current) {
  const ProgramTree& base = current.tree;
  const PrimitiveSet& ps = ctx.ps();
  detail::EpochTracker tracker(current.score);

  std::vector<detail::PatchedCandidate> pop;
  pop.reserve(prm.population);
  for (std::size_t i = 0; i < prm.population; ++i) {
    if (ctx.should_stop()) return tracker.result();
    auto [patch, tree] = random_patch(base, ps, initial_patch_length(ctx.rng()), ctx.rng());
    Score prior = ctx.best_score();
    Score s = ctx.evaluate(tree);
    if (tracker.observe(tree, s, prior)) return tracker.result();
    pop.push_back({std::move(patch), std::move(tree), s});
  }

  auto score_of = [](const auto& p) { return p.score; };
  for (std::size_t g = 1; g < prm.generations; ++g) {
    std::vector<detail::PatchedCandidate> next;
    next.reserve(prm.population);
    while (next.size() < prm.population) {
      const auto& a = pop[tournament(pop, prm.tournament_size, ctx.rng(), score_of)];
      const auto& b = pop[tournament(pop, prm.tournament_size, ctx.rng(), score_of)];
      Patch x = a.patch;
      Patch y = b.patch;
      if (coin(ctx.rng(), prm.crossover_prob)) {
        double alpha;
        do {
          alpha = uniform_real(ctx.rng());
        } while (alpha <= 0.0);
        std::tie(x, y) = one_point_crossover(a.patch, b.patch, alpha);
      }
      for (Patch* child : {&x, &y}) {
        if (next.size() >= prm.population) break;
        if (coin(ctx.rng(), prm.mutation_prob)) mutate_patch(*child, base, ps, ctx.rng());
        if (ctx.should_stop()) return tracker.result();
        ProgramTree tree = apply_patch(base, *child).tree;
        Score prior = ctx.best_score();
        Score s = ctx.evaluate(tree);
        if (tracker.observe(tree, s, prior)) return tracker.result();
        next.push_back({std::move(*child), std::move(tree), s});
      }
    }
    pop = std::move(next);
  }
  return tracker.result();
}

inline std::optional<Candidate> gi_epoch(SearchContext& ctx, const IgiConfig& cfg, const Candidate& current) {
  if (const auto* s = std::get_if<SbsParams>(&cfg.inner)) return sbs_epoch(ctx, *s, current);
  return lgp_epoch(ctx, std::get<LgpParams>(cfg.inner), current);
}

// Best of M random same-type subtree replacements at a node whose subtree
// has at least S_min nodes; falls back to a fresh initial program when no
// such node exists or the root is drawn.
inline Candidate perturb(SearchContext& ctx, const IgiConfig& cfg, const Candidate& p) {
  const ProgramTree& tree = p.tree;
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < tree.size(); ++i)
    if (tree.subtree_size(i) >= cfg.min_perturb_size) eligible.push_back(i);
  if (eligible.empty()) return init_prog(ctx, cfg, true);
  std::size_t v = pick(eligible, ctx.rng());
  if (v == 0) return init_prog(ctx, cfg, true);

  const std::size_t subtree = tree.subtree_size(v);
  const SemType type = tree[v].type;
  std::optional<Candidate> best;
  for (std::size_t m = 0; m < cfg.perturbations; ++m) {
    if (best && ctx.should_stop()) break;
    std::optional<ProgramTree> sub;
    for (int tries = 0; tries < 100 && !sub; ++tries)
      sub = random_tree_of_size(ctx.ps(), type, uniform_int<std::size_t>(ctx.rng(), 1, subtree), ctx.rng());
    if (!sub) continue;
    ProgramTree cand = tree.with_subtree(v, sub->nodes()).renumbered();
    Score s = ctx.evaluate(cand);
    if (!best || better(s, best->score)) best = Candidate{std::move(cand), s};
  }
  if (!best) return init_prog(ctx, cfg, true);
  return *best;
}

// Repeats GI epochs from `start` until one fails to improve.
inline Candidate iter_gen_improve(SearchContext& ctx, const IgiConfig& cfg, Candidate start) {
  if (ctx.hooks().on_chain_start) ctx.hooks().on_chain_start();
  Candidate cur = std::move(start);
  while (!ctx.should_stop()) {
    auto next = gi_epoch(ctx, cfg, cur);
    if (!next) break;
    if (ctx.hooks().on_epoch) ctx.hooks().on_epoch(cur.score, next->score);
    cur = std::move(*next);
    ctx.record(TraceEvent::Epoch);
  }
  return cur;
}

// Iterative genetic improvement: initial program, improvement chain, then
// perturb / improve / accept-the-better until a solution is found or the
// budget runs out. Returns the best program ever evaluated.
inline RunResult run_igi(const Task& task, const IgiConfig& cfg, SearchHooks hooks = {}) {
  cfg.validate();
  SearchContext ctx(task, cfg.budget, cfg.seed, std::move(hooks));
  Candidate p = init_prog(ctx, cfg);
  ctx.record(TraceEvent::Init);
  if (!ctx.should_stop()) p = iter_gen_improve(ctx, cfg, std::move(p));
  while (!ctx.should_stop()) {
    Candidate perturbed = perturb(ctx, cfg, p);
    ctx.record(TraceEvent::Perturb);
    if (ctx.should_stop()) break;
    Candidate improved = iter_gen_improve(ctx, cfg, std::move(perturbed));
    if (better(improved.score, p.score)) p = std::move(improved);
    ctx.record(TraceEvent::Accept);
  }
  return ctx.finish();
}

}  // namespace igi
