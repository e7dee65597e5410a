#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "igi/igi_search.hpp"
#include "igi/patch.hpp"
#include "igi/run.hpp"

namespace igi {

struct MhParams {
  double switch_prob = 0.006;
  double beta = 0.7;
  std::size_t max_depth = 30;
};

struct GpParams {
  std::size_t population = 20000;
  double crossover_prob = 0.9;
  double mutation_prob = 0.1;  // per node
  std::size_t tournament_size = 2;
  std::size_t dmin = 2;
  std::size_t dmax = 4;
  std::size_t max_depth = 30;
};

struct SihcParams {
  std::size_t max_mutations = 500;
  std::size_t dmin = 2;
  std::size_t dmax = 4;
  std::size_t max_depth = 30;
};

struct SaParams {
  double t_start = 1.5;
  double t_final = 0.001;
  std::size_t stepsize = 500;
  std::size_t dmin = 2;
  std::size_t dmax = 4;
  std::size_t max_depth = 30;
};

// Step budget assumed for the cooling schedule when only a wall-clock
// limit is set.
inline constexpr std::uint64_t kNominalSaSteps = 5'000'000;

struct BaselineConfig {
  std::variant<MhParams, GpParams, SihcParams, SaParams> params = MhParams{};
  Budget budget;
  std::uint64_t seed = 0;

  void validate() const {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    auto depths = [](std::size_t dmin, std::size_t dmax, std::size_t max_depth) {
      if (dmin < 1 || dmax < dmin || max_depth < dmax) throw std::invalid_argument("invalid depth parameters");
    };
    if (budget.seconds && *budget.seconds < 0) throw std::invalid_argument("negative timeout");
    std::visit(
        [&](const auto& p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, MhParams>) {
            if (!prob(p.switch_prob) || p.beta <= 0) throw std::invalid_argument("invalid MH parameters");
            if (p.max_depth < 1) throw std::invalid_argument("invalid depth parameters");
          } else if constexpr (std::is_same_v<P, GpParams>) {
            if (!prob(p.crossover_prob) || !prob(p.mutation_prob) || p.population < 2 || p.tournament_size < 1)
              throw std::invalid_argument("invalid GP parameters");
            depths(p.dmin, p.dmax, p.max_depth);
          } else if constexpr (std::is_same_v<P, SihcParams>) {
            if (p.max_mutations < 1) throw std::invalid_argument("invalid SIHC parameters");
            depths(p.dmin, p.dmax, p.max_depth);
          } else {
            if (p.t_start <= 0 || p.t_final <= 0 || p.t_final > p.t_start || p.stepsize < 1)
              throw std::invalid_argument("invalid SA parameters");
            depths(p.dmin, p.dmax, p.max_depth);
          }
        },
        params);
  }
};

// Metropolis-Hastings acceptance min{1, exp(beta * (C(p) - C(p')))}.
inline double mh_acceptance(double cost_current, double cost_proposal, double beta) {
  return std::min(1.0, std::exp(beta * (cost_current - cost_proposal)));
}

// Annealing acceptance min{1, exp((f(p') - f(p)) / T)}.
inline double sa_acceptance(double fitness_current, double fitness_proposal, double temperature) {
  return std::min(1.0, std::exp((fitness_proposal - fitness_current) / temperature));
}

// C(p) = sum over examples of (1 - sim).
inline double violation_cost(const Score& s, std::size_t num_examples) {
  return static_cast<double>(num_examples) * (1.0 - s.fitness);
}

// Geometric cooling factor taking t_start to t_final over the planned steps.
inline double cooling_factor(const SaParams& p, std::uint64_t planned_steps) {
  double stages = std::max(1.0, std::floor(static_cast<double>(planned_steps) / static_cast<double>(p.stepsize)));
  return std::pow(p.t_final / p.t_start, 1.0 / stages);
}

namespace detail {

inline std::optional<ProgramTree> apply_random_edit(const ProgramTree& tree, const PrimitiveSet& ps, Rng& rng) {
  auto e = random_edit(tree, ps, rng);
  if (!e) return std::nullopt;
  return apply_edit_at(tree, static_cast<std::size_t>(e->target), *e).renumbered();
}

// Random subtree replacement landing the whole program on `target_size`
// nodes; up to 20 node draws.
inline std::optional<ProgramTree> resize_proposal(const ProgramTree& cur, const PrimitiveSet& ps,
                                                  std::size_t target_size, std::size_t max_depth, Rng& rng) {
  for (int draw = 0; draw < 20; ++draw) {
    std::size_t v = uniform_int<std::size_t>(rng, 0, cur.size() - 1);
    std::size_t rest = cur.size() - cur.subtree_size(v);
    if (target_size <= rest) continue;
    auto sub = random_tree_of_size(ps, cur[v].type, target_size - rest, rng);
    if (!sub) continue;
    ProgramTree cand = cur.with_subtree(v, sub->nodes()).renumbered();
    if (cand.depth() > max_depth) continue;
    return cand;
  }
  return std::nullopt;
}

// Same-signature primitive substitution, each node independently.
inline ProgramTree point_mutation(const ProgramTree& tree, const PrimitiveSet& ps, double per_node, Rng& rng) {
  ProgramTree out = tree;
  auto& nodes = out.mutable_nodes();
  for (auto& n : nodes) {
    if (!coin(rng, per_node)) continue;
    std::vector<std::uint16_t> alts;
    const auto& pool = n.arity == 0 ? ps.terminals_of(n.type) : ps.functions_returning(n.type);
    for (auto q : pool)
      if (q != n.prim && ps[q].arg_types == ps[n.prim].arg_types) alts.push_back(q);
    if (!alts.empty()) n.prim = pick(alts, rng);
  }
  return out;
}

// Child = first parent with one subtree swapped for a same-typed subtree of
// the second parent.
inline std::optional<ProgramTree> subtree_crossover(const ProgramTree& a, const ProgramTree& b, Rng& rng) {
  std::size_t i = uniform_int<std::size_t>(rng, 0, a.size() - 1);
  std::vector<std::size_t> matches;
  for (std::size_t j = 0; j < b.size(); ++j)
    if (b[j].type == a[i].type) matches.push_back(j);
  if (matches.empty()) return std::nullopt;
  std::size_t j = pick(matches, rng);
  return a.with_subtree(i, b.nodes().subspan(j, b.subtree_size(j))).renumbered();
}

}  // namespace detail

inline RunResult run_mh(const Task& task, const MhParams& prm, const Budget& budget, std::uint64_t seed,
                        SearchHooks hooks = {}) {
  SearchContext ctx(task, budget, seed, std::move(hooks));
  const auto& ps = ctx.ps();
  const SemType out = task.output_type();
  const std::size_t n = task.examples.size();

  // start from size 1, or the smallest size the DSL can build for the output type
  std::size_t k = 1;
  std::optional<ProgramTree> start;
  for (; !start && k <= 64; ++k) start = random_tree_of_size(ps, out, k, ctx.rng());
  if (!start) throw GenerationError("MH could not build an initial program");
  k = start->size();
  Candidate cur{*start, ctx.evaluate(*start)};
  ctx.record(TraceEvent::Init);

  while (!ctx.should_stop()) {
    if (coin(ctx.rng(), prm.switch_prob)) {
      if (coin(ctx.rng(), 0.5)) {
        ++k;
      } else if (k > 1) {
        --k;
      }
    }
    auto cand = detail::resize_proposal(cur.tree, ps, k, prm.max_depth, ctx.rng());
    if (!cand) continue;
    Score s = ctx.evaluate(*cand);
    if (ctx.last_improved()) ctx.record(TraceEvent::Accept);
    double a = mh_acceptance(violation_cost(cur.score, n), violation_cost(s, n), prm.beta);
    if (uniform_real(ctx.rng()) < a) cur = Candidate{std::move(*cand), s};
  }
  return ctx.finish();
}

// Steady-state GP: one child per step replaces the loser of a negative
// tournament.
inline RunResult run_gp(const Task& task, const GpParams& prm, const Budget& budget, std::uint64_t seed,
                        SearchHooks hooks = {}) {
  SearchContext ctx(task, budget, seed, std::move(hooks));
  const auto& ps = ctx.ps();
  std::vector<Candidate> pop;
  pop.reserve(prm.population);
  for (std::size_t i = 0; i < prm.population; ++i) {
    auto t = random_tree_ramped(ps, task.output_type(), prm.dmin, prm.dmax, ctx.rng());
    Score s = ctx.evaluate(t);
    pop.push_back({std::move(t), s});
    if (ctx.should_stop()) break;
  }
  ctx.record(TraceEvent::Init);
  if (pop.size() < 2) return ctx.finish();

  auto score_of = [](const Candidate& c) { return c.score; };
  while (!ctx.should_stop()) {
    ProgramTree child;
    if (coin(ctx.rng(), prm.crossover_prob)) {
      const auto& a = pop[tournament(pop, prm.tournament_size, ctx.rng(), score_of)].tree;
      const auto& b = pop[tournament(pop, prm.tournament_size, ctx.rng(), score_of)].tree;
      auto x = detail::subtree_crossover(a, b, ctx.rng());
      child = (x && x->depth() <= prm.max_depth) ? std::move(*x) : a;
    } else {
      child = pop[tournament(pop, prm.tournament_size, ctx.rng(), score_of)].tree;
    }
    child = detail::point_mutation(child, ps, prm.mutation_prob, ctx.rng());
    Score s = ctx.evaluate(child);
    if (ctx.last_improved()) ctx.record(TraceEvent::Accept);

    std::size_t loser = uniform_int<std::size_t>(ctx.rng(), 0, pop.size() - 1);
    std::size_t other = uniform_int<std::size_t>(ctx.rng(), 0, pop.size() - 1);
    if (better(pop[loser].score, pop[other].score)) loser = other;
    pop[loser] = Candidate{std::move(child), s};
  }
  return ctx.finish();
}

// Stochastic iterated hill climbing with typed edits; restarts after
// `max_mutations` consecutive non-improving variants.
inline RunResult run_sihc(const Task& task, const SihcParams& prm, const Budget& budget, std::uint64_t seed,
                          SearchHooks hooks = {}) {
  SearchContext ctx(task, budget, seed, std::move(hooks));
  const auto& ps = ctx.ps();
  auto fresh = [&] {
    auto t = random_tree_ramped(ps, task.output_type(), prm.dmin, prm.dmax, ctx.rng());
    Score s = ctx.evaluate(t);
    return Candidate{std::move(t), s};
  };
  Candidate cur = fresh();
  ctx.record(TraceEvent::Init);
  std::size_t tried = 0;
  while (!ctx.should_stop()) {
    if (tried >= prm.max_mutations) {
      cur = fresh();
      tried = 0;
      ctx.record(TraceEvent::Restart);
      continue;
    }
    auto variant = detail::apply_random_edit(cur.tree, ps, ctx.rng());
    if (!variant || variant->depth() > prm.max_depth) {
      ++tried;
      continue;
    }
    Score s = ctx.evaluate(*variant);
    if (ctx.last_improved()) ctx.record(TraceEvent::Accept);
    if (better(s, cur.score)) {
      cur = Candidate{std::move(*variant), s};
      tried = 0;
    } else {
      ++tried;
    }
  }
  return ctx.finish();
}

inline RunResult run_sa(const Task& task, const SaParams& prm, const Budget& budget, std::uint64_t seed,
                        SearchHooks hooks = {}) {
  SearchContext ctx(task, budget, seed, std::move(hooks));
  const auto& ps = ctx.ps();
  const double rate = cooling_factor(prm, budget.max_evaluations.value_or(kNominalSaSteps));
  auto t = random_tree_ramped(ps, task.output_type(), prm.dmin, prm.dmax, ctx.rng());
  Candidate cur{t, ctx.evaluate(t)};
  ctx.record(TraceEvent::Init);
  double temperature = prm.t_start;
  std::uint64_t step = 0;
  while (!ctx.should_stop()) {
    ++step;
    if (step % prm.stepsize == 0) temperature = std::max(prm.t_final, temperature * rate);
    auto variant = detail::apply_random_edit(cur.tree, ps, ctx.rng());
    if (!variant || variant->depth() > prm.max_depth) continue;
    Score s = ctx.evaluate(*variant);
    if (ctx.last_improved()) ctx.record(TraceEvent::Accept);
    if (uniform_real(ctx.rng()) < sa_acceptance(cur.score.fitness, s.fitness, temperature))
      cur = Candidate{std::move(*variant), s};
  }
  return ctx.finish();
}

inline RunResult run_baseline(const Task& task, const BaselineConfig& cfg, SearchHooks hooks = {}) {
  cfg.validate();
  return std::visit(
      [&](const auto& p) -> RunResult {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, MhParams>) return run_mh(task, p, cfg.budget, cfg.seed, std::move(hooks));
        else if constexpr (std::is_same_v<P, GpParams>) return run_gp(task, p, cfg.budget, cfg.seed, std::move(hooks));
        else if constexpr (std::is_same_v<P, SihcParams>) return run_sihc(task, p, cfg.budget, cfg.seed, std::move(hooks));
        else return run_sa(task, p, cfg.budget, cfg.seed, std::move(hooks));
      },
      cfg.params);
}

}  // namespace igi
