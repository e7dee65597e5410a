#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "igi/fitness.hpp"
#include "igi/generate.hpp"

namespace igi {

// Stops a run at whichever limit triggers first; both are optional.
struct Budget {
  std::optional<double> seconds;
  std::optional<std::uint64_t> max_evaluations;
};

enum class TraceEvent : std::uint8_t { Init, Epoch, Perturb, Accept, Restart };

inline std::string_view event_name(TraceEvent e) {
  switch (e) {
    case TraceEvent::Init:
      return "init";
    case TraceEvent::Epoch:
      return "epoch";
    case TraceEvent::Perturb:
      return "perturb";
    case TraceEvent::Accept:
      return "accept";
    case TraceEvent::Restart:
      return "restart";
  }
  return "?";
}

struct TraceRow {
  double time = 0.0;
  std::uint64_t evaluations = 0;
  double best_fitness = 0.0;
  std::size_t best_size = 0;
  TraceEvent event = TraceEvent::Init;
};

struct RunResult {
  ProgramTree best;
  Score best_score;
  bool solved = false;
  double wall_time = 0.0;
  std::uint64_t evaluations = 0;
  std::vector<TraceRow> trace;
};

inline void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace) {
  os << "time,evaluations,best_fitness,best_size,event\n";
  char buf[64];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof buf, "%.6f", r.time);
    os << buf << ',' << r.evaluations << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.best_fitness);
    os << buf << ',' << r.best_size << ',' << event_name(r.event) << '\n';
  }
}

// Observation points for instrumented runs (tests, diagnostics).
struct SearchHooks {
  std::function<void(const ProgramTree&, const Score&)> on_evaluate;
  // consecutive programs of one improvement chain: (p_i, p_{i+1})
  std::function<void(const Score& from, const Score& to)> on_epoch;
  std::function<void()> on_chain_start;
};

// Per-run state shared by every search algorithm: the task, the seeded
// generator, the evaluation tally, the budget and the best-ever program.
class SearchContext {
 public:
  using Clock = std::chrono::steady_clock;

  SearchContext(const Task& task, Budget budget, std::uint64_t seed, SearchHooks hooks = {})
      : task_(task), budget_(budget), rng_(seed), hooks_(std::move(hooks)), start_(Clock::now()) {}

  const Task& task() const { return task_; }
  const PrimitiveSet& ps() const { return *task_.ps; }
  Rng& rng() { return rng_; }
  const SearchHooks& hooks() const { return hooks_; }

  // One full fitness evaluation; increments the tally and updates the
  // best-ever program.
  Score evaluate(const ProgramTree& p) {
    Score s = fitness(p, task_);
    ++evaluations_;
    if (hooks_.on_evaluate) hooks_.on_evaluate(p, s);
    last_improved_ = !best_ || better(s, best_score_);
    if (last_improved_) {
      best_ = p;
      best_score_ = s;
    }
    return s;
  }

  // Whether the latest evaluate() produced a new best-ever program.
  bool last_improved() const { return last_improved_; }

  std::uint64_t evaluations() const { return evaluations_; }
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

  bool solved() const { return best_ && is_solution(best_score_); }

  bool budget_exhausted() const {
    if (budget_.max_evaluations && evaluations_ >= *budget_.max_evaluations) return true;
    if (budget_.seconds && elapsed() >= *budget_.seconds) return true;
    return false;
  }

  bool should_stop() const { return solved() || budget_exhausted(); }

  bool has_best() const { return best_.has_value(); }
  const ProgramTree& best() const { return *best_; }
  const Score& best_score() const { return best_score_; }

  void record(TraceEvent event) {
    trace_.push_back(TraceRow{elapsed(), evaluations_, best_ ? best_score_.fitness : 0.0, best_ ? best_score_.size : 0, event});
  }

  RunResult finish() {
    RunResult r;
    r.best = best_.value();
    r.best_score = best_score_;
    r.solved = is_solution(best_score_);
    r.wall_time = elapsed();
    r.evaluations = evaluations_;
    r.trace = trace_;
    return r;
  }

 private:
  const Task& task_;
  Budget budget_;
  Rng rng_;
  SearchHooks hooks_;
  Clock::time_point start_;
  std::uint64_t evaluations_ = 0;
  std::optional<ProgramTree> best_;
  Score best_score_;
  std::vector<TraceRow> trace_;
  bool last_improved_ = false;
};

}  // namespace igi
