#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nrp/backbone.hpp"
#include "nrp/model.hpp"
#include "nrp/search.hpp"

namespace nrp {

struct MultilevelParams {
  /// Hard cap on reduction levels.
  int max_levels = 10;
  /// Stop reducing once the instance has at most this many customers.
  int target_scale = 20;
  /// Local optima collected per level; their intersection is what gets fixed.
  int runs_per_level = 5;
  /// The local search used both per level and for the residual instance.
  SearchOperator op;
  std::uint64_t rng_seed = 0;
};

/// Everything one reduction level did, kept verbatim so a run can be
/// audited or replayed offline.
struct LevelTrace {
  int level = 1;  // 1-based
  Instance before;
  std::vector<Solution> optima;  // runs_per_level local optima on `before`
  Backbone approx;               // pairs all optima agree on
  Instance mid;                  // `before` with `approx` applied
  Backbone soft;                 // zero-request customers of `mid`
  Instance after;                // `mid` with `soft` applied
  bool progressed = true;        // whether the level fixed any customer
};

struct MultilevelResult {
  Solution solution;  // total assignment over the original instance
  Money profit = 0;
  Money cost = 0;
  RunResult final_run;  // local search on the last reduced instance
  std::vector<LevelTrace> levels;
  int effective_levels = 0;  // levels that fixed at least one customer
  Backbone combined;         // union of approx and soft pairs across levels
  double seconds = 0.0;
  std::int64_t evaluations = 0;
};

/// Signature of a pluggable local search: instance plus derived seed in,
/// run result out. The default forwards to run_search with params.op.
using LocalSearchFn = std::function<RunResult(const Instance&, std::uint64_t)>;

/// Multilevel reduction solve. Each level runs the local search
/// runs_per_level times (seeds derive_seed(rng_seed, LevelRun, level, run)),
/// fixes the customers all runs agree on, then fixes customers whose
/// remaining requests already come for free. Reduction stops at target_scale
/// customers, after max_levels levels, or when a level fixes nothing. The
/// residual instance is solved directly (seed derive_seed(rng_seed,
/// FinalSolve, 0, 0)) and the fixed pairs are layered back on top.
MultilevelResult multilevel_solve(const Instance& inst, const MultilevelParams& params);
MultilevelResult multilevel_solve(const Instance& inst, const MultilevelParams& params,
                                  const LocalSearchFn& local_search);

/// Share of customers the reduction phase fixed, in [0, 1].
double fixed_ratio(const MultilevelResult& result, const Instance& original);

}  // namespace nrp
