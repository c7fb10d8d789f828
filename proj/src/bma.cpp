#include "nrp/bma.hpp"

#include <chrono>
#include <stdexcept>

#include "nrp/errors.hpp"
#include "nrp/rng.hpp"

namespace nrp {
namespace {

using Clock = std::chrono::steady_clock;

void validate(const MultilevelParams& p) {
  if (p.max_levels < 0) throw std::invalid_argument("level cap must be >= 0");
  if (p.target_scale < 0) throw std::invalid_argument("target scale must be >= 0");
  if (p.runs_per_level < 1) throw std::invalid_argument("runs per level must be >= 1");
}

}  // namespace

MultilevelResult multilevel_solve(const Instance& inst, const MultilevelParams& params) {
  LocalSearchFn fn = [&params](const Instance& sub, std::uint64_t seed) {
    return run_search(sub, params.op, seed);
  };
  return multilevel_solve(inst, params, fn);
}

MultilevelResult multilevel_solve(const Instance& inst, const MultilevelParams& params,
                                  const LocalSearchFn& local_search) {
  validate(params);
  auto start = Clock::now();

  MultilevelResult result;
  Instance cur = inst;
  for (int k = 1; k <= params.max_levels && cur.customer_count() > params.target_scale; ++k) {
    LevelTrace tr;
    tr.level = k;
    tr.before = cur;
    tr.optima.reserve(params.runs_per_level);
    for (int j = 0; j < params.runs_per_level; ++j) {
      RunResult run = local_search(
          cur, derive_seed(params.rng_seed, std::uint64_t(SeedTag::LevelRun), k, j));
      result.evaluations += run.evaluations;
      tr.optima.push_back(std::move(run.solution));
    }
    tr.approx = approximate_backbone(tr.optima);
    tr.mid = reduce_instance(cur, tr.approx).instance;
    tr.soft = soft_backbone(tr.mid);
    tr.after = reduce_instance(tr.mid, tr.soft).instance;
    tr.progressed = !tr.approx.empty() || !tr.soft.empty();
    bool stuck = tr.approx.empty();
    cur = tr.after;
    result.levels.push_back(std::move(tr));
    // A level where the runs agree on nothing would repeat forever; record
    // it and hand the rest to the direct solve.
    if (stuck) break;
  }

  result.final_run = local_search(
      cur, derive_seed(params.rng_seed, std::uint64_t(SeedTag::FinalSolve), 0, 0));
  result.evaluations += result.final_run.evaluations;

  // Layer the fixed pairs of every level back onto the residual solution.
  std::vector<std::pair<Id, bool>> pairs = result.final_run.solution.pairs();
  std::vector<Backbone> parts;
  for (const LevelTrace& tr : result.levels) {
    for (const auto& pr : tr.approx.pairs()) pairs.push_back(pr);
    for (const auto& pr : tr.soft.pairs()) pairs.push_back(pr);
    if (tr.progressed) ++result.effective_levels;
    parts.push_back(tr.approx);
    parts.push_back(tr.soft);
  }
  result.combined = combine_backbones(parts);
  result.solution = Solution::from_pairs(std::move(pairs));
  if (!result.solution.covers(inst))
    throw IntegrityError("refined solution does not assign every original customer exactly once");
  result.profit = solution_profit(inst, result.solution);
  result.cost = solution_cost(inst, result.solution);
  if (result.cost > inst.bound())
    throw IntegrityError("refined solution exceeds the bound: " + std::to_string(result.cost) +
                         " > " + std::to_string(inst.bound()));
  result.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

double fixed_ratio(const MultilevelResult& result, const Instance& original) {
  if (original.customer_count() == 0) return 0.0;
  return static_cast<double>(result.combined.size()) /
         static_cast<double>(original.customer_count());
}

}  // namespace nrp
