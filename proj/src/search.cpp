#include "nrp/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nrp/flip_eval.hpp"
#include "nrp/rng.hpp"

namespace nrp {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void validate(const SearchOperator& op) {
  if (op.iteration_budget < 0) throw std::invalid_argument("iteration budget must be >= 0");
  switch (op.kind) {
    case OperatorKind::ClimbSampled:
      if (op.sample_count < 1) throw std::invalid_argument("sample count must be >= 1");
      break;
    case OperatorKind::Anneal:
      if (!(op.start_temperature > 0.0))
        throw std::invalid_argument("start temperature must be positive");
      if (!(op.cooling_ratio >= 0.0))
        throw std::invalid_argument("cooling ratio must be non-negative");
      break;
    default:
      break;
  }
}

RunResult finish(const FlipEval& ev, const std::vector<std::uint8_t>& best_bits,
                 std::int64_t evals, Clock::time_point start) {
  FlipEval scratch(ev.instance());
  scratch.load(best_bits);
  RunResult out;
  out.solution = scratch.snapshot();
  out.profit = scratch.profit();
  out.cost = scratch.cost();
  out.evaluations = evals;
  out.seconds = elapsed_seconds(start);
  return out;
}

RunResult random_search(const Instance& inst, const SearchOperator& op, std::uint64_t seed) {
  auto start = Clock::now();
  FlipEval ev(inst);
  Rng rng(seed);
  std::vector<std::uint8_t> best = ev.bits();  // empty selection, always feasible
  Money best_profit = 0;
  std::int64_t evals = 0;
  for (std::int64_t it = 0; it < op.iteration_budget; ++it) {
    ev.randomize(rng);
    ev.repair(rng);
    ++evals;
    if (ev.profit() > best_profit) {
      best_profit = ev.profit();
      best = ev.bits();
    }
  }
  return finish(ev, best, evals, start);
}

RunResult climb_first(const Instance& inst, const SearchOperator& op, std::uint64_t seed) {
  auto start = Clock::now();
  FlipEval ev(inst);
  Rng rng(seed);
  ev.randomize(rng);
  ev.repair(rng);
  std::int64_t evals = 1;
  int n = ev.customer_count();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  bool improved = n > 0;
  while (improved && evals < op.iteration_budget) {
    improved = false;
    // Fresh scan order per sweep; take the first improving feasible flip.
    for (int t = n - 1; t > 0; --t) std::swap(order[t], order[rng.below(t + 1)]);
    for (int i : order) {
      ++evals;
      if (ev.cost_if_flipped(i) <= inst.bound() && ev.profit_if_flipped(i) > ev.profit()) {
        ev.flip(i);
        improved = true;
        break;
      }
      if (evals >= op.iteration_budget) break;
    }
  }
  return finish(ev, ev.bits(), evals, start);
}

RunResult climb_sampled(const Instance& inst, const SearchOperator& op, std::uint64_t seed) {
  auto start = Clock::now();
  FlipEval ev(inst);
  Rng rng(seed);
  ev.randomize(rng);
  ev.repair(rng);
  std::int64_t evals = 1;
  int n = ev.customer_count();
  int k = std::min<int>(op.sample_count, n);  // k == n degenerates to steepest ascent
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  while (k > 0 && evals < op.iteration_budget) {
    // Partial Fisher-Yates: pool[0..k) is a uniform sample without replacement.
    for (int t = 0; t < k; ++t)
      std::swap(pool[t], pool[t + static_cast<int>(rng.below(n - t))]);
    int pick = -1;
    Money pick_profit = ev.profit();
    for (int t = 0; t < k && evals < op.iteration_budget; ++t) {
      int i = pool[t];
      ++evals;
      if (ev.cost_if_flipped(i) > inst.bound()) continue;
      Money p = ev.profit_if_flipped(i);
      if (p > pick_profit || (p == pick_profit && pick >= 0 && i < pick)) {
        pick_profit = p;
        pick = i;
      }
    }
    if (pick < 0) break;  // sampled neighborhood exhausted without improvement
    ev.flip(pick);
  }
  return finish(ev, ev.bits(), evals, start);
}

RunResult anneal(const Instance& inst, const SearchOperator& op, std::uint64_t seed) {
  auto start = Clock::now();
  FlipEval ev(inst);
  Rng rng(seed);
  ev.randomize(rng);
  ev.repair(rng);
  std::vector<std::uint8_t> best = ev.bits();
  Money best_profit = ev.profit();
  std::int64_t evals = 1;
  int n = ev.customer_count();
  // Extended precision keeps the long product of tiny cooling steps from
  // drifting away from the closed form over millions of iterations.
  long double t = op.start_temperature;
  if (n > 0) {
    for (std::int64_t it = 0; it < op.iteration_budget; ++it) {
      int i = static_cast<int>(rng.below(n));
      ++evals;
      if (ev.cost_if_flipped(i) <= inst.bound()) {
        Money delta = ev.profit_if_flipped(i) - ev.profit();
        if (delta > 0 || rng.uniform01() < acceptance_probability(delta, static_cast<double>(t))) {
          ev.flip(i);
          if (ev.profit() > best_profit) {
            best_profit = ev.profit();
            best = ev.bits();
          }
        }
      }
      t = t / (1.0L + static_cast<long double>(op.cooling_ratio) * t);
    }
  }
  return finish(ev, best, evals, start);
}

}  // namespace

const char* to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::RandomSearch: return "rs";
    case OperatorKind::ClimbFirst: return "ffhc";
    case OperatorKind::ClimbSampled: return "shc";
    case OperatorKind::Anneal: return "sa";
  }
  return "?";
}

OperatorKind operator_kind_from_string(const std::string& name) {
  if (name == "rs") return OperatorKind::RandomSearch;
  if (name == "ffhc") return OperatorKind::ClimbFirst;
  if (name == "shc") return OperatorKind::ClimbSampled;
  if (name == "sa") return OperatorKind::Anneal;
  throw std::invalid_argument("unknown search operator '" + name + "'");
}

RunResult run_search(const Instance& inst, const SearchOperator& op) {
  return run_search(inst, op, op.rng_seed);
}

RunResult run_search(const Instance& inst, const SearchOperator& op, std::uint64_t seed) {
  validate(op);
  switch (op.kind) {
    case OperatorKind::RandomSearch: return random_search(inst, op, seed);
    case OperatorKind::ClimbFirst: return climb_first(inst, op, seed);
    case OperatorKind::ClimbSampled: return climb_sampled(inst, op, seed);
    case OperatorKind::Anneal: return anneal(inst, op, seed);
  }
  throw std::invalid_argument("unknown search operator kind");
}

RunResult multi_start_anneal(const Instance& inst, int restarts, const SearchOperator& op,
                             std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("restart count must be >= 1");
  auto start = Clock::now();
  RunResult best;
  std::int64_t evals = 0;
  for (int r = 0; r < restarts; ++r) {
    RunResult run = run_search(inst, op, derive_seed(seed, std::uint64_t(SeedTag::Restart), r));
    evals += run.evaluations;
    if (r == 0 || run.profit > best.profit) best = std::move(run);
  }
  best.evaluations = evals;
  best.seconds = elapsed_seconds(start);
  return best;
}

RunResult genetic_search(const Instance& inst, const GaParams& p) {
  if (p.population_size < 1) throw std::invalid_argument("population size must be >= 1");
  for (double ratio : {p.elitism_ratio, p.crossover_ratio, p.mutation_ratio}) {
    if (!(ratio >= 0.0 && ratio <= 1.0))
      throw std::invalid_argument("GA ratios must lie in [0, 1]");
  }
  if (p.max_generations < 0) throw std::invalid_argument("generation budget must be >= 0");

  auto start = Clock::now();
  FlipEval ev(inst);
  Rng rng(p.rng_seed);
  int n = ev.customer_count();
  int pop_size = p.population_size;
  std::int64_t evals = 0;

  std::vector<std::vector<std::uint8_t>> pop(pop_size);
  std::vector<Money> fitness(pop_size, 0);
  std::vector<std::uint8_t> best(n, 0);
  Money best_profit = 0;

  for (int i = 0; i < pop_size; ++i) {
    ev.randomize(rng);
    ev.repair(rng);
    ++evals;
    pop[i] = ev.bits();
    fitness[i] = ev.profit();
    if (fitness[i] > best_profit) {
      best_profit = fitness[i];
      best = pop[i];
    }
  }

  // Fitness-proportionate draw; uniform when every individual scores zero.
  auto pick_parent = [&](Money total) -> int {
    if (total <= 0) return static_cast<int>(rng.below(pop_size));
    Money r = static_cast<Money>(rng.below(static_cast<std::uint64_t>(total)));
    for (int i = 0; i < pop_size; ++i) {
      if (r < fitness[i]) return i;
      r -= fitness[i];
    }
    return pop_size - 1;
  };

  int elite_count = std::min<int>(
      pop_size, static_cast<int>(std::ceil(p.elitism_ratio * pop_size)));
  std::vector<int> order(pop_size);
  std::vector<std::vector<std::uint8_t>> next(pop_size);
  std::vector<Money> next_fitness(pop_size);

  for (std::int64_t gen = 0; gen < p.max_generations && n > 0; ++gen) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fitness[a] > fitness[b]; });
    for (int i = 0; i < elite_count; ++i) {
      next[i] = pop[order[i]];
      next_fitness[i] = fitness[order[i]];
    }
    Money total = std::accumulate(fitness.begin(), fitness.end(), Money{0});
    for (int i = elite_count; i < pop_size; ++i) {
      int a = pick_parent(total);
      std::vector<std::uint8_t> child = pop[a];
      if (rng.uniform01() < p.crossover_ratio) {
        int b = pick_parent(total);
        for (int g = 0; g < n; ++g)
          if (rng.coin()) child[g] = pop[b][g];
      }
      for (int g = 0; g < n; ++g)
        if (rng.uniform01() < p.mutation_ratio) child[g] ^= 1;
      ev.load(child);
      ev.repair(rng);
      ++evals;
      next[i] = ev.bits();
      next_fitness[i] = ev.profit();
      if (next_fitness[i] > best_profit) {
        best_profit = next_fitness[i];
        best = next[i];
      }
    }
    pop.swap(next);
    fitness.swap(next_fitness);
  }

  return finish(ev, best, evals, start);
}

double acceptance_probability(Money profit_delta, double t) {
  if (profit_delta > 0) return 1.0;
  return std::exp(static_cast<double>(profit_delta) / t);
}

double anneal_temperature(double start_temperature, double cooling_ratio, std::int64_t steps) {
  if (!(start_temperature > 0.0)) throw std::invalid_argument("start temperature must be positive");
  if (steps < 0) throw std::invalid_argument("step count must be >= 0");
  long double t = start_temperature;
  long double ratio = cooling_ratio;
  for (std::int64_t i = 0; i < steps; ++i) t = t / (1.0L + ratio * t);
  return static_cast<double>(t);
}

}  // namespace nrp
