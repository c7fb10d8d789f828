#pragma once

#include <cstdint>
#include <string>

#include "nrp/model.hpp"

namespace nrp {

/// Stream tags for deriving independent seeds from one base seed. Every
/// piece of randomness in the project flows from (base seed, tag, indices)
/// through derive_seed, which is what makes whole experiments replayable.
enum class SeedTag : std::uint64_t {
  Restart = 1,     // multi-start repetitions
  LevelRun = 2,    // per-level local search runs inside the multilevel solver
  FinalSolve = 3,  // the solve on the last reduced instance
  Repetition = 4,  // benchmark repetitions
  Landscape = 5,
  Trajectory = 6,
  BestKnown = 7,
  Generator = 8,
};

enum class OperatorKind {
  RandomSearch,  // fresh random feasible solution per iteration, keep the best
  ClimbFirst,    // flip the first improving feasible neighbor, random scan order
  ClimbSampled,  // flip the best of a sampled set of neighbors
  Anneal,        // simulated annealing, geometric-free slow cooling
};

/// One local search configuration. Flat on purpose: only the fields their
/// kind uses are read, everything else is ignored.
struct SearchOperator {
  OperatorKind kind = OperatorKind::Anneal;
  std::int64_t iteration_budget = 1'000'000;
  int sample_count = 10;             // ClimbSampled; >= customer count means steepest ascent
  double start_temperature = 100.0;  // Anneal
  double cooling_ratio = 1e-7;       // Anneal
  std::uint64_t rng_seed = 0;
};

const char* to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(const std::string& name);

struct RunResult {
  Solution solution;
  Money profit = 0;
  Money cost = 0;
  double seconds = 0.0;
  /// Number of candidate evaluations: one per random candidate, probed
  /// flip, proposed move, or repaired offspring.
  std::int64_t evaluations = 0;
};

/// Runs the configured operator with its own rng_seed.
RunResult run_search(const Instance& inst, const SearchOperator& op);
/// Same, but with the seed overridden (used for derived per-run seeds).
RunResult run_search(const Instance& inst, const SearchOperator& op, std::uint64_t seed);

/// Independent restarts of the annealer, best result wins (ties keep the
/// earliest restart). Restart r uses derive_seed(seed, Restart, r).
RunResult multi_start_anneal(const Instance& inst, int restarts, const SearchOperator& op,
                             std::uint64_t seed);

struct GaParams {
  int population_size = 100;
  double elitism_ratio = 0.3;    // survivor fraction, best first
  double crossover_ratio = 0.3;  // probability an offspring mixes two parents
  double mutation_ratio = 0.1;   // per-gene flip probability
  std::int64_t max_generations = 100'000;
  std::uint64_t rng_seed = 0;
};

/// Generational GA with elitism, fitness-proportionate parent selection,
/// uniform crossover, and repair by random deselection. Returns the best
/// individual ever seen.
RunResult genetic_search(const Instance& inst, const GaParams& params);

/// Probability of accepting a move that changes profit by profit_delta at
/// temperature t. Improving moves are always taken.
double acceptance_probability(Money profit_delta, double t);

/// Temperature after `steps` applications of t <- t / (1 + ratio * t),
/// computed with the same extended-precision recurrence the annealer runs.
double anneal_temperature(double start_temperature, double cooling_ratio, std::int64_t steps);

}  // namespace nrp
