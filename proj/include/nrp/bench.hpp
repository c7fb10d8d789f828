#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nrp/bma.hpp"
#include "nrp/model.hpp"
#include "nrp/search.hpp"

namespace nrp {

enum class Algo {
  RandomSearch,
  ClimbFirst,
  ClimbSampled,
  Anneal,
  MultiStartAnneal,
  Genetic,
  Multilevel,
};

/// CLI/config tokens: rs, ffhc, shc, sa, mssa, ga, bma.
const char* to_string(Algo algo);
Algo algo_from_string(const std::string& name);

/// A fully parameterized algorithm entry of an experiment. Flat: each run
/// only reads the fields its algo needs.
struct AlgorithmSpec {
  Algo algo = Algo::MultiStartAnneal;
  std::string label;  // display name; defaults to the algo token
  SearchOperator op;  // rs/ffhc/shc/sa, the restarts of mssa, and bma's levels
  int restarts = 30;  // mssa
  GaParams ga;
  MultilevelParams ml;  // its op field is replaced by `op` when running
};

struct AlgorithmRun {
  RunResult run;
  std::optional<MultilevelResult> multilevel;  // present for Algo::Multilevel
};

/// Runs one algorithm once with every piece of randomness derived from
/// `seed` (the rng_seed fields inside the spec are ignored).
AlgorithmRun run_algorithm(const Instance& inst, const AlgorithmSpec& spec, std::uint64_t seed);

struct InstanceJob {
  std::string label;
  Instance instance;
};

struct ExperimentSpec {
  std::vector<InstanceJob> instances;
  std::vector<AlgorithmSpec> algorithms;
  int repetitions = 10;
  std::uint64_t base_seed = 0;
  /// When set, stats.csv and runs.jsonl land here; empty means compute only.
  std::filesystem::path output_dir;
};

/// Reads an experiment config (JSON). Instance entries are either
/// {"path": ...} or {"preset": ..., "ratio": ..., "seed": ...}; relative
/// paths count from the config file's directory. Algorithm entries carry the
/// algo token plus parameter overrides named after the defaults they shadow.
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

struct StatRow {
  std::string instance;
  Money bound = 0;
  std::string algorithm;
  Money best_profit = 0;
  double avg_profit = 0.0;
  double avg_seconds = 0.0;
  std::vector<Money> run_profits;  // repetition order
  /// Percent advantage of this algorithm's average over each other
  /// algorithm's average on the same instance, keyed by label.
  std::vector<std::pair<std::string, double>> advantage;
};

/// Runs repetitions of every (instance, algorithm) pair with derived seeds,
/// re-evaluating every reported profit from the stored solution. Emits
/// stats.csv and runs.jsonl (raw runs, multilevel runs with their traces
/// inline) when the spec names an output directory.
std::vector<StatRow> run_experiment(const ExperimentSpec& spec);

void write_stat_csv(std::span<const StatRow> rows, std::ostream& out);

struct LandscapePoint {
  double n_dist = 0.0;  // disagreeing fraction of customers vs the reference
  double n_diff = 0.0;  // relative profit gap vs the reference
};

/// One local search run per point, compared against a reference solution
/// (typically best_known). The reference must be feasible with positive
/// profit.
std::vector<LandscapePoint> landscape_scan(const Instance& inst, const SearchOperator& op,
                                           int runs, const Solution& reference,
                                           std::uint64_t seed);

struct TrajectoryStep {
  int level = 0;
  int after_approx = 0;  // customers left after fixing the agreed pairs
  int after_soft = 0;    // customers left after also fixing zero-request ones
};

struct ReductionTrajectory {
  int original_scale = 0;
  std::vector<TrajectoryStep> steps;
  int fixed_by_approx = 0;
  int fixed_by_soft = 0;
  int remainder = 0;  // customers never fixed
};

/// Applies up to `pairs` reduction pairs with fresh local optima each level,
/// recording the scale after each half-step. Stops when the instance is
/// empty or a level agrees on nothing.
ReductionTrajectory reduction_trajectory(const Instance& inst, int pairs, int runs_per_level,
                                         const SearchOperator& op, std::uint64_t seed);

struct DistributionSummary {
  std::vector<double> points;  // (profit - mean) / mean per run, input order
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

/// Normalized profit deviations plus quartiles for box-plot rendering.
/// A zero mean leaves the normalization undefined (throws).
DistributionSummary profit_distribution(std::span<const Money> profits);

/// Linear-interpolation quartiles (the common "type 7" convention).
std::array<double, 3> quartiles(std::vector<double> values);

struct BestKnownBudget {
  std::int64_t random_candidates = 1000;  // random solutions sampled
  int multilevel_runs = 20;
  MultilevelParams ml;  // shared by all multilevel runs (rng_seed ignored)
};

/// Best feasible solution across a batch of random sampling and multilevel
/// runs. A stand-in for the true optimum on instances too big to enumerate.
Solution best_known(const Instance& inst, const BestKnownBudget& budget, std::uint64_t seed);

}  // namespace nrp
