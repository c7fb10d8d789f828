#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "nrp/backbone.hpp"
#include "nrp/bench.hpp"
#include "nrp/errors.hpp"
#include "support.hpp"

using namespace nrp;
using nrp::testing::data_dir;
using nrp::testing::example_instance;
using nrp::testing::pick;

namespace fs = std::filesystem;

namespace {

/// Scratch directory that cleans up after itself.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / tag) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int count_lines(const fs::path& p) {
  std::ifstream in(p);
  int n = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++n;
  return n;
}

}  // namespace

TEST_CASE("algorithm tokens round-trip") {
  for (auto a : {Algo::RandomSearch, Algo::ClimbFirst, Algo::ClimbSampled, Algo::Anneal,
                 Algo::MultiStartAnneal, Algo::Genetic, Algo::Multilevel})
    CHECK(algo_from_string(to_string(a)) == a);
  CHECK(algo_from_string("bma") == Algo::Multilevel);
  CHECK_THROWS_AS(algo_from_string("magic"), std::invalid_argument);
}

TEST_CASE("every algorithm produces a self-consistent run") {
  Instance inst = example_instance();
  for (auto a : {Algo::RandomSearch, Algo::ClimbFirst, Algo::ClimbSampled, Algo::Anneal,
                 Algo::MultiStartAnneal, Algo::Genetic, Algo::Multilevel}) {
    AlgorithmSpec spec;
    spec.algo = a;
    spec.op.iteration_budget = 1500;
    spec.restarts = 3;
    spec.ga.population_size = 20;
    spec.ga.max_generations = 20;
    spec.ml.target_scale = 3;
    spec.ml.runs_per_level = 2;
    AlgorithmRun run = run_algorithm(inst, spec, 12);
    CHECK(run.run.solution.covers(inst));
    CHECK(run.run.profit == solution_profit(inst, run.run.solution));
    CHECK(run.run.cost <= inst.bound());
    CHECK(run.multilevel.has_value() == (a == Algo::Multilevel));
    AlgorithmRun again = run_algorithm(inst, spec, 12);
    CHECK(again.run.solution == run.run.solution);
  }
}

TEST_CASE("experiments aggregate repetitions and cross advantages") {
  ExperimentSpec spec;
  spec.instances.push_back({"ex", example_instance()});
  AlgorithmSpec mssa;
  mssa.algo = Algo::MultiStartAnneal;
  mssa.label = "mssa";
  mssa.op.iteration_budget = 1000;
  mssa.restarts = 3;
  AlgorithmSpec rs;
  rs.algo = Algo::RandomSearch;
  rs.label = "rs";
  rs.op.iteration_budget = 60;
  spec.algorithms = {mssa, rs};
  spec.repetitions = 3;
  spec.base_seed = 21;

  auto rows = run_experiment(spec);
  REQUIRE(rows.size() == 2);
  const StatRow& m = rows[0];
  const StatRow& r = rows[1];
  CHECK(m.instance == "ex");
  CHECK(m.bound == 26);
  CHECK(m.algorithm == "mssa");
  REQUIRE(m.run_profits.size() == 3);
  Money best = *std::max_element(m.run_profits.begin(), m.run_profits.end());
  CHECK(m.best_profit == best);
  double avg = 0;
  for (Money p : m.run_profits) avg += static_cast<double>(p);
  avg /= 3.0;
  CHECK(m.avg_profit == doctest::Approx(avg));

  REQUIRE(m.advantage.size() == 1);
  CHECK(m.advantage[0].first == "rs");
  double expected = (m.avg_profit - r.avg_profit) / r.avg_profit * 100.0;
  CHECK(m.advantage[0].second == doctest::Approx(expected));
  REQUIRE(r.advantage.size() == 1);
  CHECK(r.advantage[0].first == "mssa");

  // Profits are seed-determined, so a rerun reproduces them exactly.
  auto rows2 = run_experiment(spec);
  CHECK(rows2[0].run_profits == m.run_profits);
  CHECK(rows2[1].run_profits == r.run_profits);

  spec.repetitions = 0;
  CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
}

TEST_CASE("experiments write stats.csv and runs.jsonl") {
  TempDir tmp("nrp-bench-out");
  ExperimentSpec spec;
  spec.instances.push_back({"ex", example_instance()});
  AlgorithmSpec sa;
  sa.algo = Algo::Anneal;
  sa.label = "sa";
  sa.op.iteration_budget = 800;
  AlgorithmSpec bma;
  bma.algo = Algo::Multilevel;
  bma.label = "bma";
  bma.op.iteration_budget = 800;
  bma.ml.target_scale = 3;
  bma.ml.runs_per_level = 2;
  spec.algorithms = {sa, bma};
  spec.repetitions = 2;
  spec.base_seed = 33;
  spec.output_dir = tmp.path / "out";

  auto rows = run_experiment(spec);
  REQUIRE(fs::exists(spec.output_dir / "stats.csv"));
  REQUIRE(fs::exists(spec.output_dir / "runs.jsonl"));
  CHECK(count_lines(spec.output_dir / "runs.jsonl") == 4);

  std::ifstream raw(spec.output_dir / "runs.jsonl");
  std::string line;
  int bma_lines = 0;
  while (std::getline(raw, line)) {
    auto j = nlohmann::json::parse(line);
    CHECK(j.contains("instance"));
    CHECK(j.contains("seed"));
    CHECK(j.contains("profit"));
    CHECK(j.contains("solution"));
    if (j.at("algorithm") == "bma") {
      ++bma_lines;
      CHECK(j.contains("trace"));
      CHECK(j.contains("effective_levels"));
      CHECK(j.contains("fixed"));
    }
  }
  CHECK(bma_lines == 2);

  std::ifstream csv(spec.output_dir / "stats.csv");
  std::string header;
  REQUIRE(std::getline(csv, header));
  CHECK(header == "instance,bound,algorithm,best_profit,avg_profit,avg_time_s,run_profits,vs_sa,vs_bma");
  int data_lines = 0;
  while (std::getline(csv, line))
    if (!line.empty()) ++data_lines;
  CHECK(data_lines == 2);

  // The csv writer itself is deterministic for fixed rows.
  std::ostringstream a, b;
  write_stat_csv(rows, a);
  write_stat_csv(rows, b);
  CHECK(a.str() == b.str());
}

TEST_CASE("experiment configs load with overrides and relative paths") {
  TempDir tmp("nrp-bench-cfg");
  fs::path cfg = tmp.path / "exp.json";
  {
    std::ofstream out(cfg);
    out << "// desk experiment\n"
        << "{\n"
        << "  \"seed\": 5, \"repetitions\": 2, \"output\": \"outdir\",\n"
        << "  \"instances\": [\n"
        << "    {\"path\": \"" << data_dir() << "/example7x8.nrp\"},\n"
        << "    {\"preset\": \"" << data_dir()
        << "/presets/nrp-1.json\", \"ratio\": 0.3, \"seed\": 9, \"name\": \"g1\"}\n"
        << "  ],\n"
        << "  \"algorithms\": [\n"
        << "    {\"algo\": \"mssa\", \"budget\": 1000, \"restarts\": 5},\n"
        << "    {\"algo\": \"bma\", \"budget\": 1000, \"target_scale\": 10, \"label\": \"ml\"}\n"
        << "  ]\n"
        << "}\n";
  }
  ExperimentSpec spec = load_experiment_spec(cfg);
  CHECK(spec.base_seed == 5);
  CHECK(spec.repetitions == 2);
  CHECK(spec.output_dir == tmp.path / "outdir");
  REQUIRE(spec.instances.size() == 2);
  CHECK(spec.instances[0].label == "example7x8");
  CHECK(spec.instances[0].instance.bound() == 26);
  CHECK(spec.instances[1].label == "g1");
  CHECK(spec.instances[1].instance.customer_count() == 100);
  REQUIRE(spec.algorithms.size() == 2);
  CHECK(spec.algorithms[0].algo == Algo::MultiStartAnneal);
  CHECK(spec.algorithms[0].restarts == 5);
  CHECK(spec.algorithms[0].op.iteration_budget == 1000);
  CHECK(spec.algorithms[1].label == "ml");
  CHECK(spec.algorithms[1].ml.target_scale == 10);

  fs::path broken = tmp.path / "broken.json";
  std::ofstream(broken) << "{\"instances\": [], \"algorithms\": []}";
  CHECK_THROWS_AS(load_experiment_spec(broken), ModelError);
  CHECK_THROWS_AS(load_experiment_spec(tmp.path / "missing.json"), ModelError);

  fs::path bad_algo = tmp.path / "bad.json";
  std::ofstream(bad_algo) << "{\"instances\": [{\"path\": \"" << data_dir()
                          << "/example7x8.nrp\"}], \"algorithms\": [{\"algo\": \"zen\"}]}";
  CHECK_THROWS_AS(load_experiment_spec(bad_algo), std::invalid_argument);
}

TEST_CASE("landscape points measure distance and profit gap") {
  Instance inst = example_instance();
  Solution best = brute_force_oracle(inst).optimal_solutions[0];
  SearchOperator op;
  op.iteration_budget = 2000;
  auto points = landscape_scan(inst, op, 8, best, 77);
  REQUIRE(points.size() == 8);
  for (const auto& pt : points) {
    CHECK(pt.n_dist >= 0.0);
    CHECK(pt.n_dist <= 1.0);
    CHECK(pt.n_diff >= 0.0);  // nothing beats the optimum
    // Distances are multiples of 1/7 on a 7-customer instance.
    CHECK(pt.n_dist * 7.0 == doctest::Approx(std::round(pt.n_dist * 7.0)));
  }
  auto points2 = landscape_scan(inst, op, 8, best, 77);
  for (std::size_t i = 0; i < points.size(); ++i) {
    CHECK(points[i].n_dist == points2[i].n_dist);
    CHECK(points[i].n_diff == points2[i].n_diff);
  }

  CHECK_THROWS_AS(landscape_scan(inst, op, 0, best, 1), std::invalid_argument);
  CHECK_THROWS_AS(landscape_scan(inst, op, 1, pick(inst, {2, 4, 6}), 1), std::invalid_argument);
  CHECK_THROWS_AS(landscape_scan(inst, op, 1, Solution::from_pairs({{1, true}}), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(landscape_scan(inst, op, 1, Solution::none_selected(inst), 1),
                  std::domain_error);
}

TEST_CASE("reduction trajectories account for every customer") {
  Instance inst = example_instance();
  SearchOperator op;
  op.iteration_budget = 2000;

  ReductionTrajectory one = reduction_trajectory(inst, 12, 1, op, 5);
  CHECK(one.original_scale == 7);
  REQUIRE(one.steps.size() == 1);
  CHECK(one.steps[0].after_approx == 0);
  CHECK(one.fixed_by_approx == 7);
  CHECK(one.remainder == 0);

  ReductionTrajectory tr = reduction_trajectory(inst, 12, 5, op, 6);
  CHECK(tr.fixed_by_approx + tr.fixed_by_soft + tr.remainder == 7);
  int prev = tr.original_scale;
  for (const auto& step : tr.steps) {
    CHECK(step.after_approx <= prev);
    CHECK(step.after_soft <= step.after_approx);
    prev = step.after_soft;
  }
  CHECK(tr.remainder == prev);

  Instance empty({}, {}, {}, 0);
  ReductionTrajectory none = reduction_trajectory(empty, 5, 2, op, 1);
  CHECK(none.original_scale == 0);
  CHECK(none.steps.empty());
  CHECK(none.remainder == 0);

  CHECK_THROWS_AS(reduction_trajectory(inst, 0, 1, op, 1), std::invalid_argument);
  CHECK_THROWS_AS(reduction_trajectory(inst, 1, 0, op, 1), std::invalid_argument);
}

TEST_CASE("profit distributions normalize against the mean") {
  std::vector<Money> two = {90, 110};
  DistributionSummary d = profit_distribution(two);
  REQUIRE(d.points.size() == 2);
  CHECK(d.points[0] == doctest::Approx(-0.10));
  CHECK(d.points[1] == doctest::Approx(0.10));
  CHECK(d.q1 == doctest::Approx(-0.05));
  CHECK(d.median == doctest::Approx(0.0));
  CHECK(d.q3 == doctest::Approx(0.05));

  std::vector<Money> flat = {5, 5, 5};
  DistributionSummary f = profit_distribution(flat);
  for (double p : f.points) CHECK(p == 0.0);
  CHECK(f.median == 0.0);

  std::vector<Money> zero = {0, 0};
  CHECK_THROWS_AS(profit_distribution(zero), std::domain_error);
  CHECK_THROWS_AS(profit_distribution({}), std::invalid_argument);
}

TEST_CASE("quartiles interpolate linearly") {
  CHECK(quartiles({1, 2, 3, 4, 5}) == std::array<double, 3>{2.0, 3.0, 4.0});
  CHECK(quartiles({3, 1, 2}) == std::array<double, 3>{1.5, 2.0, 2.5});
  auto q = quartiles({2, 7, 1, 8, 2, 8});
  CHECK(q[0] == doctest::Approx(2.0));
  CHECK(q[1] == doctest::Approx(4.5));
  CHECK(q[2] == doctest::Approx(7.75));
  CHECK(quartiles({4}) == std::array<double, 3>{4.0, 4.0, 4.0});
  CHECK_THROWS_AS(quartiles({}), std::invalid_argument);
}

TEST_CASE("best known matches the oracle on an enumerable instance") {
  Instance inst = example_instance();
  BestKnownBudget budget;
  budget.random_candidates = 300;
  budget.multilevel_runs = 3;
  budget.ml.target_scale = 3;
  budget.ml.runs_per_level = 2;
  budget.ml.op.iteration_budget = 2000;

  Solution bk = best_known(inst, budget, 17);
  CHECK(solution_profit(inst, bk) == brute_force_oracle(inst).optimum_profit);
  CHECK(best_known(inst, budget, 17) == bk);

  // Growing the budget never loses ground: the smaller run is a prefix.
  BestKnownBudget larger = budget;
  larger.random_candidates = 600;
  larger.multilevel_runs = 5;
  CHECK(solution_profit(inst, best_known(inst, larger, 17)) >= solution_profit(inst, bk));
}
