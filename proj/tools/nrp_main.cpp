#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nrp/bench.hpp"
#include "nrp/backbone.hpp"
#include "nrp/errors.hpp"
#include "nrp/instances.hpp"
#include "nrp/serialize.hpp"

namespace {

using namespace nrp;

struct OperatorFlags {
  std::string algo = "sa";
  std::int64_t budget = 1'000'000;
  int sample_count = 10;
  double start_temperature = 100.0;
  double cooling_ratio = 1e-7;
};

void add_operator_flags(CLI::App* cmd, OperatorFlags& f, bool with_algo) {
  if (with_algo)
    cmd->add_option("--algo", f.algo, "search operator: rs, ffhc, shc, sa")
        ->default_val(f.algo);
  cmd->add_option("--budget", f.budget, "iteration budget")->default_val(f.budget);
  cmd->add_option("--sample-count", f.sample_count, "shc: neighbors sampled per step")
      ->default_val(f.sample_count);
  cmd->add_option("--start-temperature", f.start_temperature, "sa: starting temperature")
      ->default_val(f.start_temperature);
  cmd->add_option("--cooling-ratio", f.cooling_ratio, "sa: cooling ratio")
      ->default_val(f.cooling_ratio);
}

SearchOperator to_operator(const OperatorFlags& f) {
  SearchOperator op;
  op.kind = operator_kind_from_string(f.algo);
  op.iteration_budget = f.budget;
  op.sample_count = f.sample_count;
  op.start_temperature = f.start_temperature;
  op.cooling_ratio = f.cooling_ratio;
  return op;
}

Solution load_reference(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open reference solution " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError("reference " + path + ": " + e.what());
  }
  return solution_from_json(j.contains("solution") ? j.at("solution") : j);
}

int cmd_gen(const std::string& preset, double ratio, std::uint64_t seed,
            const std::string& out_path) {
  ClassicGenSpec spec = load_gen_spec(preset);
  spec.cost_ratio = ratio;
  spec.rng_seed = seed;
  Instance inst = generate_classic(spec);
  write_instance(inst, out_path);
  std::printf("%s: %d customers, %d requirements, bound %lld -> %s\n",
              instance_label(spec).c_str(), inst.customer_count(), inst.requirement_count(),
              static_cast<long long>(inst.bound()), out_path.c_str());
  return 0;
}

int cmd_mine(const std::string& dump_path, const MinerSpec& spec, const std::string& out_path) {
  auto dump = read_bug_dump(dump_path);
  Instance inst = mine_instance(std::move(dump), spec);
  write_instance(inst, out_path);
  std::printf("mined %d customers, %d requirements, bound %lld -> %s\n", inst.customer_count(),
              inst.requirement_count(), static_cast<long long>(inst.bound()), out_path.c_str());
  return 0;
}

int cmd_solve(const std::string& instance_path, const std::string& algo_name,
              const OperatorFlags& opf, int restarts, const GaParams& ga_in,
              const MultilevelParams& ml_in, std::uint64_t seed, bool as_json,
              const std::string& trace_path, const std::string& solution_path) {
  Instance inst = read_instance(instance_path);
  AlgorithmSpec spec;
  spec.algo = algo_from_string(algo_name);
  spec.label = algo_name;
  spec.op = to_operator(opf);
  spec.restarts = restarts;
  spec.ga = ga_in;
  spec.ml = ml_in;
  AlgorithmRun result = run_algorithm(inst, spec, seed);

  if (!trace_path.empty()) {
    if (!result.multilevel) throw ModelError("--trace is only meaningful with --algo bma");
    std::ofstream out(trace_path, std::ios::binary);
    if (!out) throw ModelError("cannot open trace file " + trace_path);
    write_trace(*result.multilevel, out);
  }
  Json j;
  j["instance"] = instance_path;
  j["algorithm"] = algo_name;
  j["seed"] = seed;
  j["profit"] = result.run.profit;
  j["cost"] = result.run.cost;
  j["bound"] = inst.bound();
  j["feasible"] = result.run.cost <= inst.bound();
  j["seconds"] = result.run.seconds;
  j["evaluations"] = result.run.evaluations;
  j["selected"] = result.run.solution.selected_ids();
  j["solution"] = solution_to_json(result.run.solution);
  if (result.multilevel) {
    j["effective_levels"] = result.multilevel->effective_levels;
    j["fixed_customers"] = result.multilevel->combined.size();
  }
  if (!solution_path.empty()) {
    std::ofstream out(solution_path, std::ios::binary);
    if (!out) throw ModelError("cannot open solution file " + solution_path);
    out << j.dump(2) << '\n';
  }
  if (as_json) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::printf("%s on %s: profit %lld, cost %lld / bound %lld, %.3fs, %lld evaluations\n",
                algo_name.c_str(), instance_path.c_str(),
                static_cast<long long>(result.run.profit),
                static_cast<long long>(result.run.cost), static_cast<long long>(inst.bound()),
                result.run.seconds, static_cast<long long>(result.run.evaluations));
    if (result.multilevel)
      std::printf("  levels with progress: %d, customers fixed by backbones: %d\n",
                  result.multilevel->effective_levels, result.multilevel->combined.size());
  }
  return 0;
}

int cmd_bench(const std::string& config_path) {
  ExperimentSpec spec = load_experiment_spec(config_path);
  auto rows = run_experiment(spec);
  write_stat_csv(rows, std::cout);
  if (!spec.output_dir.empty())
    std::fprintf(stderr, "wrote %s and %s\n", (spec.output_dir / "stats.csv").c_str(),
                 (spec.output_dir / "runs.jsonl").c_str());
  return 0;
}

int cmd_landscape(const std::string& instance_path, const OperatorFlags& opf, int runs,
                  std::uint64_t seed, const std::string& reference_path,
                  std::int64_t bk_candidates, int bk_runs, const std::string& out_path) {
  Instance inst = read_instance(instance_path);
  Solution reference;
  if (!reference_path.empty()) {
    reference = load_reference(reference_path);
  } else {
    BestKnownBudget budget;
    budget.random_candidates = bk_candidates;
    budget.multilevel_runs = bk_runs;
    reference = best_known(inst, budget, seed);
  }
  auto points = landscape_scan(inst, to_operator(opf), runs, reference, seed);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) throw ModelError("cannot open " + out_path);
    out = &file;
  }
  *out << "n_dist,n_diff\n";
  char buf[64];
  for (const auto& pt : points) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f\n", pt.n_dist, pt.n_diff);
    *out << buf;
  }
  return 0;
}

int cmd_trajectory(const std::string& instance_path, const OperatorFlags& opf, int pairs,
                   int runs_per_level, std::uint64_t seed) {
  Instance inst = read_instance(instance_path);
  auto tr = reduction_trajectory(inst, pairs, runs_per_level, to_operator(opf), seed);
  std::printf("level,after_approx,after_soft\n");
  for (const auto& step : tr.steps)
    std::printf("%d,%d,%d\n", step.level, step.after_approx, step.after_soft);
  double scale = tr.original_scale > 0 ? 100.0 / tr.original_scale : 0.0;
  std::printf("# scale %d: %d fixed by agreement (%.1f%%), %d for free (%.1f%%), %d left\n",
              tr.original_scale, tr.fixed_by_approx, tr.fixed_by_approx * scale, tr.fixed_by_soft,
              tr.fixed_by_soft * scale, tr.remainder);
  return 0;
}

int cmd_oracle(const std::string& instance_path, int cap, bool as_json) {
  Instance inst = read_instance(instance_path);
  OracleReport report = brute_force_oracle(inst, cap);
  if (as_json) {
    Json j;
    j["optimum_profit"] = report.optimum_profit;
    j["optimal_solutions"] = Json::array();
    for (const auto& s : report.optimal_solutions)
      j["optimal_solutions"].push_back(solution_to_json(s));
    j["backbone"] = backbone_to_json(report.exact_backbone);
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::printf("optimum profit %lld, %zu optimal solution(s)\n",
              static_cast<long long>(report.optimum_profit), report.optimal_solutions.size());
  std::printf("backbone fixes %d of %d customers:", report.exact_backbone.size(),
              inst.customer_count());
  for (const auto& [id, on] : report.exact_backbone.pairs())
    std::printf(" %d=%d", id, on ? 1 : 0);
  std::printf("\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"release planning toolkit: instance generation, mining, solving, experiments"};
  app.require_subcommand(1);

  // gen
  std::string preset, out_path = "instance.nrp";
  double ratio = 0.5;
  std::uint64_t seed = 0;
  auto* gen = app.add_subcommand("gen", "generate a classic layered instance");
  gen->add_option("--preset", preset, "preset JSON file")->required();
  gen->add_option("--ratio", ratio, "bound as a fraction of the total cost")->default_val(0.5);
  gen->add_option("--seed", seed, "generator seed")->default_val(0);
  gen->add_option("-o,--out", out_path, "output instance file")->default_val(out_path);

  // mine
  std::string dump_path, mine_out = "mined.nrp";
  MinerSpec miner;
  auto* mine = app.add_subcommand("mine", "build an instance from a bug tracker dump");
  mine->add_option("--dump", dump_path, "TSV dump file")->required();
  mine->add_option("--window-size", miner.window_size, "reports per window")
      ->default_val(miner.window_size);
  mine->add_option("--window-start", miner.window_start, "first report index")
      ->default_val(miner.window_start);
  mine->add_option("--min-comments", miner.min_comments, "min comments per kept user")
      ->default_val(miner.min_comments);
  mine->add_option("--max-comments", miner.max_comments, "max comments per kept user");
  mine->add_option("--min-requests", miner.min_requests, "min requests per kept customer")
      ->default_val(miner.min_requests);
  mine->add_option("--max-requests", miner.max_requests, "max requests per kept customer");
  mine->add_option("--ratio", miner.cost_ratio, "bound as a fraction of the total cost")
      ->default_val(miner.cost_ratio);
  mine->add_option("-o,--out", mine_out, "output instance file")->default_val(mine_out);

  // solve
  std::string solve_instance, solve_algo = "sa", trace_path, solution_path;
  OperatorFlags solve_op;
  int restarts = 30;
  GaParams ga;
  MultilevelParams ml;
  bool solve_json = false;
  auto* solve = app.add_subcommand("solve", "run one algorithm on one instance");
  solve->add_option("instance", solve_instance, "instance file")->required();
  solve->add_option("--algo", solve_algo, "rs, ffhc, shc, sa, mssa, ga, or bma")
      ->default_val(solve_algo);
  add_operator_flags(solve, solve_op, false);
  solve->add_option("--seed", seed, "run seed")->default_val(0);
  solve->add_option("--restarts", restarts, "mssa: independent restarts")->default_val(restarts);
  solve->add_option("--population", ga.population_size, "ga: population size")
      ->default_val(ga.population_size);
  solve->add_option("--elitism", ga.elitism_ratio, "ga: surviving fraction")
      ->default_val(ga.elitism_ratio);
  solve->add_option("--crossover", ga.crossover_ratio, "ga: crossover probability")
      ->default_val(ga.crossover_ratio);
  solve->add_option("--mutation", ga.mutation_ratio, "ga: per-gene mutation probability")
      ->default_val(ga.mutation_ratio);
  solve->add_option("--generations", ga.max_generations, "ga: generation cap")
      ->default_val(ga.max_generations);
  solve->add_option("--max-levels", ml.max_levels, "bma: reduction level cap")
      ->default_val(ml.max_levels);
  solve->add_option("--target-scale", ml.target_scale, "bma: stop reducing at this many customers")
      ->default_val(ml.target_scale);
  solve->add_option("--runs-per-level", ml.runs_per_level, "bma: local optima per level")
      ->default_val(ml.runs_per_level);
  solve->add_flag("--json", solve_json, "print the full result as JSON");
  solve->add_option("--trace", trace_path, "bma: write the level trace (JSON lines)");
  solve->add_option("--solution-out", solution_path, "write the result JSON to a file");

  // bench
  std::string config_path;
  auto* bench = app.add_subcommand("bench", "run an experiment config");
  bench->add_option("config", config_path, "experiment JSON file")->required();

  // landscape
  std::string land_instance, reference_path, land_out;
  OperatorFlags land_op;
  int land_runs = 100;
  std::int64_t bk_candidates = 1000;
  int bk_runs = 20;
  auto* land = app.add_subcommand("landscape", "local optima vs a reference solution");
  land->add_option("instance", land_instance, "instance file")->required();
  add_operator_flags(land, land_op, true);
  land->add_option("--runs", land_runs, "points to collect")->default_val(land_runs);
  land->add_option("--seed", seed, "scan seed")->default_val(0);
  land->add_option("--reference", reference_path, "solution JSON (default: computed best-known)");
  land->add_option("--bk-candidates", bk_candidates, "best-known: random candidates")
      ->default_val(bk_candidates);
  land->add_option("--bk-runs", bk_runs, "best-known: multilevel runs")->default_val(bk_runs);
  land->add_option("-o,--out", land_out, "write points CSV here instead of stdout");

  // trajectory
  std::string traj_instance;
  OperatorFlags traj_op;
  int pairs = 12, traj_runs = 5;
  auto* traj = app.add_subcommand("trajectory", "customer counts along repeated reductions");
  traj->add_option("instance", traj_instance, "instance file")->required();
  add_operator_flags(traj, traj_op, true);
  traj->add_option("--pairs", pairs, "reduction pairs to apply")->default_val(pairs);
  traj->add_option("--runs-per-level", traj_runs, "local optima per level")
      ->default_val(traj_runs);
  traj->add_option("--seed", seed, "trajectory seed")->default_val(0);

  // oracle
  std::string oracle_instance;
  int cap = 20;
  bool oracle_json = false;
  auto* oracle = app.add_subcommand("oracle", "enumerate all optima of a small instance");
  oracle->add_option("instance", oracle_instance, "instance file")->required();
  oracle->add_option("--cap", cap, "refuse instances with more customers than this")
      ->default_val(cap);
  oracle->add_flag("--json", oracle_json, "print the report as JSON");

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return cmd_gen(preset, ratio, seed, out_path);
    if (mine->parsed()) return cmd_mine(dump_path, miner, mine_out);
    if (solve->parsed())
      return cmd_solve(solve_instance, solve_algo, solve_op, restarts, ga, ml, seed, solve_json,
                       trace_path, solution_path);
    if (bench->parsed()) return cmd_bench(config_path);
    if (land->parsed())
      return cmd_landscape(land_instance, land_op, land_runs, seed, reference_path, bk_candidates,
                           bk_runs, land_out);
    if (traj->parsed()) return cmd_trajectory(traj_instance, traj_op, pairs, traj_runs, seed);
    if (oracle->parsed()) return cmd_oracle(oracle_instance, cap, oracle_json);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad flags are input errors
  } catch (const IntegrityError& e) {
    std::fprintf(stderr, "integrity error: %s\n", e.what());
    return 3;
  } catch (const ModelError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 3;
  }
  return 0;
}
