#include "nrp/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "nrp/errors.hpp"
#include "nrp/instances.hpp"
#include "nrp/rng.hpp"
#include "nrp/serialize.hpp"

namespace nrp {
namespace {

std::string format2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string format_seconds(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

const char* to_string(Algo algo) {
  switch (algo) {
    case Algo::RandomSearch: return "rs";
    case Algo::ClimbFirst: return "ffhc";
    case Algo::ClimbSampled: return "shc";
    case Algo::Anneal: return "sa";
    case Algo::MultiStartAnneal: return "mssa";
    case Algo::Genetic: return "ga";
    case Algo::Multilevel: return "bma";
  }
  return "?";
}

Algo algo_from_string(const std::string& name) {
  if (name == "rs") return Algo::RandomSearch;
  if (name == "ffhc") return Algo::ClimbFirst;
  if (name == "shc") return Algo::ClimbSampled;
  if (name == "sa") return Algo::Anneal;
  if (name == "mssa") return Algo::MultiStartAnneal;
  if (name == "ga") return Algo::Genetic;
  if (name == "bma") return Algo::Multilevel;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

AlgorithmRun run_algorithm(const Instance& inst, const AlgorithmSpec& spec, std::uint64_t seed) {
  AlgorithmRun out;
  switch (spec.algo) {
    case Algo::RandomSearch:
    case Algo::ClimbFirst:
    case Algo::ClimbSampled:
    case Algo::Anneal: {
      SearchOperator op = spec.op;
      switch (spec.algo) {
        case Algo::RandomSearch: op.kind = OperatorKind::RandomSearch; break;
        case Algo::ClimbFirst: op.kind = OperatorKind::ClimbFirst; break;
        case Algo::ClimbSampled: op.kind = OperatorKind::ClimbSampled; break;
        default: op.kind = OperatorKind::Anneal; break;
      }
      out.run = run_search(inst, op, seed);
      break;
    }
    case Algo::MultiStartAnneal: {
      SearchOperator op = spec.op;
      op.kind = OperatorKind::Anneal;
      out.run = multi_start_anneal(inst, spec.restarts, op, seed);
      break;
    }
    case Algo::Genetic: {
      GaParams ga = spec.ga;
      ga.rng_seed = seed;
      out.run = genetic_search(inst, ga);
      break;
    }
    case Algo::Multilevel: {
      MultilevelParams ml = spec.ml;
      ml.op = spec.op;
      ml.op.kind = OperatorKind::Anneal;
      ml.rng_seed = seed;
      MultilevelResult res = multilevel_solve(inst, ml);
      out.run.solution = res.solution;
      out.run.profit = res.profit;
      out.run.cost = res.cost;
      out.run.seconds = res.seconds;
      out.run.evaluations = res.evaluations;
      out.multilevel = std::move(res);
      break;
    }
  }
  return out;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open experiment config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError("config " + path.string() + ": " + e.what());
  }
  const std::filesystem::path base = path.parent_path();
  auto resolve = [&base](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };

  ExperimentSpec spec;
  try {
    spec.repetitions = j.value("repetitions", 10);
    spec.base_seed = j.value("seed", 0ULL);
    if (j.contains("output")) spec.output_dir = resolve(j.at("output").get<std::string>());

    for (const auto& ij : j.at("instances")) {
      InstanceJob job;
      if (ij.contains("path")) {
        auto fp = resolve(ij.at("path").get<std::string>());
        job.instance = read_instance(fp);
        job.label = ij.value("name", fp.stem().string());
      } else if (ij.contains("preset")) {
        ClassicGenSpec gen = load_gen_spec(resolve(ij.at("preset").get<std::string>()));
        if (ij.contains("ratio")) gen.cost_ratio = ij.at("ratio").get<double>();
        if (ij.contains("seed")) gen.rng_seed = ij.at("seed").get<std::uint64_t>();
        job.instance = generate_classic(gen);
        job.label = ij.value("name", instance_label(gen));
      } else {
        throw ModelError("config " + path.string() +
                         ": instance entries need a \"path\" or a \"preset\"");
      }
      spec.instances.push_back(std::move(job));
    }

    for (const auto& aj : j.at("algorithms")) {
      AlgorithmSpec alg;
      alg.algo = algo_from_string(aj.at("algo").get<std::string>());
      alg.label = aj.value("label", std::string(to_string(alg.algo)));
      alg.op.iteration_budget = aj.value("budget", alg.op.iteration_budget);
      alg.op.sample_count = aj.value("sample_count", alg.op.sample_count);
      alg.op.start_temperature = aj.value("start_temperature", alg.op.start_temperature);
      alg.op.cooling_ratio = aj.value("cooling_ratio", alg.op.cooling_ratio);
      alg.restarts = aj.value("restarts", alg.restarts);
      alg.ga.population_size = aj.value("population", alg.ga.population_size);
      alg.ga.elitism_ratio = aj.value("elitism", alg.ga.elitism_ratio);
      alg.ga.crossover_ratio = aj.value("crossover", alg.ga.crossover_ratio);
      alg.ga.mutation_ratio = aj.value("mutation", alg.ga.mutation_ratio);
      alg.ga.max_generations = aj.value("generations", alg.ga.max_generations);
      alg.ml.max_levels = aj.value("max_levels", alg.ml.max_levels);
      alg.ml.target_scale = aj.value("target_scale", alg.ml.target_scale);
      alg.ml.runs_per_level = aj.value("runs_per_level", alg.ml.runs_per_level);
      spec.algorithms.push_back(std::move(alg));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ModelError("config " + path.string() + ": " + e.what());
  }
  if (spec.repetitions < 1) throw ModelError("config: repetitions must be >= 1");
  if (spec.instances.empty() || spec.algorithms.empty())
    throw ModelError("config: need at least one instance and one algorithm");
  return spec;
}

std::vector<StatRow> run_experiment(const ExperimentSpec& spec) {
  if (spec.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  std::ofstream raw;
  if (!spec.output_dir.empty()) {
    std::filesystem::create_directories(spec.output_dir);
    raw.open(spec.output_dir / "runs.jsonl", std::ios::binary);
    if (!raw) throw ModelError("cannot open runs.jsonl under " + spec.output_dir.string());
  }

  std::vector<StatRow> rows;
  for (std::size_t ii = 0; ii < spec.instances.size(); ++ii) {
    const InstanceJob& job = spec.instances[ii];
    std::vector<double> averages(spec.algorithms.size(), 0.0);
    std::size_t first_row = rows.size();
    for (std::size_t ai = 0; ai < spec.algorithms.size(); ++ai) {
      const AlgorithmSpec& alg = spec.algorithms[ai];
      StatRow row;
      row.instance = job.label;
      row.bound = job.instance.bound();
      row.algorithm = alg.label;
      double time_sum = 0.0;
      double profit_sum = 0.0;
      std::uint64_t group = derive_seed(spec.base_seed, std::uint64_t(SeedTag::Repetition), ii, ai);
      for (int rep = 0; rep < spec.repetitions; ++rep) {
        std::uint64_t seed = derive_seed(group, rep);
        AlgorithmRun result;
        try {
          result = run_algorithm(job.instance, alg, seed);
        } catch (const IntegrityError& e) {
          throw IntegrityError("instance " + job.label + ", algorithm " + alg.label + ", seed " +
                               std::to_string(seed) + ": " + e.what());
        } catch (const std::exception& e) {
          throw ModelError("instance " + job.label + ", algorithm " + alg.label + ", seed " +
                           std::to_string(seed) + ": " + e.what());
        }
        // Reported numbers always come from the stored solution itself.
        Money profit = solution_profit(job.instance, result.run.solution);
        Money cost = solution_cost(job.instance, result.run.solution);
        if (profit != result.run.profit || cost != result.run.cost)
          throw IntegrityError("instance " + job.label + ", algorithm " + alg.label +
                               ": run result disagrees with its own solution");
        if (cost > job.instance.bound())
          throw IntegrityError("instance " + job.label + ", algorithm " + alg.label +
                               ": infeasible solution reported");
        row.run_profits.push_back(profit);
        profit_sum += static_cast<double>(profit);
        time_sum += result.run.seconds;
        row.best_profit = std::max(row.best_profit, profit);
        if (raw.is_open()) {
          Json line;
          line["instance"] = job.label;
          line["algorithm"] = alg.label;
          line["repetition"] = rep;
          line["seed"] = seed;
          line["profit"] = profit;
          line["cost"] = cost;
          line["seconds"] = result.run.seconds;
          line["evaluations"] = result.run.evaluations;
          line["solution"] = solution_to_json(result.run.solution);
          if (result.multilevel) {
            Json levels = Json::array();
            for (const LevelTrace& tr : result.multilevel->levels)
              levels.push_back(level_trace_to_json(tr));
            line["trace"] = std::move(levels);
            line["effective_levels"] = result.multilevel->effective_levels;
            line["fixed"] = result.multilevel->combined.size();
          }
          raw << line.dump() << '\n';
        }
      }
      row.avg_profit = profit_sum / spec.repetitions;
      row.avg_seconds = time_sum / spec.repetitions;
      averages[ai] = row.avg_profit;
      rows.push_back(std::move(row));
    }
    for (std::size_t ai = 0; ai < spec.algorithms.size(); ++ai) {
      StatRow& row = rows[first_row + ai];
      for (std::size_t bi = 0; bi < spec.algorithms.size(); ++bi) {
        if (bi == ai) continue;
        double pct = averages[bi] == 0.0
                         ? 0.0
                         : (averages[ai] - averages[bi]) / averages[bi] * 100.0;
        row.advantage.emplace_back(spec.algorithms[bi].label, pct);
      }
    }
  }

  if (!spec.output_dir.empty()) {
    std::ofstream csv(spec.output_dir / "stats.csv", std::ios::binary);
    if (!csv) throw ModelError("cannot open stats.csv under " + spec.output_dir.string());
    write_stat_csv(rows, csv);
  }
  return rows;
}

void write_stat_csv(std::span<const StatRow> rows, std::ostream& out) {
  // Column set = labels in first-appearance order, one vs_ column per label.
  std::vector<std::string> labels;
  for (const StatRow& row : rows)
    if (std::find(labels.begin(), labels.end(), row.algorithm) == labels.end())
      labels.push_back(row.algorithm);

  out << "instance,bound,algorithm,best_profit,avg_profit,avg_time_s,run_profits";
  for (const auto& l : labels) out << ",vs_" << l;
  out << '\n';
  for (const StatRow& row : rows) {
    out << row.instance << ',' << row.bound << ',' << row.algorithm << ',' << row.best_profit
        << ',' << format2(row.avg_profit) << ',' << format_seconds(row.avg_seconds) << ',';
    for (std::size_t i = 0; i < row.run_profits.size(); ++i)
      out << (i ? ";" : "") << row.run_profits[i];
    for (const auto& l : labels) {
      out << ',';
      if (l == row.algorithm) continue;
      auto it = std::find_if(row.advantage.begin(), row.advantage.end(),
                             [&](const auto& kv) { return kv.first == l; });
      if (it != row.advantage.end()) out << format2(it->second);
    }
    out << '\n';
  }
}

std::vector<LandscapePoint> landscape_scan(const Instance& inst, const SearchOperator& op,
                                           int runs, const Solution& reference,
                                           std::uint64_t seed) {
  if (runs < 1) throw std::invalid_argument("landscape scan needs at least one run");
  if (inst.customer_count() < 1)
    throw std::invalid_argument("landscape scan needs a non-empty instance");
  if (!reference.covers(inst))
    throw std::invalid_argument("reference solution does not match the instance");
  if (!is_feasible(inst, reference))
    throw std::invalid_argument("reference solution is infeasible");
  Money ref_profit = solution_profit(inst, reference);
  if (ref_profit == 0)
    throw std::domain_error("reference profit is zero; relative profit gap undefined");

  int n = inst.customer_count();
  std::vector<LandscapePoint> points;
  points.reserve(runs);
  for (int r = 0; r < runs; ++r) {
    RunResult run =
        run_search(inst, op, derive_seed(seed, std::uint64_t(SeedTag::Landscape), r));
    int agree = 0;
    for (int i = 0; i < n; ++i)
      agree += run.solution.selected_at(i) == reference.selected_at(i);
    LandscapePoint pt;
    pt.n_dist = static_cast<double>(n - agree) / static_cast<double>(n);
    pt.n_diff = static_cast<double>(ref_profit - run.profit) / static_cast<double>(ref_profit);
    points.push_back(pt);
  }
  return points;
}

ReductionTrajectory reduction_trajectory(const Instance& inst, int pairs, int runs_per_level,
                                         const SearchOperator& op, std::uint64_t seed) {
  if (pairs < 1) throw std::invalid_argument("trajectory needs at least one reduction pair");
  if (runs_per_level < 1) throw std::invalid_argument("runs per level must be >= 1");

  ReductionTrajectory out;
  out.original_scale = inst.customer_count();
  Instance cur = inst;
  for (int k = 1; k <= pairs && cur.customer_count() > 0; ++k) {
    std::vector<Solution> optima;
    optima.reserve(runs_per_level);
    for (int j = 0; j < runs_per_level; ++j)
      optima.push_back(
          run_search(cur, op, derive_seed(seed, std::uint64_t(SeedTag::Trajectory), k, j))
              .solution);
    Backbone approx = approximate_backbone(optima);
    if (approx.empty()) break;
    cur = reduce_instance(cur, approx).instance;
    TrajectoryStep step;
    step.level = k;
    step.after_approx = cur.customer_count();
    out.fixed_by_approx += approx.size();
    Backbone soft = soft_backbone(cur);
    cur = reduce_instance(cur, soft).instance;
    step.after_soft = cur.customer_count();
    out.fixed_by_soft += soft.size();
    out.steps.push_back(step);
  }
  out.remainder = cur.customer_count();
  return out;
}

DistributionSummary profit_distribution(std::span<const Money> profits) {
  if (profits.empty()) throw std::invalid_argument("profit distribution needs at least one run");
  double mean = 0.0;
  for (Money p : profits) mean += static_cast<double>(p);
  mean /= static_cast<double>(profits.size());
  if (mean == 0.0) throw std::domain_error("zero mean profit; normalization undefined");

  DistributionSummary out;
  out.points.reserve(profits.size());
  for (Money p : profits) out.points.push_back((static_cast<double>(p) - mean) / mean);
  auto q = quartiles(out.points);
  out.q1 = q[0];
  out.median = q[1];
  out.q3 = q[2];
  return out;
}

std::array<double, 3> quartiles(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("quartiles of an empty sample are undefined");
  std::sort(values.begin(), values.end());
  auto at = [&](double q) {
    double h = q * (static_cast<double>(values.size()) - 1.0);
    std::size_t lo = static_cast<std::size_t>(std::floor(h));
    std::size_t hi = std::min(lo + 1, values.size() - 1);
    double frac = h - std::floor(h);
    return values[lo] + (values[hi] - values[lo]) * frac;
  };
  return {at(0.25), at(0.5), at(0.75)};
}

Solution best_known(const Instance& inst, const BestKnownBudget& budget, std::uint64_t seed) {
  if (budget.random_candidates < 0 || budget.multilevel_runs < 0)
    throw std::invalid_argument("best-known budgets must be >= 0");

  Solution best = Solution::none_selected(inst);
  Money best_profit = 0;
  if (budget.random_candidates > 0) {
    SearchOperator rs;
    rs.kind = OperatorKind::RandomSearch;
    rs.iteration_budget = budget.random_candidates;
    RunResult run =
        run_search(inst, rs, derive_seed(seed, std::uint64_t(SeedTag::BestKnown), 0));
    if (run.profit > best_profit) {
      best_profit = run.profit;
      best = run.solution;
    }
  }
  for (int r = 0; r < budget.multilevel_runs; ++r) {
    MultilevelParams ml = budget.ml;
    ml.rng_seed = derive_seed(seed, std::uint64_t(SeedTag::BestKnown), 1, r);
    MultilevelResult res = multilevel_solve(inst, ml);
    if (res.profit > best_profit) {
      best_profit = res.profit;
      best = res.solution;
    }
  }
  return best;
}

}  // namespace nrp
