#pragma once

#include <span>
#include <utility>
#include <vector>

#include "nrp/model.hpp"

namespace nrp {

enum class BackboneKind { Exact, Approximate, Soft, Combined };

/// A partial assignment of polarities to customers: the pairs every solution
/// in some family agrees on. Fixing these pairs shrinks the instance without
/// losing the solutions the family represents.
class Backbone {
public:
  Backbone() = default;
  Backbone(std::vector<std::pair<Id, bool>> pairs, BackboneKind kind);

  BackboneKind kind() const { return kind_; }
  std::span<const std::pair<Id, bool>> pairs() const { return pairs_; }
  int size() const { return static_cast<int>(pairs_.size()); }
  bool empty() const { return pairs_.empty(); }
  std::optional<bool> polarity(Id customer) const;
  std::vector<Id> selected_ids() const;

  bool operator==(const Backbone& other) const = default;

private:
  std::vector<std::pair<Id, bool>> pairs_;  // sorted by id, unique
  BackboneKind kind_ = BackboneKind::Approximate;
};

/// Intersection of a non-empty family of solutions over one instance: the
/// pairs on which all of them agree.
Backbone approximate_backbone(std::span<const Solution> solutions);

/// Customers with an empty request row cost nothing, so fixing them selected
/// is always safe. Only meaningful on reduced instances.
Backbone soft_backbone(const Instance& inst);

struct ReducedInstance {
  Instance instance;                      // rows restricted to kept customers and requirements
  std::vector<Id> removed_customers;      // every customer the backbone fixed
  std::vector<Id> removed_requirements;   // union of rows of customers fixed selected
  Money fixed_cost = 0;                   // cost of the removed requirements
};

/// Applies a backbone to an instance: fixed customers leave, requirements
/// committed by customers fixed selected leave and their cost is charged
/// against the bound. Solving the result and re-adding the backbone solves
/// the original.
ReducedInstance reduce_instance(const Instance& inst, const Backbone& bb);

/// Union of several disjoint backbones (e.g. everything fixed across all
/// levels of a run). Contradictory pairs raise an integrity error.
Backbone combine_backbones(std::span<const Backbone> parts);

/// Fraction of backbone pairs whose polarity matches the reference solution.
/// Every fixed customer must exist in the reference; an empty backbone
/// agrees vacuously (returns 1).
double backbone_agreement(const Backbone& bb, const Solution& reference);

struct OracleReport {
  Money optimum_profit = 0;
  std::vector<Solution> optimal_solutions;  // all of them, lexicographic order
  Backbone exact_backbone;                  // intersection of optimal_solutions
};

/// Exhaustive enumeration of all optimal solutions. Exponential by nature;
/// refuses instances above customer_cap to keep runtimes sane.
OracleReport brute_force_oracle(const Instance& inst, int customer_cap = 20);

}  // namespace nrp
