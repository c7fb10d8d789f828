#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nrp {

using Id = std::int32_t;
/// Costs and profits are integers; 64 bits so sums never overflow.
using Money = std::int64_t;

struct Requirement {
  Id id = 0;
  Money cost = 0;
  bool operator==(const Requirement&) const = default;
};

struct Customer {
  Id id = 0;
  Money profit = 0;
  bool operator==(const Customer&) const = default;
};

/// Directed acyclic graph over requirement ids. An arc (p, c) means p is a
/// prerequisite of c: implementing c forces implementing p first.
class DependencyGraph {
public:
  DependencyGraph() = default;
  DependencyGraph(std::vector<Id> vertices, std::vector<std::pair<Id, Id>> arcs);

  const std::vector<Id>& vertices() const { return vertices_; }
  const std::vector<std::pair<Id, Id>>& arcs() const { return arcs_; }
  bool contains(Id r) const;

  /// All transitive prerequisites of r, r itself excluded, sorted by id.
  std::vector<Id> parents_closure(Id r) const;

private:
  std::vector<Id> vertices_;                    // sorted, unique
  std::vector<std::pair<Id, Id>> arcs_;         // (parent, child), sorted, unique
  std::vector<std::vector<int>> parents_of_;    // per vertex index: direct parent indices

  int index_of(Id r) const;
};

class Instance;

/// Release planning input in its full form: requirements with costs and a
/// prerequisite graph, customers with profits and the requirements they ask
/// for directly. Selecting a customer commits to their requests plus every
/// transitive prerequisite.
class DependentInstance {
public:
  DependentInstance(std::vector<Requirement> requirements, std::vector<Customer> customers,
                    DependencyGraph graph, std::vector<std::vector<Id>> direct_requests,
                    Money bound);

  std::span<const Requirement> requirements() const { return requirements_; }
  std::span<const Customer> customers() const { return customers_; }
  const DependencyGraph& graph() const { return graph_; }
  /// Direct requests of the customer at the given index, sorted by id.
  std::span<const Id> direct_requests(int customer_index) const;
  Money bound() const { return bound_; }

  /// Requests of the given customer closed under prerequisites, sorted by id.
  std::vector<Id> total_request_set(Id customer) const;

  /// Equivalent prerequisite-free instance: every row is closed under the
  /// graph, after which the graph can be dropped.
  Instance to_simplified() const;

private:
  std::vector<Requirement> requirements_;   // sorted by id
  std::vector<Customer> customers_;         // sorted by id
  DependencyGraph graph_;
  std::vector<std::vector<Id>> direct_;     // parallel to customers_, each sorted
  Money bound_;

  int customer_index(Id c) const;
};

/// Prerequisite-free instance: a cost per requirement, a profit per customer,
/// a request row per customer, and a budget bound. This is the form every
/// algorithm in this project works on.
class Instance {
public:
  Instance() = default;
  Instance(std::vector<Customer> customers, std::vector<Requirement> requirements,
           std::vector<std::vector<Id>> rows, Money bound, std::string note = "");

  int customer_count() const { return static_cast<int>(customers_.size()); }
  int requirement_count() const { return static_cast<int>(requirements_.size()); }
  std::span<const Customer> customers() const { return customers_; }
  std::span<const Requirement> requirements() const { return requirements_; }
  Money bound() const { return bound_; }
  /// Free-form provenance string (how the instance was produced).
  const std::string& note() const { return note_; }
  void set_note(std::string note) { note_ = std::move(note); }

  /// Requests of the customer at the given index, sorted by id.
  std::span<const Id> row(int customer_index) const;
  /// Indices of the customers requesting the requirement at the given index.
  std::span<const int> requesters(int requirement_index) const;

  /// Index lookups return std::nullopt for unknown ids.
  std::optional<int> customer_index(Id c) const;
  std::optional<int> requirement_index(Id r) const;

  const Customer& customer(int index) const { return customers_[index]; }
  const Requirement& requirement(int index) const { return requirements_[index]; }

  Money total_cost() const;
  Money total_profit() const;
  /// True when every customer requests at least one requirement. Freshly
  /// generated or mined instances always do; reduced ones may not.
  bool all_rows_nonempty() const;

  /// Structural equality. The note participates so that file round trips
  /// can be checked for identity.
  bool operator==(const Instance& other) const = default;

private:
  std::vector<Customer> customers_;          // sorted by id
  std::vector<Requirement> requirements_;    // sorted by id
  std::vector<std::vector<Id>> rows_;        // parallel to customers_, each sorted
  std::vector<std::vector<int>> requesters_; // parallel to requirements_
  Money bound_ = 0;
  std::string note_;
};

/// Total assignment of a polarity (selected or not) to every customer of one
/// instance. Stored as sorted customer ids plus a parallel bit per id, so two
/// solutions over the same instance compare cheaply.
class Solution {
public:
  Solution() = default;
  Solution(std::vector<Id> customer_ids, std::vector<std::uint8_t> selected);

  static Solution none_selected(const Instance& inst);
  static Solution from_pairs(std::vector<std::pair<Id, bool>> pairs);

  int size() const { return static_cast<int>(ids_.size()); }
  std::span<const Id> customer_ids() const { return ids_; }
  bool selected_at(int index) const { return selected_[index] != 0; }
  void set_at(int index, bool on) { selected_[index] = on ? 1 : 0; }
  /// Polarity of the given customer; throws std::invalid_argument if the id
  /// is not part of this solution.
  bool selected(Id customer) const;
  std::optional<bool> polarity(Id customer) const;

  std::vector<std::pair<Id, bool>> pairs() const;
  std::vector<Id> selected_ids() const;
  int selected_count() const;

  /// True when the solution assigns exactly the customers of inst.
  bool covers(const Instance& inst) const;

  bool operator==(const Solution& other) const = default;

private:
  std::vector<Id> ids_;                 // sorted, unique
  std::vector<std::uint8_t> selected_;  // parallel to ids_
};

/// Cost of the union of all rows of selected customers. The solution must
/// cover the instance exactly.
Money solution_cost(const Instance& inst, const Solution& x);
/// Sum of profits of selected customers.
Money solution_profit(const Instance& inst, const Solution& x);
/// True when solution_cost(inst, x) <= inst.bound().
bool is_feasible(const Instance& inst, const Solution& x);

}  // namespace nrp
