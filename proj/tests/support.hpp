#pragma once

// Shared fixtures for the test suite. The centerpiece is a small release
// planning instance with 8 requirements, 7 customers, and 4 prerequisite
// arcs whose optimum is known exactly; many tests pin values against it.

#include <initializer_list>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "nrp/model.hpp"
#include "nrp/rng.hpp"

#ifndef NRP_DATA_DIR
#define NRP_DATA_DIR "data"
#endif

namespace nrp::testing {

inline std::string data_dir() { return NRP_DATA_DIR; }

/// Copies a span into a vector so doctest can compare it directly.
template <typename T>
std::vector<T> as_vec(std::span<const T> s) {
  return std::vector<T>(s.begin(), s.end());
}

/// Requirement costs 2 5 4 3 8 1 5 2, customer profits 7 2 6 5 4 3 1,
/// prerequisite arcs 3->4->5 and 2->6, 2->7, budget bound 26.
inline DependentInstance example_dependent() {
  std::vector<Requirement> reqs = {{1, 2}, {2, 5}, {3, 4}, {4, 3},
                                   {5, 8}, {6, 1}, {7, 5}, {8, 2}};
  std::vector<Customer> cs = {{1, 7}, {2, 2}, {3, 6}, {4, 5}, {5, 4}, {6, 3}, {7, 1}};
  DependencyGraph g({1, 2, 3, 4, 5, 6, 7, 8}, {{3, 4}, {4, 5}, {2, 6}, {2, 7}});
  std::vector<std::vector<Id>> direct = {{1, 6}, {2}, {4, 7}, {1, 5, 7}, {5}, {4, 8}, {3}};
  return DependentInstance(std::move(reqs), std::move(cs), std::move(g),
                           std::move(direct), 26);
}

inline Instance example_instance() { return example_dependent().to_simplified(); }

/// Solution over inst selecting exactly the listed customers.
inline Solution pick(const Instance& inst, std::initializer_list<Id> chosen) {
  std::set<Id> on(chosen);
  Solution x = Solution::none_selected(inst);
  for (int i = 0; i < inst.customer_count(); ++i)
    if (on.count(inst.customer(i).id)) x.set_at(i, true);
  return x;
}

/// Small random prerequisite-free instance for property tests. Ids start
/// at 1, every customer requests at least one requirement, costs and
/// profits sit in [1, 10], and the bound is about half the total cost.
inline Instance random_instance(Rng& rng, int customers, int requirements) {
  std::vector<Requirement> reqs;
  Money total = 0;
  for (int j = 1; j <= requirements; ++j) {
    Money c = rng.range(1, 10);
    total += c;
    reqs.push_back({j, c});
  }
  std::vector<Customer> cs;
  std::vector<std::vector<Id>> rows;
  for (int i = 1; i <= customers; ++i) {
    cs.push_back({i, rng.range(1, 10)});
    int k = static_cast<int>(rng.range(1, std::min(requirements, 4)));
    std::set<Id> row;
    while (static_cast<int>(row.size()) < k)
      row.insert(static_cast<Id>(rng.range(1, requirements)));
    rows.emplace_back(row.begin(), row.end());
  }
  Money bound = std::max<Money>(1, total / 2);
  return Instance(std::move(cs), std::move(reqs), std::move(rows), bound);
}

}  // namespace nrp::testing
