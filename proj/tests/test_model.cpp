#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "nrp/errors.hpp"
#include "nrp/model.hpp"
#include "support.hpp"

using namespace nrp;
using nrp::testing::example_dependent;
using nrp::testing::example_instance;
using nrp::testing::pick;

TEST_CASE("prerequisite closure walks arcs transitively") {
  DependencyGraph g({1, 2, 3, 4, 5, 6, 7, 8}, {{3, 4}, {4, 5}, {2, 6}, {2, 7}});
  CHECK(g.parents_closure(1).empty());
  CHECK(g.parents_closure(4) == std::vector<Id>{3});
  CHECK(g.parents_closure(5) == std::vector<Id>{3, 4});
  CHECK(g.parents_closure(6) == std::vector<Id>{2});
  CHECK(g.parents_closure(7) == std::vector<Id>{2});
  CHECK(g.parents_closure(99).empty());
  CHECK(g.contains(8));
  CHECK_FALSE(g.contains(9));
}

TEST_CASE("graph rejects cycles and unknown endpoints") {
  CHECK_THROWS_AS(DependencyGraph({1, 2, 3}, {{1, 2}, {2, 3}, {3, 1}}), ModelError);
  CHECK_THROWS_AS(DependencyGraph({1, 2}, {{2, 2}}), ModelError);
  CHECK_THROWS_AS(DependencyGraph({1, 2}, {{1, 5}}), ModelError);
  CHECK_THROWS_AS(DependencyGraph({1, 1, 2}, {}), ModelError);
  // Duplicate arcs are harmless and collapse to one.
  DependencyGraph g({1, 2}, {{1, 2}, {1, 2}});
  CHECK(g.arcs().size() == 1);
}

TEST_CASE("total request sets close direct requests under prerequisites") {
  DependentInstance dep = example_dependent();
  CHECK(dep.total_request_set(1) == std::vector<Id>{1, 2, 6});
  CHECK(dep.total_request_set(2) == std::vector<Id>{2});
  CHECK(dep.total_request_set(3) == std::vector<Id>{2, 3, 4, 7});
  CHECK(dep.total_request_set(4) == std::vector<Id>{1, 2, 3, 4, 5, 7});
  CHECK(dep.total_request_set(5) == std::vector<Id>{3, 4, 5});
  CHECK(dep.total_request_set(6) == std::vector<Id>{3, 4, 8});
  CHECK(dep.total_request_set(7) == std::vector<Id>{3});
  CHECK_THROWS_AS(dep.total_request_set(42), std::invalid_argument);
}

TEST_CASE("simplified instance evaluates known assignments") {
  Instance inst = example_instance();
  REQUIRE(inst.customer_count() == 7);
  REQUIRE(inst.requirement_count() == 8);
  CHECK(inst.bound() == 26);
  CHECK(inst.total_cost() == 30);
  CHECK(inst.total_profit() == 28);
  CHECK(inst.all_rows_nonempty());

  Solution x1 = pick(inst, {1, 3, 7});
  CHECK(solution_cost(inst, x1) == 20);
  CHECK(solution_profit(inst, x1) == 14);
  CHECK(is_feasible(inst, x1));

  Solution x2 = pick(inst, {1, 5, 6, 7});
  CHECK(solution_cost(inst, x2) == 25);
  CHECK(solution_profit(inst, x2) == 15);
  CHECK(is_feasible(inst, x2));

  Solution x3 = pick(inst, {2, 4, 6});
  CHECK(solution_cost(inst, x3) == 29);
  CHECK_FALSE(is_feasible(inst, x3));
}

TEST_CASE("instance validation catches malformed input") {
  std::vector<Requirement> reqs = {{1, 2}, {2, 3}};
  std::vector<Customer> cs = {{1, 5}, {2, 4}};

  CHECK_THROWS_AS(Instance(cs, reqs, {{1}, {9}}, 10), ModelError);
  CHECK_THROWS_AS(Instance(cs, reqs, {{1}}, 10), ModelError);
  CHECK_THROWS_AS(Instance(cs, reqs, {{1}, {2}}, -1), ModelError);
  CHECK_THROWS_AS(Instance(cs, {{1, 2}, {1, 3}}, {{1}, {1}}, 10), ModelError);
  CHECK_THROWS_AS(Instance({{1, 5}, {1, 4}}, reqs, {{1}, {1}}, 10), ModelError);
  CHECK_THROWS_AS(Instance(cs, {{1, -2}, {2, 3}}, {{1}, {2}}, 10), ModelError);
  CHECK_THROWS_AS(Instance({{1, -5}, {2, 4}}, reqs, {{1}, {2}}, 10), ModelError);
}

TEST_CASE("instances sort customers and requirements by id") {
  Instance inst({{3, 1}, {1, 7}, {2, 2}}, {{2, 5}, {1, 2}}, {{2}, {1}, {1, 2}}, 7);
  CHECK(inst.customer(0).id == 1);
  CHECK(inst.customer(1).id == 2);
  CHECK(inst.customer(2).id == 3);
  // Rows travel with their customers through the sort.
  CHECK(nrp::testing::as_vec(inst.row(0)) == std::vector<Id>{1});
  CHECK(nrp::testing::as_vec(inst.row(1)) == std::vector<Id>{1, 2});
  CHECK(nrp::testing::as_vec(inst.row(2)) == std::vector<Id>{2});
  CHECK(inst.requirement(0).id == 1);
  CHECK(inst.customer_index(2) == 1);
  CHECK_FALSE(inst.customer_index(9).has_value());
  CHECK(inst.requirement_index(2) == 1);
  CHECK_FALSE(inst.requirement_index(3).has_value());
  CHECK(inst.requesters(0).size() == 2);
}

TEST_CASE("solutions behave as total assignments") {
  Instance inst = example_instance();
  Solution none = Solution::none_selected(inst);
  CHECK(none.covers(inst));
  CHECK(none.selected_count() == 0);
  CHECK(solution_profit(inst, none) == 0);
  CHECK(solution_cost(inst, none) == 0);

  Solution x = Solution::from_pairs({{3, true}, {1, false}, {2, true}});
  CHECK(x.size() == 3);
  CHECK(x.selected(2));
  CHECK_FALSE(x.selected(1));
  CHECK(x.selected_ids() == std::vector<Id>{2, 3});
  CHECK_FALSE(x.covers(inst));
  CHECK_THROWS_AS(x.selected(42), std::invalid_argument);
  CHECK_FALSE(x.polarity(42).has_value());

  // Agreeing duplicates collapse, contradicting ones are an integrity breach.
  Solution dup = Solution::from_pairs({{1, true}, {1, true}});
  CHECK(dup.size() == 1);
  CHECK_THROWS_AS(Solution::from_pairs({{1, true}, {1, false}}), IntegrityError);
  CHECK_THROWS_AS(Solution({1, 1}, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Solution({1, 2}, {1}), std::invalid_argument);

  CHECK_THROWS_AS(solution_cost(inst, x), std::invalid_argument);
  Solution same = pick(inst, {1, 3, 7});
  Solution again = pick(inst, {1, 3, 7});
  CHECK(same == again);
  CHECK_FALSE(same == none);
}

TEST_CASE("dependent instances validate ids against the declared world") {
  std::vector<Requirement> reqs = {{1, 2}, {2, 5}};
  std::vector<Customer> cs = {{1, 7}};
  DependencyGraph g({1, 2}, {{1, 2}});
  CHECK_THROWS_AS(
      DependentInstance(reqs, cs, g, {{3}}, 10), ModelError);
  CHECK_THROWS_AS(
      DependentInstance(reqs, cs, DependencyGraph({1, 2, 9}, {}), {{1}}, 10), ModelError);
  CHECK_THROWS_AS(DependentInstance(reqs, cs, g, {{1}, {2}}, 10), ModelError);
  CHECK_THROWS_AS(DependentInstance(reqs, cs, g, {{1}}, -3), ModelError);
}
