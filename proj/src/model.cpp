#include "nrp/model.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "nrp/errors.hpp"

namespace nrp {
namespace {

std::string id_str(Id x) { return std::to_string(x); }

/// Sorts `items` by id and rejects duplicates. `what` names the entity kind
/// for error messages.
template <typename T>
void sort_unique_by_id(std::vector<T>& items, const char* what) {
  std::sort(items.begin(), items.end(), [](const T& a, const T& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (items[i].id == items[i - 1].id)
      throw ModelError(std::string("duplicate ") + what + " id " + id_str(items[i].id));
  }
}

}  // namespace

DependencyGraph::DependencyGraph(std::vector<Id> vertices, std::vector<std::pair<Id, Id>> arcs)
    : vertices_(std::move(vertices)), arcs_(std::move(arcs)) {
  std::sort(vertices_.begin(), vertices_.end());
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    if (vertices_[i] == vertices_[i - 1])
      throw ModelError("duplicate requirement id " + id_str(vertices_[i]) + " in dependency graph");
  }
  std::sort(arcs_.begin(), arcs_.end());
  arcs_.erase(std::unique(arcs_.begin(), arcs_.end()), arcs_.end());

  parents_of_.assign(vertices_.size(), {});
  for (const auto& [parent, child] : arcs_) {
    int pi = index_of(parent);
    int ci = index_of(child);
    if (pi < 0 || ci < 0)
      throw ModelError("dependency arc (" + id_str(parent) + ", " + id_str(child) +
                       ") references an unknown requirement");
    if (pi == ci)
      throw ModelError("dependency cycle involving requirement " + id_str(parent));
    parents_of_[ci].push_back(pi);
  }

  // Kahn's algorithm; leftovers mean a cycle.
  std::vector<int> pending(vertices_.size(), 0);
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    pending[v] = static_cast<int>(parents_of_[v].size());
  std::queue<int> ready;
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    if (pending[v] == 0) ready.push(static_cast<int>(v));
  std::vector<std::vector<int>> children_of(vertices_.size());
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    for (int p : parents_of_[v]) children_of[p].push_back(static_cast<int>(v));
  std::size_t seen = 0;
  while (!ready.empty()) {
    int v = ready.front();
    ready.pop();
    ++seen;
    for (int c : children_of[v])
      if (--pending[c] == 0) ready.push(c);
  }
  if (seen != vertices_.size()) {
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      if (pending[v] > 0)
        throw ModelError("dependency cycle involving requirement " + id_str(vertices_[v]));
    }
  }
}

int DependencyGraph::index_of(Id r) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), r);
  if (it == vertices_.end() || *it != r) return -1;
  return static_cast<int>(it - vertices_.begin());
}

bool DependencyGraph::contains(Id r) const { return index_of(r) >= 0; }

std::vector<Id> DependencyGraph::parents_closure(Id r) const {
  int start = index_of(r);
  if (start < 0) return {};  // ids outside the graph have no prerequisites
  std::vector<bool> visited(vertices_.size(), false);
  std::vector<int> stack(parents_of_[start]);
  std::vector<Id> out;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (visited[v]) continue;
    visited[v] = true;
    out.push_back(vertices_[v]);
    for (int p : parents_of_[v]) stack.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

DependentInstance::DependentInstance(std::vector<Requirement> requirements,
                                     std::vector<Customer> customers, DependencyGraph graph,
                                     std::vector<std::vector<Id>> direct_requests, Money bound)
    : requirements_(std::move(requirements)),
      customers_(std::move(customers)),
      graph_(std::move(graph)),
      bound_(bound) {
  if (direct_requests.size() != customers_.size())
    throw ModelError("request rows do not match the customer list");
  if (bound_ < 0) throw ModelError("budget bound must be non-negative");
  sort_unique_by_id(requirements_, "requirement");
  for (const auto& r : requirements_)
    if (r.cost < 0) throw ModelError("negative cost on requirement " + id_str(r.id));

  // Reorder rows together with their customers.
  std::vector<std::size_t> order(customers_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return customers_[a].id < customers_[b].id;
  });
  std::vector<Customer> customers_sorted;
  customers_sorted.reserve(customers_.size());
  direct_.reserve(customers_.size());
  for (std::size_t i : order) {
    customers_sorted.push_back(customers_[i]);
    direct_.push_back(std::move(direct_requests[i]));
  }
  customers_ = std::move(customers_sorted);
  for (std::size_t i = 1; i < customers_.size(); ++i) {
    if (customers_[i].id == customers_[i - 1].id)
      throw ModelError("duplicate customer id " + id_str(customers_[i].id));
  }
  for (const auto& c : customers_)
    if (c.profit < 0) throw ModelError("negative profit on customer " + id_str(c.id));

  for (Id v : graph_.vertices()) {
    if (std::none_of(requirements_.begin(), requirements_.end(),
                     [v](const Requirement& r) { return r.id == v; }))
      throw ModelError("dependency graph vertex " + id_str(v) + " is not a declared requirement");
  }

  for (std::size_t i = 0; i < direct_.size(); ++i) {
    auto& row = direct_[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    for (Id r : row) {
      if (std::none_of(requirements_.begin(), requirements_.end(),
                       [r](const Requirement& q) { return q.id == r; }))
        throw ModelError("customer " + id_str(customers_[i].id) +
                         " requests undeclared requirement " + id_str(r));
    }
  }
}

std::span<const Id> DependentInstance::direct_requests(int customer_index) const {
  return direct_[customer_index];
}

int DependentInstance::customer_index(Id c) const {
  auto it = std::lower_bound(customers_.begin(), customers_.end(), c,
                             [](const Customer& a, Id b) { return a.id < b; });
  if (it == customers_.end() || it->id != c) return -1;
  return static_cast<int>(it - customers_.begin());
}

std::vector<Id> DependentInstance::total_request_set(Id customer) const {
  int ci = customer_index(customer);
  if (ci < 0) throw std::invalid_argument("unknown customer id " + id_str(customer));
  std::vector<Id> out(direct_[ci]);
  for (Id r : direct_[ci]) {
    auto parents = graph_.parents_closure(r);
    out.insert(out.end(), parents.begin(), parents.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Instance DependentInstance::to_simplified() const {
  std::vector<std::vector<Id>> rows;
  rows.reserve(customers_.size());
  for (const auto& c : customers_) rows.push_back(total_request_set(c.id));
  return Instance(customers_, requirements_, std::move(rows), bound_);
}

Instance::Instance(std::vector<Customer> customers, std::vector<Requirement> requirements,
                   std::vector<std::vector<Id>> rows, Money bound, std::string note)
    : customers_(std::move(customers)),
      requirements_(std::move(requirements)),
      bound_(bound),
      note_(std::move(note)) {
  if (rows.size() != customers_.size())
    throw ModelError("request rows do not match the customer list");
  if (bound_ < 0) throw ModelError("budget bound must be non-negative");
  sort_unique_by_id(requirements_, "requirement");
  for (const auto& r : requirements_)
    if (r.cost < 0) throw ModelError("negative cost on requirement " + id_str(r.id));

  std::vector<std::size_t> order(customers_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return customers_[a].id < customers_[b].id;
  });
  std::vector<Customer> customers_sorted;
  customers_sorted.reserve(customers_.size());
  rows_.reserve(customers_.size());
  for (std::size_t i : order) {
    customers_sorted.push_back(customers_[i]);
    rows_.push_back(std::move(rows[i]));
  }
  customers_ = std::move(customers_sorted);
  for (std::size_t i = 1; i < customers_.size(); ++i) {
    if (customers_[i].id == customers_[i - 1].id)
      throw ModelError("duplicate customer id " + id_str(customers_[i].id));
  }
  for (const auto& c : customers_)
    if (c.profit < 0) throw ModelError("negative profit on customer " + id_str(c.id));

  requesters_.assign(requirements_.size(), {});
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    auto& row = rows_[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    for (Id r : row) {
      auto ri = requirement_index(r);
      if (!ri)
        throw ModelError("customer " + id_str(customers_[i].id) +
                         " requests undeclared requirement " + id_str(r));
      requesters_[*ri].push_back(static_cast<int>(i));
    }
  }
}

std::span<const Id> Instance::row(int customer_index) const { return rows_[customer_index]; }

std::span<const int> Instance::requesters(int requirement_index) const {
  return requesters_[requirement_index];
}

std::optional<int> Instance::customer_index(Id c) const {
  auto it = std::lower_bound(customers_.begin(), customers_.end(), c,
                             [](const Customer& a, Id b) { return a.id < b; });
  if (it == customers_.end() || it->id != c) return std::nullopt;
  return static_cast<int>(it - customers_.begin());
}

std::optional<int> Instance::requirement_index(Id r) const {
  auto it = std::lower_bound(requirements_.begin(), requirements_.end(), r,
                             [](const Requirement& a, Id b) { return a.id < b; });
  if (it == requirements_.end() || it->id != r) return std::nullopt;
  return static_cast<int>(it - requirements_.begin());
}

Money Instance::total_cost() const {
  Money sum = 0;
  for (const auto& r : requirements_) sum += r.cost;
  return sum;
}

Money Instance::total_profit() const {
  Money sum = 0;
  for (const auto& c : customers_) sum += c.profit;
  return sum;
}

bool Instance::all_rows_nonempty() const {
  return std::none_of(rows_.begin(), rows_.end(),
                      [](const std::vector<Id>& row) { return row.empty(); });
}

Solution::Solution(std::vector<Id> customer_ids, std::vector<std::uint8_t> selected)
    : ids_(std::move(customer_ids)), selected_(std::move(selected)) {
  if (ids_.size() != selected_.size())
    throw std::invalid_argument("solution ids and polarities differ in length");
  std::vector<std::size_t> order(ids_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ids_[a] < ids_[b]; });
  std::vector<Id> ids_sorted;
  std::vector<std::uint8_t> sel_sorted;
  ids_sorted.reserve(ids_.size());
  sel_sorted.reserve(ids_.size());
  for (std::size_t i : order) {
    ids_sorted.push_back(ids_[i]);
    sel_sorted.push_back(selected_[i] ? 1 : 0);
  }
  ids_ = std::move(ids_sorted);
  selected_ = std::move(sel_sorted);
  for (std::size_t i = 1; i < ids_.size(); ++i) {
    if (ids_[i] == ids_[i - 1])
      throw std::invalid_argument("duplicate customer id " + id_str(ids_[i]) + " in solution");
  }
}

Solution Solution::none_selected(const Instance& inst) {
  std::vector<Id> ids;
  ids.reserve(inst.customer_count());
  for (const auto& c : inst.customers()) ids.push_back(c.id);
  return Solution(std::move(ids), std::vector<std::uint8_t>(inst.customer_count(), 0));
}

Solution Solution::from_pairs(std::vector<std::pair<Id, bool>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  std::vector<Id> ids;
  std::vector<std::uint8_t> sel;
  ids.reserve(pairs.size());
  sel.reserve(pairs.size());
  for (const auto& [id, on] : pairs) {
    if (!ids.empty() && ids.back() == id) {
      if ((sel.back() != 0) != on)
        throw IntegrityError("customer " + id_str(id) + " assigned both polarities");
      continue;  // benign duplicate
    }
    ids.push_back(id);
    sel.push_back(on ? 1 : 0);
  }
  return Solution(std::move(ids), std::move(sel));
}

bool Solution::selected(Id customer) const {
  auto p = polarity(customer);
  if (!p) throw std::invalid_argument("unknown customer id " + id_str(customer) + " in solution");
  return *p;
}

std::optional<bool> Solution::polarity(Id customer) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), customer);
  if (it == ids_.end() || *it != customer) return std::nullopt;
  return selected_[it - ids_.begin()] != 0;
}

std::vector<std::pair<Id, bool>> Solution::pairs() const {
  std::vector<std::pair<Id, bool>> out;
  out.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) out.emplace_back(ids_[i], selected_[i] != 0);
  return out;
}

std::vector<Id> Solution::selected_ids() const {
  std::vector<Id> out;
  for (std::size_t i = 0; i < ids_.size(); ++i)
    if (selected_[i]) out.push_back(ids_[i]);
  return out;
}

int Solution::selected_count() const {
  int n = 0;
  for (auto s : selected_) n += s != 0;
  return n;
}

bool Solution::covers(const Instance& inst) const {
  if (size() != inst.customer_count()) return false;
  for (int i = 0; i < size(); ++i)
    if (ids_[i] != inst.customer(i).id) return false;
  return true;
}

namespace {

void require_covers(const Instance& inst, const Solution& x) {
  if (!x.covers(inst))
    throw std::invalid_argument("solution does not assign exactly the customers of the instance");
}

}  // namespace

Money solution_cost(const Instance& inst, const Solution& x) {
  require_covers(inst, x);
  std::vector<std::uint8_t> wanted(inst.requirement_count(), 0);
  for (int i = 0; i < inst.customer_count(); ++i) {
    if (!x.selected_at(i)) continue;
    for (Id r : inst.row(i)) wanted[*inst.requirement_index(r)] = 1;
  }
  Money sum = 0;
  for (int j = 0; j < inst.requirement_count(); ++j)
    if (wanted[j]) sum += inst.requirement(j).cost;
  return sum;
}

Money solution_profit(const Instance& inst, const Solution& x) {
  require_covers(inst, x);
  Money sum = 0;
  for (int i = 0; i < inst.customer_count(); ++i)
    if (x.selected_at(i)) sum += inst.customer(i).profit;
  return sum;
}

bool is_feasible(const Instance& inst, const Solution& x) {
  return solution_cost(inst, x) <= inst.bound();
}

}  // namespace nrp
