#include "nrp/backbone.hpp"

#include <algorithm>
#include <stdexcept>

#include "nrp/errors.hpp"

namespace nrp {

Backbone::Backbone(std::vector<std::pair<Id, bool>> pairs, BackboneKind kind)
    : pairs_(std::move(pairs)), kind_(kind) {
  std::sort(pairs_.begin(), pairs_.end());
  for (std::size_t i = 1; i < pairs_.size(); ++i) {
    if (pairs_[i].first == pairs_[i - 1].first) {
      if (pairs_[i].second != pairs_[i - 1].second)
        throw IntegrityError("customer " + std::to_string(pairs_[i].first) +
                             " fixed with both polarities");
      pairs_.erase(pairs_.begin() + static_cast<std::ptrdiff_t>(i));
      --i;
    }
  }
}

std::optional<bool> Backbone::polarity(Id customer) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), customer,
                             [](const std::pair<Id, bool>& p, Id c) { return p.first < c; });
  if (it == pairs_.end() || it->first != customer) return std::nullopt;
  return it->second;
}

std::vector<Id> Backbone::selected_ids() const {
  std::vector<Id> out;
  for (const auto& [id, on] : pairs_)
    if (on) out.push_back(id);
  return out;
}

Backbone approximate_backbone(std::span<const Solution> solutions) {
  if (solutions.empty())
    throw std::invalid_argument("backbone of an empty solution family is undefined");
  const Solution& first = solutions.front();
  for (const Solution& s : solutions) {
    if (!std::ranges::equal(s.customer_ids(), first.customer_ids()))
      throw std::invalid_argument("solutions cover different customer sets");
  }
  std::vector<std::pair<Id, bool>> agreed;
  for (int i = 0; i < first.size(); ++i) {
    bool p = first.selected_at(i);
    bool unanimous = true;
    for (const Solution& s : solutions.subspan(1)) {
      if (s.selected_at(i) != p) {
        unanimous = false;
        break;
      }
    }
    if (unanimous) agreed.emplace_back(first.customer_ids()[i], p);
  }
  return Backbone(std::move(agreed), BackboneKind::Approximate);
}

Backbone soft_backbone(const Instance& inst) {
  std::vector<std::pair<Id, bool>> pairs;
  for (int i = 0; i < inst.customer_count(); ++i)
    if (inst.row(i).empty()) pairs.emplace_back(inst.customer(i).id, true);
  return Backbone(std::move(pairs), BackboneKind::Soft);
}

ReducedInstance reduce_instance(const Instance& inst, const Backbone& bb) {
  std::vector<std::uint8_t> drop_customer(inst.customer_count(), 0);
  std::vector<std::uint8_t> drop_requirement(inst.requirement_count(), 0);
  for (const auto& [id, on] : bb.pairs()) {
    auto ci = inst.customer_index(id);
    if (!ci) throw std::invalid_argument("backbone fixes unknown customer " + std::to_string(id));
    drop_customer[*ci] = 1;
    if (on) {
      // Selecting the customer commits to their whole row.
      for (Id r : inst.row(*ci)) drop_requirement[*inst.requirement_index(r)] = 1;
    }
  }

  ReducedInstance out;
  Money fixed_cost = 0;
  std::vector<Requirement> kept_requirements;
  for (int j = 0; j < inst.requirement_count(); ++j) {
    if (drop_requirement[j]) {
      out.removed_requirements.push_back(inst.requirement(j).id);
      fixed_cost += inst.requirement(j).cost;
    } else {
      kept_requirements.push_back(inst.requirement(j));
    }
  }
  if (fixed_cost > inst.bound())
    throw IntegrityError("backbone commits to cost " + std::to_string(fixed_cost) +
                         " above the bound " + std::to_string(inst.bound()));

  std::vector<Customer> kept_customers;
  std::vector<std::vector<Id>> kept_rows;
  for (int i = 0; i < inst.customer_count(); ++i) {
    if (drop_customer[i]) {
      out.removed_customers.push_back(inst.customer(i).id);
      continue;
    }
    kept_customers.push_back(inst.customer(i));
    std::vector<Id> row;
    for (Id r : inst.row(i))
      if (!drop_requirement[*inst.requirement_index(r)]) row.push_back(r);
    kept_rows.push_back(std::move(row));
  }

  out.fixed_cost = fixed_cost;
  out.instance = Instance(std::move(kept_customers), std::move(kept_requirements),
                          std::move(kept_rows), inst.bound() - fixed_cost, inst.note());
  return out;
}

Backbone combine_backbones(std::span<const Backbone> parts) {
  std::vector<std::pair<Id, bool>> pairs;
  for (const Backbone& b : parts) pairs.insert(pairs.end(), b.pairs().begin(), b.pairs().end());
  return Backbone(std::move(pairs), BackboneKind::Combined);
}

double backbone_agreement(const Backbone& bb, const Solution& reference) {
  if (bb.pairs().empty()) return 1.0;
  int agree = 0;
  for (const auto& [id, on] : bb.pairs())
    if (reference.selected(id) == on) ++agree;
  return static_cast<double>(agree) / static_cast<double>(bb.pairs().size());
}

namespace {

/// Depth-first include/exclude enumeration with incremental coverage counts.
/// Adding a customer never lowers the cost, so branches whose running cost
/// already exceeds the bound cannot recover and are cut.
class Enumerator {
public:
  explicit Enumerator(const Instance& inst) : inst_(inst) {
    cover_.assign(inst.requirement_count(), 0);
    chosen_.assign(inst.customer_count(), 0);
    row_indices_.resize(inst.customer_count());
    for (int i = 0; i < inst.customer_count(); ++i)
      for (Id r : inst.row(i)) row_indices_[i].push_back(*inst.requirement_index(r));
  }

  void run() { descend(0, 0, 0); }

  Money best_profit() const { return best_profit_; }
  std::vector<std::vector<std::uint8_t>> take_best() { return std::move(best_sets_); }

private:
  void descend(int i, Money cost, Money profit) {
    if (cost > inst_.bound()) return;
    if (i == inst_.customer_count()) {
      if (profit > best_profit_) {
        best_profit_ = profit;
        best_sets_.clear();
      }
      if (profit == best_profit_) best_sets_.push_back(chosen_);
      return;
    }
    // Exclude branch first so collected optima come out in lexicographic
    // order over (selected?) vectors with 0 < 1.
    descend(i + 1, cost, profit);

    Money added = 0;
    for (int j : row_indices_[i]) {
      if (cover_[j]++ == 0) added += inst_.requirement(j).cost;
    }
    chosen_[i] = 1;
    descend(i + 1, cost + added, profit + inst_.customer(i).profit);
    chosen_[i] = 0;
    for (int j : row_indices_[i]) --cover_[j];
  }

  const Instance& inst_;
  std::vector<int> cover_;
  std::vector<std::uint8_t> chosen_;
  std::vector<std::vector<int>> row_indices_;
  Money best_profit_ = -1;
  std::vector<std::vector<std::uint8_t>> best_sets_;
};

}  // namespace

OracleReport brute_force_oracle(const Instance& inst, int customer_cap) {
  if (inst.customer_count() > customer_cap)
    throw std::invalid_argument("instance has " + std::to_string(inst.customer_count()) +
                                " customers, oracle cap is " + std::to_string(customer_cap));
  Enumerator e(inst);
  e.run();

  OracleReport report;
  report.optimum_profit = e.best_profit();
  std::vector<Id> ids;
  for (const auto& c : inst.customers()) ids.push_back(c.id);
  for (auto& bits : e.take_best()) report.optimal_solutions.emplace_back(ids, std::move(bits));

  Backbone exact = approximate_backbone(report.optimal_solutions);
  report.exact_backbone = Backbone(
      std::vector<std::pair<Id, bool>>(exact.pairs().begin(), exact.pairs().end()),
      BackboneKind::Exact);
  return report;
}

}  // namespace nrp
