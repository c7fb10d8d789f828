#pragma once

#include <cstdint>
#include <vector>

#include "nrp/model.hpp"
#include "nrp/rng.hpp"

namespace nrp {

/// Incremental evaluator for single-customer flips. Keeps a per-requirement
/// count of how many selected customers request it, so flipping a customer
/// and probing a flip are both O(row length) instead of a full rescan.
class FlipEval {
public:
  explicit FlipEval(const Instance& inst);

  const Instance& instance() const { return *inst_; }
  int customer_count() const { return static_cast<int>(bits_.size()); }
  Money cost() const { return cost_; }
  Money profit() const { return profit_; }
  bool selected(int customer_index) const { return bits_[customer_index] != 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  /// Cost of the selection with one customer flipped, without flipping.
  Money cost_if_flipped(int customer_index) const;
  Money profit_if_flipped(int customer_index) const;
  void flip(int customer_index);

  void clear();
  /// Loads an explicit assignment (one bit per customer, instance order).
  void load(const std::vector<std::uint8_t>& bits);
  /// Uniform random assignment.
  void randomize(Rng& rng);
  /// Deselects uniformly random selected customers until the cost fits the
  /// bound. Terminates because the empty selection costs nothing.
  void repair(Rng& rng);

  Solution snapshot() const;

private:
  const Instance* inst_ = nullptr;
  std::vector<std::vector<int>> rows_;  // requirement indices per customer
  std::vector<int> cover_;              // selected requesters per requirement
  std::vector<std::uint8_t> bits_;
  Money cost_ = 0;
  Money profit_ = 0;
};

}  // namespace nrp
