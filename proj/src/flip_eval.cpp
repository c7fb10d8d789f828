#include "nrp/flip_eval.hpp"

#include <stdexcept>

namespace nrp {

FlipEval::FlipEval(const Instance& inst) : inst_(&inst) {
  rows_.resize(inst.customer_count());
  for (int i = 0; i < inst.customer_count(); ++i) {
    rows_[i].reserve(inst.row(i).size());
    for (Id r : inst.row(i)) rows_[i].push_back(*inst.requirement_index(r));
  }
  cover_.assign(inst.requirement_count(), 0);
  bits_.assign(inst.customer_count(), 0);
}

Money FlipEval::cost_if_flipped(int ci) const {
  Money c = cost_;
  if (bits_[ci]) {
    for (int j : rows_[ci])
      if (cover_[j] == 1) c -= inst_->requirement(j).cost;
  } else {
    for (int j : rows_[ci])
      if (cover_[j] == 0) c += inst_->requirement(j).cost;
  }
  return c;
}

Money FlipEval::profit_if_flipped(int ci) const {
  Money w = inst_->customer(ci).profit;
  return bits_[ci] ? profit_ - w : profit_ + w;
}

void FlipEval::flip(int ci) {
  if (bits_[ci]) {
    bits_[ci] = 0;
    profit_ -= inst_->customer(ci).profit;
    for (int j : rows_[ci])
      if (--cover_[j] == 0) cost_ -= inst_->requirement(j).cost;
  } else {
    bits_[ci] = 1;
    profit_ += inst_->customer(ci).profit;
    for (int j : rows_[ci])
      if (cover_[j]++ == 0) cost_ += inst_->requirement(j).cost;
  }
}

void FlipEval::clear() {
  std::fill(cover_.begin(), cover_.end(), 0);
  std::fill(bits_.begin(), bits_.end(), 0);
  cost_ = 0;
  profit_ = 0;
}

void FlipEval::load(const std::vector<std::uint8_t>& bits) {
  if (bits.size() != bits_.size())
    throw std::invalid_argument("assignment length does not match the instance");
  clear();
  for (int i = 0; i < customer_count(); ++i)
    if (bits[i]) flip(i);
}

void FlipEval::randomize(Rng& rng) {
  clear();
  for (int i = 0; i < customer_count(); ++i)
    if (rng.coin()) flip(i);
}

void FlipEval::repair(Rng& rng) {
  if (cost_ <= inst_->bound()) return;
  std::vector<int> selected;
  for (int i = 0; i < customer_count(); ++i)
    if (bits_[i]) selected.push_back(i);
  while (cost_ > inst_->bound() && !selected.empty()) {
    std::size_t k = rng.below(selected.size());
    flip(selected[k]);
    selected[k] = selected.back();
    selected.pop_back();
  }
}

Solution FlipEval::snapshot() const {
  std::vector<Id> ids;
  ids.reserve(inst_->customer_count());
  for (const auto& c : inst_->customers()) ids.push_back(c.id);
  return Solution(std::move(ids), bits_);
}

}  // namespace nrp
