#include "supermarket/tail_counts.hpp"

#include <stdexcept>
#include <string>

namespace supermarket {

TailCounts::TailCounts(std::int64_t n) : n_(n), q_{n} {
  if (n < 1) throw std::invalid_argument("TailCounts needs n >= 1");
}

TailCounts::TailCounts(std::int64_t n, std::vector<std::int64_t> tail)
    : n_(n), q_{n} {
  if (n < 1) throw std::invalid_argument("TailCounts needs n >= 1");
  while (!tail.empty() && tail.back() == 0) tail.pop_back();
  q_.insert(q_.end(), tail.begin(), tail.end());
  check();
}

std::int64_t TailCounts::total_jobs() const {
  std::int64_t total = 0;
  for (std::size_t i = 1; i < q_.size(); ++i) total += q_[i];
  return total;
}

std::size_t TailCounts::length_of_rank(std::int64_t k) const {
  // q is nonincreasing: find the last level with q > k.
  std::size_t lo = 0, hi = q_.size();  // invariant: q_[lo] > k, q_[hi] <= k
  if (q_[0] <= k) return 0;
  while (hi - lo > 1) {
    std::size_t mid = lo + (hi - lo) / 2;
    (q_[mid] > k ? lo : hi) = mid;
  }
  return lo;
}

void TailCounts::apply_arrival(std::size_t level) {
  if (level < 1 || level > q_.size()) {
    throw std::logic_error("arrival level out of range");
  }
  if (level == q_.size()) {
    q_.push_back(0);
  }
  if (q_[level] >= q_[level - 1]) {
    throw std::logic_error("arrival would break monotonicity at level " +
                           std::to_string(level));
  }
  ++q_[level];
}

void TailCounts::apply_departure(std::size_t level) {
  if (level < 1 || level >= q_.size() || q_[level] <= 0 ||
      (level + 1 < q_.size() && q_[level] <= q_[level + 1])) {
    throw std::logic_error("departure level out of range");
  }
  --q_[level];
  if (q_.back() == 0 && q_.size() > 1) q_.pop_back();
}

void TailCounts::check() const {
  if (q_.empty() || q_[0] != n_) throw std::logic_error("q_0 != n");
  for (std::size_t i = 1; i < q_.size(); ++i) {
    if (q_[i] < 0 || q_[i] > q_[i - 1]) {
      throw std::logic_error("tail counts not nonincreasing at level " +
                             std::to_string(i));
    }
  }
  if (q_.size() > 1 && q_.back() == 0) {
    throw std::logic_error("stored top level must be positive");
  }
}

}  // namespace supermarket
