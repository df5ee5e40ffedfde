#pragma once

#include <cstdint>
#include <vector>

namespace supermarket {

/// Tail counts of the queue-length distribution: q_i = number of queues with
/// at least i jobs. Invariants: q_0 == n, q nonincreasing in i, q_i >= 0.
/// Only levels up to the current maximum are stored.
class TailCounts {
 public:
  /// Empty system: q_i = 0 for all i >= 1.
  explicit TailCounts(std::int64_t n);

  /// From explicit tail counts q_1, q_2, ... (validated).
  TailCounts(std::int64_t n, std::vector<std::int64_t> tail);

  std::int64_t n() const { return n_; }

  /// q_i; zero beyond the stored top. at(0) == n.
  std::int64_t at(std::size_t i) const {
    return i < q_.size() ? q_[i] : 0;
  }

  /// Highest level with q > 0 (0 for the empty system).
  std::size_t top() const { return q_.size() - 1; }

  /// Total jobs in the system, sum_{i>=1} q_i.
  std::int64_t total_jobs() const;

  /// Queue length of the queue with rank k in [0, n) when queues are sorted
  /// by length descending: #\{i >= 1 : q_i > k\}.
  std::size_t length_of_rank(std::int64_t k) const;

  /// Arrival into a queue currently holding level-1 jobs: ++q_level.
  /// Requires 1 <= level <= top() + 1 and the move keeps q nonincreasing.
  void apply_arrival(std::size_t level);

  /// Departure from a queue with exactly `level` jobs: --q_level.
  void apply_departure(std::size_t level);

  double fraction(std::size_t i) const {
    return static_cast<double>(at(i)) / static_cast<double>(n_);
  }

  /// Full invariant check; throws std::logic_error on violation.
  void check() const;

  friend bool operator==(const TailCounts&, const TailCounts&) = default;

 private:
  std::int64_t n_;
  std::vector<std::int64_t> q_;  // q_[0] == n_, strictly positive tail levels
};

}  // namespace supermarket
