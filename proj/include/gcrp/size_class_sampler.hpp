#pragma once

#include <cstdint>
#include <vector>

namespace gcrp {

/// Dense size-class counts with a binary-indexed tree over sizes 1..capacity.
///
/// Each tree node stores two exact integer partial sums, sum k*N(k) and
/// sum N(k); the join weight of a range is their combination
/// sum (k - alpha) N(k) = S1 - alpha * S0. Incremental updates are therefore
/// exact and the tree always equals a fresh rebuild from the counts.
/// Capacity doubles on demand, so memory tracks the largest part size.
class SizeClassSampler {
 public:
  explicit SizeClassSampler(std::int64_t capacity_hint = 16);

  std::int64_t count(std::int64_t k) const {
    return k >= 1 && k <= capacity_ ? counts_[k] : 0;
  }
  std::int64_t capacity() const { return capacity_; }
  std::int64_t max_size() const { return max_size_; }

  /// N(k) += delta; k >= 1. Grows capacity when k exceeds it.
  void add(std::int64_t k, std::int64_t delta);

  /// Smallest size k with cumulative join weight > u, for 0 <= u < total
  /// join weight. Returns 0 if rounding pushed the search onto an empty class.
  std::int64_t find(double u, double alpha) const;

  /// Rebuilds the tree from the counts in O(capacity).
  void rebuild();

  /// Tree nodes, exposed for the incremental-vs-rebuilt consistency check.
  struct Node {
    std::int64_t mass = 0;   // sum of k * N(k)
    std::int64_t parts = 0;  // sum of N(k)
    friend bool operator==(const Node&, const Node&) = default;
  };
  const std::vector<Node>& nodes() const { return tree_; }

 private:
  void grow(std::int64_t min_capacity);

  std::int64_t capacity_;
  std::int64_t max_size_ = 0;
  std::vector<std::int64_t> counts_;  // index 0 unused
  std::vector<Node> tree_;            // index 0 unused
};

}  // namespace gcrp
