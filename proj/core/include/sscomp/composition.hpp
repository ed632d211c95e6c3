#pragma once

// Compositions of n (ordered sequences of positive parts) and the reduction
// operations acting on them.
//
// Three encodings are interchangeable:
//   parts           (2,4,1,2)
//   balls-in-boxes  [00][0000][0][00]
//   binary          101000110   (a 1 opens every box)
//
// Within a fixed n, compositions are indexed by their binary code with the
// leading 1 dropped, read MSB first; enumerate_compositions() yields them in
// increasing index order.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sscomp/scalar.hpp"

namespace sscomp {

inline constexpr int kDefaultEnumerationCap = 16;

class Composition {
 public:
  /// The empty composition of 0; only produced by deleting the last ball.
  Composition() = default;
  /// Throws ParameterError on an empty list or a non-positive part.
  explicit Composition(std::vector<int> parts);
  Composition(std::initializer_list<int> parts) : Composition(std::vector<int>(parts)) {}

  /// "2,4,1,2"
  static Composition parse(std::string_view text);
  /// "101000110"; the first digit must be 1.
  static Composition from_binary(std::string_view bits);
  /// Inverse of index(); requires n <= 63.
  static Composition from_index(int n, std::uint64_t index);

  bool empty() const { return parts_.empty(); }
  int size() const { return n_; }
  int length() const { return static_cast<int>(parts_.size()); }
  int part(int k) const { return parts_[static_cast<std::size_t>(k)]; }
  int last() const { return parts_.back(); }
  std::span<const int> parts() const { return parts_; }

  /// Lambda_1 < Lambda_2 < ... < Lambda_l = n.
  std::vector<int> partial_sums() const;
  std::string to_binary() const;
  std::string to_string() const;
  std::uint64_t index() const;

  friend bool operator==(const Composition&, const Composition&) = default;
  friend auto operator<=>(const Composition& a, const Composition& b) {
    return a.parts_ <=> b.parts_;
  }

 private:
  std::vector<int> parts_;
  int n_ = 0;
};

/// Weakly decreasing parts; the rank of any composition with the same multiset.
class Partition {
 public:
  Partition() = default;
  /// Parts are sorted descending; throws on non-positive parts.
  explicit Partition(std::vector<int> parts);
  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}
  static Partition parse(std::string_view text);

  int size() const { return n_; }
  int length() const { return static_cast<int>(parts_.size()); }
  std::span<const int> parts() const { return parts_; }
  std::string to_string() const;

  /// Removes one copy of `part`; throws if absent.
  Partition without(int part) const;
  /// Distinct part sizes, descending.
  std::vector<int> distinct_parts() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition& a, const Partition& b) {
    return a.parts_ <=> b.parts_;
  }

 private:
  std::vector<int> parts_;
  int n_ = 0;
};

struct BallPosition {
  int index;  // 1-based place of the ball, counted from the left
};

Composition reverse(const Composition& c);
Partition rank(const Composition& c);

/// Removes the ball at `pos`; a box left empty disappears. Deleting the only
/// ball of (1) yields the empty composition. Throws ParameterError if pos is
/// outside [1, n].
Composition delete_ball(const Composition& c, BallPosition pos);

/// All 2^{n-1} compositions of n in index order. Throws CapExceeded if n > cap.
std::vector<Composition> enumerate_compositions(int n, int cap = kDefaultEnumerationCap);

/// Partitions of n, in reverse lexicographic order ((n) first).
std::vector<Partition> enumerate_partitions(int n);

/// Distinct orderings of a multiset of parts, lexicographically increasing.
std::vector<Composition> distinct_arrangements(const Partition& p);

/// Probability that deleting a uniformly placed ball from mu gives lambda.
template <class S>
S uniform_reduction_kernel(const Composition& mu, const Composition& lambda);

extern template Rational uniform_reduction_kernel<Rational>(const Composition&, const Composition&);
extern template double uniform_reduction_kernel<double>(const Composition&, const Composition&);

}  // namespace sscomp
