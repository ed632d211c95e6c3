#pragma once

// Seedable random streams. PCG-XSH-RR 64/32: the increment selects one of
// 2^63 disjoint sequences, so (seed, stream) pairs give independent streams
// without coordination between replicas.

#include <cstdint>
#include <limits>

namespace sscomp {

class RngStream {
 public:
  using result_type = std::uint32_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform();
  /// Exponential with the given rate.
  double exponential(double rate);
  /// Beta(a, b) via two gamma variates.
  double beta(double a, double b);
  /// Uniform integer in [0, bound).
  std::uint32_t below(std::uint32_t bound);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 0;
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace sscomp
