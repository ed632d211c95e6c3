#pragma once

// Randomised constructions of composition structures. Every sampler is a pure
// function of its parameters and the state of the RngStream it is handed.

#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "sscomp/composition.hpp"
#include "sscomp/laws.hpp"
#include "sscomp/rng.hpp"

namespace sscomp {

// ---- binary-string samplers ---------------------------------------------

/// Independent digits, P(xi_j = 1) = theta / (j + theta - 1).
Composition sample_bernoulli_string(double theta, int n, RngStream& rng);

/// Discrete renewal process started at 1 with P(X = r) = alpha (1-alpha)_{r-1}/r!,
/// truncated at n. Uses the hazard P(X = r | X >= r) = alpha / r.
Composition sample_renewal_string(double alpha, int n, RngStream& rng);

/// Reads a path of the decreasing chain: last part from q*(n:.), then each
/// earlier part from q(remaining:.). Rows are checked once at construction.
class MarkovCompositionSampler {
 public:
  /// Throws SamplerError if a needed row is not a probability vector.
  MarkovCompositionSampler(const DecrementMatrixPair<double>& dm, int n);
  Composition operator()(RngStream& rng) const;

 private:
  int n_;
  std::vector<std::vector<double>> q_cdf_;  // q_cdf_[m] over r = 1..m
  std::vector<double> q_star_cdf_;
};

Composition sample_markov_composition(const DecrementMatrixPair<double>& dm, int n, RngStream& rng);

// ---- stick breaking -------------------------------------------------------

/// W_i ~ Beta(1 - alpha, theta + i alpha), V_i = (1-W_1)...(1-W_{i-1}) W_i.
class StickBreaking {
 public:
  StickBreaking(double alpha, double theta);
  /// Next size-biased frequency.
  double next(RngStream& rng);
  double remaining() const { return remaining_; }
  int count() const { return index_; }

 private:
  double alpha_;
  double theta_;
  double remaining_ = 1.0;
  int index_ = 0;
};

/// First k frequencies of GEM(alpha, theta).
std::vector<double> sample_gem(double alpha, double theta, int k, RngStream& rng);

/// Largest frequency of a GEM(alpha, theta) sample; exact (sticks are drawn
/// until the unbroken remainder is smaller than the current maximum).
double sample_largest_frequency(double alpha, double theta, RngStream& rng);

// ---- interval partitions and random sets ------------------------------------

struct Interval {
  double left = 0;
  double right = 0;
  double length() const { return right - left; }
};

/// Disjoint open subintervals of [0,1]; `residual` is the uncovered mass.
/// Partitions backed by a random set carry `extend`, which refines the
/// uncovered region with further intervals drawn from the same law.
struct IntervalPartitionSample {
  std::vector<Interval> intervals;
  double residual = 0;
  std::optional<std::size_t> meander;  // index of the rightmost gap, if flagged
  std::function<void(IntervalPartitionSample&, RngStream&)> extend;

  /// Index of the interval containing x, or nullopt if x is uncovered.
  std::optional<std::size_t> locate(double x) const;
};

/// Gaps (e^{-G_{k+1}}, e^{-G_k}) of the scale-invariant Poisson set with
/// intensity theta dx/x on (0,1], G_0 = 0, until e^{-G_K} < cutoff. The gap
/// (e^{-G_1}, 1) is the meander.
IntervalPartitionSample sample_scale_invariant_partition(double theta, double cutoff, RngStream& rng);

/// GEM(alpha, theta) pieces laid left to right until the remainder < cutoff.
IntervalPartitionSample stick_breaking_partition(double alpha, double theta, double cutoff,
                                                 RngStream& rng);

struct UniformSamplingTrace {
  Composition composition;
  std::vector<bool> discovery;  // discovery[j-1]: uniform j opened a new interval
};

inline constexpr double kDefaultResidualTolerance = 1e-12;

/// n independent uniforms grouped by containing interval, group sizes listed
/// left to right. Hits of the uncovered region extend backed partitions; for
/// static partitions they raise SamplerError.
UniformSamplingTrace uniform_sampling_trace(IntervalPartitionSample& partition, int n, RngStream& rng,
                                            double tolerance = kDefaultResidualTolerance);
Composition uniform_sampling_composition(IntervalPartitionSample& partition, int n, RngStream& rng,
                                         double tolerance = kDefaultResidualTolerance);

/// Length of the interval covering an independent uniform point.
double tagged_gap_length(IntervalPartitionSample& partition, RngStream& rng);

/// A random closed subset of (0, inf) that can be queried on compact ranges.
class RandomClosedSet {
 public:
  virtual ~RandomClosedSet() = default;
  /// Whether the set meets [a, b], 0 < a <= b.
  virtual bool intersects(double a, double b, RngStream& rng) = 0;
};

/// Points of a Poisson process with intensity theta dx/x on (0, inf), i.e.
/// -log(points) homogeneous of rate theta. Atoms are generated outward from 1
/// on demand, so every query answer is exact.
class ScaleInvariantSet final : public RandomClosedSet {
 public:
  explicit ScaleInvariantSet(double theta);
  bool intersects(double a, double b, RngStream& rng) override;

  /// Generated atoms below 1 (decreasing) and above 1 (increasing).
  const std::vector<double>& atoms_below() const { return below_; }
  const std::vector<double>& atoms_above() const { return above_; }

 private:
  void extend_below(double a, RngStream& rng);
  void extend_above(double b, RngStream& rng);

  double theta_;
  std::vector<double> below_;
  std::vector<double> above_;
};

/// xi_1 = 1, xi_j = 1 iff the set meets [eps_{j-1}, eps_j] for the arrival
/// times of a rate-one Poisson process.
Composition poisson_sampling_composition(RandomClosedSet& set, int n, RngStream& rng);

// ---- fragmentation ----------------------------------------------------------

using InnerSampler = std::function<Composition(int, RngStream&)>;

/// Each part r of `outer` replaced in place by an independent inner draw at r.
Composition fragment_sample(const Composition& outer, const InnerSampler& inner, RngStream& rng);

/// p''(lambda) = sum over segmentations of lambda into consecutive blocks of
/// outer(block sums) * prod inner(block).
template <class S>
CpfTable<S> fragment_cpf(const Cpf<S>& outer, const Cpf<S>& inner, int n);

// ---- arrangement ------------------------------------------------------------

/// Index j with probability weights[j] / sum(weights) (0-based).
/// Throws SamplerError when the weights have no positive mass.
std::size_t size_biased_pick(std::span<const double> weights, RngStream& rng);

/// Orders the parts of a partition as the self-similar Markov arrangement of
/// the (alpha, theta) partition structure: a size-biased pick goes to the right
/// end, then parts are added right to left, each part of size r of the
/// current remainder mu (k parts) chosen with probability
/// ((|mu|-r) tau + r (1-tau)) / (|mu| (1 - tau + (k-1) tau)), tau = alpha/(2 alpha + theta).
Composition arrange_partition(const Partition& partition, double alpha, double theta, RngStream& rng);

/// Exact law of arrange_partition's output.
template <class S>
std::map<Composition, S> arrangement_law(const Partition& partition, const S& alpha, const S& theta);

// ---- tables and replication -------------------------------------------------

/// Inverse-CDF sampler over a finite probability vector.
class TableSampler {
 public:
  explicit TableSampler(std::span<const double> probabilities);
  std::size_t operator()(RngStream& rng) const;

 private:
  std::vector<double> cdf_;
};

/// Counts of compositions of a fixed n, indexed like CpfTable.
struct CountTable {
  int n = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  explicit CountTable(int n_ = 0);
  void add(const Composition& c);
  CountTable& merge(const CountTable& other);
};

/// Runs `replicas` independent samplers, replica r on stream (seed, r), with
/// `draws` split evenly (remainder to the first replicas), and merges their
/// count tables. The result depends only on (seed, replicas, draws).
template <class Draw>
CountTable replicate_counts(int n, std::uint64_t seed, int replicas, std::uint64_t draws, Draw draw) {
  std::vector<std::future<CountTable>> jobs;
  const auto per = draws / static_cast<std::uint64_t>(replicas);
  const auto extra = draws % static_cast<std::uint64_t>(replicas);
  for (int r = 0; r < replicas; ++r) {
    const std::uint64_t mine = per + (static_cast<std::uint64_t>(r) < extra ? 1 : 0);
    jobs.push_back(std::async(std::launch::async, [=, &draw] {
      RngStream rng(seed, static_cast<std::uint64_t>(r));
      CountTable t(n);
      for (std::uint64_t i = 0; i < mine; ++i) t.add(draw(rng));
      return t;
    }));
  }
  CountTable out(n);
  for (auto& job : jobs) out.merge(job.get());
  return out;
}

extern template CpfTable<Rational> fragment_cpf<Rational>(const Cpf<Rational>&, const Cpf<Rational>&, int);
extern template CpfTable<double> fragment_cpf<double>(const Cpf<double>&, const Cpf<double>&, int);
extern template std::map<Composition, Rational> arrangement_law<Rational>(const Partition&,
                                                                          const Rational&,
                                                                          const Rational&);
extern template std::map<Composition, double> arrangement_law<double>(const Partition&, const double&,
                                                                      const double&);

}  // namespace sscomp
