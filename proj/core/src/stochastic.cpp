#include "sscomp/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <string>

#include "sscomp/errors.hpp"

namespace sscomp {

namespace {

void require_positive_n(int n) {
  if (n < 1) throw ParameterError("n must be positive, got " + std::to_string(n));
}

Composition from_digits(const std::vector<bool>& xi) {
  std::vector<int> parts;
  for (bool d : xi) {
    if (d)
      parts.push_back(1);
    else
      ++parts.back();
  }
  return Composition(std::move(parts));
}

std::vector<double> cumulative(std::span<const double> p, const std::string& what) {
  std::vector<double> cdf(p.size());
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0)) throw SamplerError(what + ": negative or NaN entry");
    s += p[i];
    cdf[i] = s;
  }
  if (std::abs(s - 1.0) > 1e-9) throw SamplerError(what + ": entries sum to " + std::to_string(s));
  return cdf;
}

std::size_t invert(const std::vector<double>& cdf, double u) {
  const double scaled = u * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), scaled);
  if (it == cdf.end()) --it;
  return static_cast<std::size_t>(it - cdf.begin());
}

}  // namespace

// ---- binary strings -------------------------------------------------------

Composition sample_bernoulli_string(double theta, int n, RngStream& rng) {
  require_positive_n(n);
  if (!(theta > 0)) throw ParameterError("theta must be positive");
  std::vector<bool> xi(static_cast<std::size_t>(n));
  xi[0] = true;
  for (int j = 2; j <= n; ++j) xi[static_cast<std::size_t>(j - 1)] = rng.uniform() < theta / (j + theta - 1);
  return from_digits(xi);
}

Composition sample_renewal_string(double alpha, int n, RngStream& rng) {
  require_positive_n(n);
  if (!(alpha > 0 && alpha < 1)) throw ParameterError("alpha must lie in (0,1)");
  std::vector<bool> xi(static_cast<std::size_t>(n));
  xi[0] = true;
  int run = 0;
  for (int j = 2; j <= n; ++j) {
    ++run;
    const bool renewal = rng.uniform() < alpha / run;
    xi[static_cast<std::size_t>(j - 1)] = renewal;
    if (renewal) run = 0;
  }
  return from_digits(xi);
}

MarkovCompositionSampler::MarkovCompositionSampler(const DecrementMatrixPair<double>& dm, int n) : n_(n) {
  require_positive_n(n);
  if (n > dm.q_star.order() || n - 1 > dm.q.order())
    throw ParameterError("decrement matrices too small for n=" + std::to_string(n));
  q_cdf_.resize(static_cast<std::size_t>(n));
  for (int m = 1; m < n; ++m) {
    std::vector<double> row(static_cast<std::size_t>(m));
    for (int r = 1; r <= m; ++r) row[static_cast<std::size_t>(r - 1)] = dm.q(m, r);
    q_cdf_[static_cast<std::size_t>(m)] = cumulative(row, "q row " + std::to_string(m));
  }
  std::vector<double> row(static_cast<std::size_t>(n));
  for (int r = 1; r <= n; ++r) row[static_cast<std::size_t>(r - 1)] = dm.q_star(n, r);
  q_star_cdf_ = cumulative(row, "q* row " + std::to_string(n));
}

Composition MarkovCompositionSampler::operator()(RngStream& rng) const {
  std::vector<int> reversed_parts;
  int r = static_cast<int>(invert(q_star_cdf_, rng.uniform())) + 1;
  reversed_parts.push_back(r);
  int m = n_ - r;
  while (m > 0) {
    r = static_cast<int>(invert(q_cdf_[static_cast<std::size_t>(m)], rng.uniform())) + 1;
    reversed_parts.push_back(r);
    m -= r;
  }
  std::reverse(reversed_parts.begin(), reversed_parts.end());
  return Composition(std::move(reversed_parts));
}

Composition sample_markov_composition(const DecrementMatrixPair<double>& dm, int n, RngStream& rng) {
  return MarkovCompositionSampler(dm, n)(rng);
}

// ---- stick breaking -------------------------------------------------------

StickBreaking::StickBreaking(double alpha, double theta) : alpha_(alpha), theta_(theta) {
  require_two_param_range(alpha, theta);
}

double StickBreaking::next(RngStream& rng) {
  ++index_;
  const double w = rng.beta(1 - alpha_, theta_ + index_ * alpha_);
  const double v = remaining_ * w;
  remaining_ -= v;
  return v;
}

std::vector<double> sample_gem(double alpha, double theta, int k, RngStream& rng) {
  StickBreaking stick(alpha, theta);
  std::vector<double> v(static_cast<std::size_t>(std::max(k, 0)));
  for (auto& x : v) x = stick.next(rng);
  return v;
}

double sample_largest_frequency(double alpha, double theta, RngStream& rng) {
  StickBreaking stick(alpha, theta);
  double best = 0;
  while (stick.remaining() > best && stick.remaining() > 0) best = std::max(best, stick.next(rng));
  return best;
}

// ---- interval partitions --------------------------------------------------

std::optional<std::size_t> IntervalPartitionSample::locate(double x) const {
  for (std::size_t i = 0; i < intervals.size(); ++i)
    if (intervals[i].left < x && x < intervals[i].right) return i;
  return std::nullopt;
}

IntervalPartitionSample sample_scale_invariant_partition(double theta, double cutoff, RngStream& rng) {
  if (!(theta > 0)) throw ParameterError("theta must be positive");
  if (!(cutoff > 0 && cutoff < 1)) throw ParameterError("cutoff must lie in (0,1)");
  IntervalPartitionSample out;
  auto step = [theta](IntervalPartitionSample& s, RngStream& r) {
    const double right = s.residual;
    const double left = right * std::exp(-r.exponential(theta));
    s.intervals.push_back({left, right});
    s.residual = left;
  };
  out.residual = 1.0;
  step(out, rng);
  out.meander = 0;
  while (out.residual >= cutoff) step(out, rng);
  out.extend = step;
  return out;
}

IntervalPartitionSample stick_breaking_partition(double alpha, double theta, double cutoff, RngStream& rng) {
  if (!(cutoff > 0 && cutoff < 1)) throw ParameterError("cutoff must lie in (0,1)");
  IntervalPartitionSample out;
  auto stick = std::make_shared<StickBreaking>(alpha, theta);
  auto step = [stick](IntervalPartitionSample& s, RngStream& r) {
    const double left = 1.0 - stick->remaining();
    const double v = stick->next(r);
    s.intervals.push_back({left, left + v});
    s.residual = stick->remaining();
  };
  out.residual = 1.0;
  while (out.residual >= cutoff) step(out, rng);
  out.extend = step;
  return out;
}

namespace {

std::size_t locate_or_extend(IntervalPartitionSample& partition, double u, RngStream& rng) {
  if (auto i = partition.locate(u)) return *i;
  if (!partition.extend) throw SamplerError("uniform point " + std::to_string(u) + " fell outside every interval");
  // Heavy-tailed laws may need very many extensions; only new intervals are
  // searched, and extension stops once it no longer shrinks the residual.
  int stalled = 0;
  for (long steps = 0; stalled < 1000 && steps < 50'000'000; ++steps) {
    const std::size_t before = partition.intervals.size();
    const double residual = partition.residual;
    partition.extend(partition, rng);
    for (std::size_t i = before; i < partition.intervals.size(); ++i)
      if (partition.intervals[i].left < u && u < partition.intervals[i].right) return i;
    stalled = partition.residual < residual ? 0 : stalled + 1;
  }
  throw SamplerError("interval partition failed to cover the point " + std::to_string(u));
}

}  // namespace

UniformSamplingTrace uniform_sampling_trace(IntervalPartitionSample& partition, int n, RngStream& rng,
                                            double tolerance) {
  require_positive_n(n);
  if (!partition.extend && partition.residual > tolerance / n)
    throw ParameterError("static interval partition leaves mass " + std::to_string(partition.residual) +
                         " uncovered");
  std::vector<std::size_t> hit(static_cast<std::size_t>(n));
  UniformSamplingTrace trace;
  trace.discovery.resize(static_cast<std::size_t>(n));
  std::vector<std::size_t> seen;
  for (int j = 0; j < n; ++j) {
    const std::size_t i = locate_or_extend(partition, rng.uniform(), rng);
    hit[static_cast<std::size_t>(j)] = i;
    const bool fresh = std::find(seen.begin(), seen.end(), i) == seen.end();
    trace.discovery[static_cast<std::size_t>(j)] = fresh;
    if (fresh) seen.push_back(i);
  }
  std::sort(seen.begin(), seen.end(), [&](std::size_t a, std::size_t b) {
    return partition.intervals[a].left < partition.intervals[b].left;
  });
  std::vector<int> parts;
  for (std::size_t i : seen)
    parts.push_back(static_cast<int>(std::count(hit.begin(), hit.end(), i)));
  trace.composition = Composition(std::move(parts));
  return trace;
}

Composition uniform_sampling_composition(IntervalPartitionSample& partition, int n, RngStream& rng,
                                         double tolerance) {
  return uniform_sampling_trace(partition, n, rng, tolerance).composition;
}

double tagged_gap_length(IntervalPartitionSample& partition, RngStream& rng) {
  return partition.intervals[locate_or_extend(partition, rng.uniform(), rng)].length();
}

// ---- scale-invariant Poisson set ------------------------------------------

ScaleInvariantSet::ScaleInvariantSet(double theta) : theta_(theta) {
  if (!(theta > 0)) throw ParameterError("theta must be positive");
}

void ScaleInvariantSet::extend_below(double a, RngStream& rng) {
  // Generate until one atom lies below a, so every atom in [a, 1] is known.
  while (below_.empty() || below_.back() >= a) {
    const double from = below_.empty() ? 1.0 : below_.back();
    below_.push_back(from * std::exp(-rng.exponential(theta_)));
  }
}

void ScaleInvariantSet::extend_above(double b, RngStream& rng) {
  while (above_.empty() || above_.back() <= b) {
    const double from = above_.empty() ? 1.0 : above_.back();
    above_.push_back(from * std::exp(rng.exponential(theta_)));
  }
}

bool ScaleInvariantSet::intersects(double a, double b, RngStream& rng) {
  if (!(a > 0 && a <= b)) throw ParameterError("query range must satisfy 0 < a <= b");
  if (a < 1) {
    extend_below(a, rng);
    for (double x : below_)
      if (x >= a && x <= b) return true;
  }
  if (b > 1) {
    extend_above(b, rng);
    for (double x : above_)
      if (x >= a && x <= b) return true;
  }
  return false;
}

Composition poisson_sampling_composition(RandomClosedSet& set, int n, RngStream& rng) {
  require_positive_n(n);
  std::vector<bool> xi(static_cast<std::size_t>(n));
  xi[0] = true;
  double eps = rng.exponential(1.0);
  for (int j = 2; j <= n; ++j) {
    const double next = eps + rng.exponential(1.0);
    xi[static_cast<std::size_t>(j - 1)] = set.intersects(eps, next, rng);
    eps = next;
  }
  return from_digits(xi);
}

// ---- fragmentation ----------------------------------------------------------

Composition fragment_sample(const Composition& outer, const InnerSampler& inner, RngStream& rng) {
  std::vector<int> parts;
  for (int r : outer.parts()) {
    const Composition piece = inner(r, rng);
    if (piece.size() != r) throw SamplerError("inner sampler returned a composition of the wrong size");
    parts.insert(parts.end(), piece.parts().begin(), piece.parts().end());
  }
  return Composition(std::move(parts));
}

template <class S>
CpfTable<S> fragment_cpf(const Cpf<S>& outer, const Cpf<S>& inner, int n) {
  const auto comps = enumerate_compositions(n);
  CpfTable<S> out{n, std::vector<S>(comps.size(), S(0))};
  for (const auto& c : comps) {
    const auto parts = c.parts();
    const int l = c.length();
    // Bit k set: a block boundary after part k (k = 0..l-2).
    for (std::uint64_t cut = 0; cut < (std::uint64_t{1} << (l - 1)); ++cut) {
      std::vector<int> block_sums;
      S inner_product(1);
      std::vector<int> block;
      for (int k = 0; k < l; ++k) {
        block.push_back(parts[static_cast<std::size_t>(k)]);
        if (k == l - 1 || (cut >> k & 1)) {
          const Composition b(block);
          inner_product *= inner(b);
          block_sums.push_back(b.size());
          block.clear();
        }
      }
      if (inner_product == S(0)) continue;
      out.p[c.index()] += outer(Composition(block_sums)) * inner_product;
    }
  }
  return out;
}

// ---- arrangement --------------------------------------------------------------

std::size_t size_biased_pick(std::span<const double> weights, RngStream& rng) {
  double total = 0;
  for (double w : weights) {
    if (!(w >= 0)) throw SamplerError("negative selection weight");
    total += w;
  }
  if (!(total > 0)) throw SamplerError("selection weights have no positive mass");
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0) return i;
  return 0;
}

namespace {

template <class S>
S arrangement_tau(const S& alpha, const S& theta) {
  require_two_param_range(alpha, theta);
  return alpha / (S(2) * alpha + theta);
}

template <class S>
S arrangement_weight(int mass, int k, int r, const S& tau) {
  return (S(mass - r) * tau + S(r) * (S(1) - tau)) / (S(mass) * (S(1) - tau + S(k - 1) * tau));
}

}  // namespace

Composition arrange_partition(const Partition& partition, double alpha, double theta, RngStream& rng) {
  const double tau = arrangement_tau(alpha, theta);
  std::vector<int> rest(partition.parts().begin(), partition.parts().end());
  if (rest.empty()) throw ParameterError("cannot arrange the empty partition");
  std::vector<double> w(rest.begin(), rest.end());
  std::size_t pick = size_biased_pick(w, rng);
  std::vector<int> reversed_parts{rest[pick]};
  rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
  while (!rest.empty()) {
    const int mass = std::accumulate(rest.begin(), rest.end(), 0);
    const int k = static_cast<int>(rest.size());
    w.assign(rest.size(), 0);
    double total = 0;
    for (std::size_t i = 0; i < rest.size(); ++i) total += w[i] = arrangement_weight(mass, k, rest[i], tau);
    if (std::abs(total - 1) > 1e-9) throw SamplerError("arrangement weights sum to " + std::to_string(total));
    pick = size_biased_pick(w, rng);
    reversed_parts.push_back(rest[pick]);
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  std::reverse(reversed_parts.begin(), reversed_parts.end());
  return Composition(std::move(reversed_parts));
}

namespace {

template <class S>
void arrangement_walk(std::vector<int> rest, std::vector<int> placed, const S& weight, const S& tau,
                      std::map<Composition, S>& out) {
  if (rest.empty()) {
    std::reverse(placed.begin(), placed.end());
    out[Composition(std::move(placed))] += weight;
    return;
  }
  const int mass = std::accumulate(rest.begin(), rest.end(), 0);
  const int k = static_cast<int>(rest.size());
  const bool first = placed.empty();
  for (std::size_t i = 0; i < rest.size(); ++i) {
    const S w = first ? S(rest[i]) / S(mass) : arrangement_weight(mass, k, rest[i], tau);
    if (w == S(0)) continue;
    auto next_rest = rest;
    next_rest.erase(next_rest.begin() + static_cast<std::ptrdiff_t>(i));
    auto next_placed = placed;
    next_placed.push_back(rest[i]);
    arrangement_walk(std::move(next_rest), std::move(next_placed), S(weight * w), tau, out);
  }
}

}  // namespace

template <class S>
std::map<Composition, S> arrangement_law(const Partition& partition, const S& alpha, const S& theta) {
  const S tau = arrangement_tau(alpha, theta);
  std::vector<int> rest(partition.parts().begin(), partition.parts().end());
  if (rest.empty()) throw ParameterError("cannot arrange the empty partition");
  std::map<Composition, S> out;
  arrangement_walk<S>(rest, {}, S(1), tau, out);
  return out;
}

// ---- tables ---------------------------------------------------------------------

TableSampler::TableSampler(std::span<const double> probabilities)
    : cdf_(cumulative(probabilities, "probability table")) {}

std::size_t TableSampler::operator()(RngStream& rng) const { return invert(cdf_, rng.uniform()); }

CountTable::CountTable(int n_) : n(n_) {
  if (n_ > kDefaultEnumerationCap)
    throw CapExceeded("count tables are limited to n <= " + std::to_string(kDefaultEnumerationCap));
  if (n_ > 0) counts.assign(std::size_t{1} << (n_ - 1), 0);
}

void CountTable::add(const Composition& c) {
  if (c.size() != n) throw ParameterError("composition " + c.to_string() + " is not of size " + std::to_string(n));
  ++counts[c.index()];
  ++total;
}

CountTable& CountTable::merge(const CountTable& other) {
  if (other.n != n) throw ParameterError("cannot merge count tables of different n");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  total += other.total;
  return *this;
}

template CpfTable<Rational> fragment_cpf<Rational>(const Cpf<Rational>&, const Cpf<Rational>&, int);
template CpfTable<double> fragment_cpf<double>(const Cpf<double>&, const Cpf<double>&, int);
template std::map<Composition, Rational> arrangement_law<Rational>(const Partition&, const Rational&,
                                                                   const Rational&);
template std::map<Composition, double> arrangement_law<double>(const Partition&, const double&, const double&);

}  // namespace sscomp
