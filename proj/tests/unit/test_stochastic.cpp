#include <cmath>
#include <map>
#include <memory>

#include "doctest.h"
#include "sscomp/errors.hpp"
#include "sscomp/levy.hpp"
#include "sscomp/stats.hpp"
#include "sscomp/stochastic.hpp"

using namespace sscomp;
using R = Rational;

namespace {

std::vector<double> exact_table(const Cpf<R>& cpf, int n) { return to_double(tabulate(cpf, n)).p; }

template <class Draw>
CountTable count(int n, std::uint64_t seed, std::uint64_t draws, Draw draw) {
  RngStream rng(seed);
  CountTable t(n);
  for (std::uint64_t i = 0; i < draws; ++i) t.add(draw(rng));
  return t;
}

double frequency(const CountTable& t, const Composition& c) {
  return static_cast<double>(t.counts[c.index()]) / static_cast<double>(t.total);
}

// |freq - p| within k binomial standard errors.
bool within_sigma(double freq, double p, std::uint64_t draws, double k = 3) {
  return std::abs(freq - p) <= k * std::sqrt(p * (1 - p) / static_cast<double>(draws));
}

}  // namespace

TEST_SUITE("stochastic") {

TEST_CASE("streams are deterministic and distinct") {
  RngStream a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    differs_c = differs_c || x != c();
    differs_d = differs_d || x != d();
  }
  CHECK(differs_c);
  CHECK(differs_d);
  RngStream u(1);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform();
    CHECK((v > 0 && v < 1));
  }
}

TEST_CASE("Bernoulli strings") {
  RngStream rng(7);
  for (int i = 0; i < 100; ++i) CHECK(sample_bernoulli_string(3.0, 1, rng) == Composition{1});
  const auto big = count(5, 11, 20000, [](RngStream& g) { return sample_bernoulli_string(1e6, 5, g); });
  CHECK(frequency(big, Composition{1, 1, 1, 1, 1}) > 0.999);
  const auto two = count(2, 12, 100000, [](RngStream& g) { return sample_bernoulli_string(1.0, 2, g); });
  CHECK(within_sigma(frequency(two, Composition{1, 1}), 0.5, 100000));
  const auto five = count(5, 13, 100000, [](RngStream& g) { return sample_bernoulli_string(2.0, 5, g); });
  CHECK(chi_square_gof(five.counts, exact_table(ewens_cpf(R(2)), 5)).passes());
}

TEST_CASE("renewal strings") {
  RngStream rng(3);
  std::uint64_t first_one = 0, first_two = 0;
  const std::uint64_t draws = 100000;
  for (std::uint64_t i = 0; i < draws; ++i) {
    const auto c = sample_renewal_string(0.5, 3, rng);
    // First renewal interval X is the first part when more than one part follows.
    if (c.length() > 1 && c.part(0) == 1) ++first_one;
    if (c.length() > 1 && c.part(0) == 2) ++first_two;
  }
  CHECK(within_sigma(static_cast<double>(first_one) / draws, 0.5, draws));
  CHECK(within_sigma(static_cast<double>(first_two) / draws, 0.125, draws));
  CHECK(sample_renewal_string(0.5, 1, rng) == Composition{1});
  const auto three = count(3, 4, draws, [](RngStream& g) { return sample_renewal_string(0.5, 3, g); });
  CHECK(chi_square_gof(three.counts, exact_table(renewal_cpf(R(1, 2)), 3)).passes());
}

TEST_CASE("decreasing-chain sampler") {
  RngStream rng(5);
  const auto one = to_double(one_block_pair<R>(6));
  for (int i = 0; i < 50; ++i) CHECK(sample_markov_composition(one, 6, rng) == Composition{6});
  const auto dm = to_double(two_param_stationary_pair(R(1, 2), R(1), 5));
  const MarkovCompositionSampler sampler(dm, 5);
  const auto t = count(5, 6, 200000, sampler);
  CHECK(chi_square_gof(t.counts, exact_table(markov_cpf(two_param_stationary_pair(R(1, 2), R(1), 5)), 5)).passes());
  const auto ewens = to_double(two_param_stationary_pair(R(0), R(1), 4));
  const auto e = count(4, 8, 100000, MarkovCompositionSampler(ewens, 4));
  CHECK(chi_square_gof(e.counts, exact_table(ewens_cpf(R(1)), 4)).passes());
  auto broken = dm;
  broken.q.at(3, 1) += 0.1;
  CHECK_THROWS_AS(MarkovCompositionSampler(broken, 5), SamplerError);
  CHECK_THROWS_AS(MarkovCompositionSampler(dm, 6), ParameterError);
}

TEST_CASE("GEM stick breaking") {
  RngStream rng(9);
  std::vector<double> first;
  for (int i = 0; i < 100000; ++i) {
    const auto v = sample_gem(0.5, 1.0, 6, rng);
    first.push_back(v[0]);
    double sum = 0;
    for (double x : v) {
      CHECK(x > 0);
      sum += x;
    }
    CHECK(sum < 1);
  }
  CHECK(estimate_mean(first).within(0.25));
  std::vector<double> uniform;
  for (int i = 0; i < 20000; ++i) uniform.push_back(sample_gem(0.0, 1.0, 1, rng)[0]);
  CHECK(ks_against(uniform, [](double x) { return x; }).passes());
  CHECK_THROWS_AS(sample_gem(1.0, 1.0, 2, rng), ParameterError);
}

TEST_CASE("GEM indexing resolved by the exact partition law") {
  // Kingman sampling from the GEM(alpha, theta) interval partition must give
  // the (alpha, theta) partition law. The alternative indexing
  // W_i ~ Beta(1-alpha, alpha + i theta) must not.
  // theta = 1/4 keeps the alternative sticks summable at a practical rate.
  const double a = 0.5, t = 0.25;
  const int n = 5;
  const auto partitions = enumerate_partitions(n);
  std::vector<double> expected;
  for (const auto& p : partitions) expected.push_back(partition_law(a, t, p));
  auto tally = [&](bool standard, std::uint64_t seed) {
    RngStream rng(seed);
    std::map<Partition, std::uint64_t> hits;
    for (int i = 0; i < 60000; ++i) {
      IntervalPartitionSample s;
      if (standard) {
        s = stick_breaking_partition(a, t, 0.05, rng);
      } else {
        auto state = std::make_shared<std::pair<int, double>>(0, 1.0);
        s.extend = [state, a, t](IntervalPartitionSample& self, RngStream& g) {
          auto& [k, remaining] = *state;
          ++k;
          const double left = 1 - remaining;
          const double v = remaining * g.beta(1 - a, a + k * t);
          self.intervals.push_back({left, left + v});
          remaining -= v;
          self.residual = remaining;
        };
        s.residual = 1;
        while (s.residual >= 0.05) s.extend(s, rng);
      }
      ++hits[rank(uniform_sampling_composition(s, n, rng))];
    }
    std::vector<std::uint64_t> counts;
    for (const auto& p : partitions) counts.push_back(hits[p]);
    return chi_square_gof(counts, expected);
  };
  CHECK(tally(true, 21).passes());
  CHECK_FALSE(tally(false, 22).passes());
}

TEST_CASE("largest frequency by stick breaking with exact stopping") {
  // V~_1 ~ Beta(1-alpha, alpha+theta) followed by a rescaled GEM(alpha, theta+alpha)
  // has the law of the GEM(alpha, theta) largest frequency.
  const double a = 0.5, t = 0.5;
  RngStream direct_rng(31), split_rng(32);
  std::vector<double> direct, split, direct_sq, split_sq;
  for (int i = 0; i < 40000; ++i) {
    const double x = sample_largest_frequency(a, t, direct_rng);
    const double v1 = split_rng.beta(1 - a, a + t);
    const double y = std::max(v1, (1 - v1) * sample_largest_frequency(a, t + a, split_rng));
    direct.push_back(x);
    split.push_back(y);
    direct_sq.push_back(x * x);
    split_sq.push_back(y * y);
  }
  const auto m1 = estimate_mean(direct), m2 = estimate_mean(split);
  const auto s1 = estimate_mean(direct_sq), s2 = estimate_mean(split_sq);
  const double se1 = std::hypot(m1.standard_error, m2.standard_error);
  const double se2 = std::hypot(s1.standard_error, s2.standard_error);
  CHECK(std::abs(m1.mean - m2.mean) <= 3 * se1);
  CHECK(std::abs(s1.mean - s2.mean) <= 3 * se2);
}

TEST_CASE("scale-invariant interval partition") {
  RngStream rng(17);
  std::vector<double> meander, gaps;
  for (int i = 0; i < 100000; ++i) {
    auto s = sample_scale_invariant_partition(1.0, 1e-3, rng);
    REQUIRE(s.meander == std::size_t{0});
    meander.push_back(s.intervals[0].length());
    CHECK(s.residual < 1e-3);
    for (std::size_t k = 1; k < s.intervals.size(); ++k) {
      CHECK(s.intervals[k].right == s.intervals[k - 1].left);
      if (i < 1000) gaps.push_back(std::log(s.intervals[k].right) - std::log(s.intervals[k].left));
    }
    if (i < 1000) gaps.push_back(-std::log(s.intervals[0].left));
  }
  CHECK(estimate_mean(meander).within(0.5));
  CHECK(ks_against(gaps, [](double x) { return 1 - std::exp(-x); }).passes());
}

TEST_CASE("uniform sampling of interval partitions") {
  RngStream rng(19);
  IntervalPartitionSample whole;
  whole.intervals = {{0, 1}};
  for (int i = 0; i < 20; ++i) CHECK(uniform_sampling_composition(whole, 4, rng) == Composition{4});
  IntervalPartitionSample halves;
  halves.intervals = {{0, 0.5}, {0.5, 1}};
  const auto t = count(2, 20, 100000, [&](RngStream& g) { return uniform_sampling_composition(halves, 2, g); });
  CHECK(within_sigma(frequency(t, Composition{1, 1}), 0.5, 100000));
  IntervalPartitionSample gap;
  gap.intervals = {{0, 0.5}};
  gap.residual = 0.5;
  CHECK_THROWS_AS(uniform_sampling_composition(gap, 2, rng), ParameterError);
  gap.residual = 0;  // inconsistent on purpose: the uncovered half must still be detected
  bool raised = false;
  for (int i = 0; i < 50 && !raised; ++i) {
    try {
      uniform_sampling_composition(gap, 2, rng);
    } catch (const SamplerError&) {
      raised = true;
    }
  }
  CHECK(raised);
  const auto ewens = count(5, 23, 50000, [](RngStream& g) {
    auto s = sample_scale_invariant_partition(1.0, 0.05, g);
    return uniform_sampling_composition(s, 5, g);
  });
  CHECK(chi_square_gof(ewens.counts, exact_table(ewens_cpf(R(1)), 5)).passes());
}

TEST_CASE("discovery indicators follow the potential function") {
  RngStream rng(29);
  const int n = 6;
  const std::uint64_t draws = 100000;
  std::vector<std::uint64_t> hits(n, 0);
  for (std::uint64_t i = 0; i < draws; ++i) {
    auto s = sample_scale_invariant_partition(1.0, 0.01, rng);
    const auto trace = uniform_sampling_trace(s, n, rng);
    for (int j = 0; j < n; ++j) hits[static_cast<std::size_t>(j)] += trace.discovery[static_cast<std::size_t>(j)];
  }
  for (int j = 1; j <= n; ++j)
    CHECK(within_sigma(static_cast<double>(hits[static_cast<std::size_t>(j - 1)]) / draws, 1.0 / j, draws));
}

namespace {
class EverywhereDense final : public RandomClosedSet {
 public:
  bool intersects(double, double, RngStream&) override { return true; }
};
}  // namespace

TEST_CASE("Poisson sampling of random sets") {
  RngStream rng(37);
  ScaleInvariantSet set(1.0);
  CHECK(poisson_sampling_composition(set, 1, rng) == Composition{1});
  EverywhereDense dense;
  CHECK(poisson_sampling_composition(dense, 6, rng) == Composition{1, 1, 1, 1, 1, 1});
  ScaleInvariantSet probe(2.0);
  probe.intersects(0.01, 0.01, rng);
  probe.intersects(50.0, 50.0, rng);
  CHECK(probe.atoms_below().back() < 0.01);
  CHECK(probe.atoms_above().back() > 50.0);
  for (std::size_t k = 1; k < probe.atoms_below().size(); ++k) CHECK(probe.atoms_below()[k] < probe.atoms_below()[k - 1]);
  const auto t = count(5, 41, 50000, [](RngStream& g) {
    ScaleInvariantSet s(1.0);
    return poisson_sampling_composition(s, 5, g);
  });
  CHECK(chi_square_gof(t.counts, exact_table(ewens_cpf(R(1)), 5)).passes());
}

TEST_CASE("fragmentation") {
  RngStream rng(43);
  const Composition outer{3, 1, 2};
  const InnerSampler keep = [](int r, RngStream&) { return Composition{r}; };
  const InnerSampler shatter = [](int r, RngStream&) { return Composition(std::vector<int>(static_cast<std::size_t>(r), 1)); };
  CHECK(fragment_sample(outer, keep, rng) == outer);
  CHECK(fragment_sample(outer, shatter, rng) == Composition{1, 1, 1, 1, 1, 1});
  const auto ewens = ewens_cpf(R(1));
  const auto inner = renewal_cpf(R(1, 2), true);
  for (int n = 1; n <= 7; ++n) {
    const auto same = fragment_cpf(ewens, one_block_cpf<R>(), n);
    CHECK(same.p == tabulate(ewens, n).p);
    CHECK(fragment_cpf(ewens, inner, n).total() == 1);
  }
  // Sampler against the exact product.
  const auto t = count(5, 47, 100000, [](RngStream& g) {
    const auto o = sample_bernoulli_string(1.0, 5, g);
    return fragment_sample(o, [](int r, RngStream& h) { return reverse(sample_renewal_string(0.5, r, h)); }, g);
  });
  CHECK(chi_square_gof(t.counts, to_double(fragment_cpf(ewens, inner, 5)).p).passes());
}

TEST_CASE("PD(0,theta) fragmented by PD(alpha,0) is the stationary (alpha, theta+alpha) structure") {
  for (const auto& [a, t] : std::vector<std::pair<R, R>>{{R(1, 2), R(1, 2)}, {R(1, 2), R(1)}, {R(1, 3), R(3, 2)}}) {
    const auto target = markov_cpf(two_param_stationary_pair(a, t + a, 8));
    for (int n = 1; n <= 7; ++n) {
      const auto frag = fragment_cpf(ewens_cpf(t), renewal_cpf(a), n);
      CHECK(frag.p == tabulate(target, n).p);
    }
  }
}

TEST_CASE("arrangement") {
  RngStream rng(53);
  CHECK(arrange_partition(Partition{4}, 0.5, 1.0, rng) == Composition{4});
  const auto law = arrangement_law(Partition{3, 2, 1, 1}, R(1, 3), R(1));
  R total(0);
  for (const auto& [c, p] : law) total += p;
  CHECK(total == 1);
  CHECK(law.size() == 12);
  // theta = 0: after the size-biased pick the remaining order is uniform.
  const auto zero = arrangement_law(Partition{2, 1, 1}, R(1, 2), R(0));
  CHECK(zero.at(Composition{1, 1, 2}) == R(1, 2));
  CHECK(zero.at(Composition{2, 1, 1}) == R(1, 4));
  CHECK(zero.at(Composition{1, 2, 1}) == R(1, 4));
  const std::uint64_t draws = 100000;
  const auto t = count(4, 59, draws, [](RngStream& g) { return arrange_partition(Partition{2, 1, 1}, 0.5, 0.0, g); });
  const double last_one = frequency(t, Composition{2, 1, 1}) + frequency(t, Composition{1, 2, 1});
  CHECK(within_sigma(frequency(t, Composition{2, 1, 1}) / last_one, 0.5, static_cast<std::uint64_t>(draws / 2)));
  CHECK_THROWS_AS(arrange_partition(Partition{2, 1}, 1.0, 0.0, rng), ParameterError);
}

TEST_CASE("arranged partition laws are the stationary CPFs") {
  for (const auto& [a, t] : std::vector<std::pair<R, R>>{{R(1, 2), R(1, 2)}, {R(1, 3), R(1, 3)}, {R(0), R(1)}}) {
    const int n = 6;
    std::vector<R> arranged(std::size_t{1} << (n - 1), R(0));
    for (const auto& lambda : enumerate_partitions(n))
      for (const auto& [c, p] : arrangement_law(lambda, a, t)) arranged[c.index()] += partition_law(a, t, lambda) * p;
    CHECK(arranged == tabulate(markov_cpf(two_param_stationary_pair(a, t + a, n)), n).p);
  }
}

TEST_CASE("strong sampling property of arranged samples") {
  // Conditionally on the multiset of parts, the last part is a size-biased pick.
  RngStream rng(61);
  const int n = 5;
  const auto partitions = enumerate_partitions(n);
  std::vector<double> weights;
  for (const auto& p : partitions) weights.push_back(partition_law(0.5, 0.5, p));
  const TableSampler pick(weights);
  std::map<Partition, std::map<int, std::uint64_t>> last;
  for (int i = 0; i < 100000; ++i) {
    const auto& lambda = partitions[pick(rng)];
    ++last[lambda][arrange_partition(lambda, 0.5, 0.5, rng).last()];
  }
  for (const auto& [lambda, hist] : last) {
    const auto distinct = lambda.distinct_parts();
    if (distinct.size() < 2) continue;
    std::vector<std::uint64_t> counts;
    std::vector<double> expected;
    for (int r : distinct) {
      counts.push_back(hist.count(r) ? hist.at(r) : 0);
      double mass = 0;
      for (int part : lambda.parts()) mass += part == r ? part : 0;
      expected.push_back(mass / n);
    }
    INFO(lambda.to_string());
    CHECK(chi_square_gof(counts, expected).passes());
  }
}

TEST_CASE("size-biased pick") {
  RngStream rng(67);
  const std::vector<double> w{2, 1};
  std::uint64_t zero = 0;
  const std::uint64_t draws = 100000;
  for (std::uint64_t i = 0; i < draws; ++i) zero += size_biased_pick(w, rng) == 0;
  CHECK(within_sigma(static_cast<double>(zero) / draws, 2.0 / 3, draws));
  const std::vector<double> single{5};
  for (int i = 0; i < 10; ++i) CHECK(size_biased_pick(single, rng) == 0);
  const std::vector<double> none{0, 0};
  CHECK_THROWS_AS(size_biased_pick(none, rng), SamplerError);
  const std::vector<double> equal(4, 1.0);
  std::vector<std::uint64_t> hits(4, 0);
  for (int i = 0; i < 40000; ++i) ++hits[size_biased_pick(equal, rng)];
  CHECK(chi_square_gof(hits, equal).passes());
}

TEST_CASE("replication is deterministic and merges associatively") {
  const auto draw = [](RngStream& g) { return sample_bernoulli_string(1.0, 4, g); };
  const auto a = replicate_counts(4, 99, 4, 10001, draw);
  const auto b = replicate_counts(4, 99, 4, 10001, draw);
  CHECK(a.counts == b.counts);
  CHECK(a.total == 10001);
  CountTable manual(4);
  for (int r = 3; r >= 0; --r) {
    RngStream rng(99, static_cast<std::uint64_t>(r));
    CountTable part(4);
    for (int i = 0; i < 2500 + (r == 0 ? 1 : 0); ++i) part.add(draw(rng));
    manual.merge(part);
  }
  CHECK(manual.counts == a.counts);
  CHECK_THROWS_AS(CountTable(17), CapExceeded);
  CountTable wrong(3);
  CHECK_THROWS_AS(wrong.add(Composition{2, 2}), ParameterError);
}

}  // TEST_SUITE
