// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria (capped at 255).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sscomp/levy.hpp"
#include "sscomp/records.hpp"
#include "sscomp/stats.hpp"
#include "sscomp/stochastic.hpp"
#include "sscomp/structural.hpp"
#include "sscomp/verify.hpp"

using namespace sscomp;
using R = Rational;

namespace {

// Seeds of the sampling criteria.
constexpr std::uint64_t kSeedUniformSampling = 20240901;
constexpr std::uint64_t kSeedPoissonSampling = 20240902;
constexpr std::uint64_t kSeedMeander = 20240903;
constexpr std::uint64_t kSeedTagged = 20240904;
constexpr std::uint64_t kSeedArranged = 20240905;
constexpr std::uint64_t kSeedUniformOrder = 20240906;
constexpr int kReplicas = 4;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Family {
  std::string name;
  Cpf<R> cpf;
  LevySpec levy;
};

std::vector<Family> families() {
  std::vector<Family> out;
  for (const R& theta : {R(1, 2), R(1), R(2)})
    out.push_back({"ewens(theta=" + format_scalar(theta) + ")", ewens_cpf(theta), LevySpec::two_parameter(R(0), theta)});
  for (const R& alpha : {R(1, 3), R(1, 2)})
    out.push_back({"renewal(alpha=" + format_scalar(alpha) + ")", renewal_cpf(alpha), LevySpec::two_parameter(alpha, alpha)});
  for (const auto& [a, t] : std::vector<std::pair<R, R>>{{R(1, 2), R(1)}, {R(1, 3), R(2, 3)}})
    out.push_back({"stationary(" + format_scalar(a) + "," + format_scalar(t) + ")",
                   markov_cpf(two_param_stationary_pair(a, t, 12)), LevySpec::two_parameter(a, t)});
  return out;
}

void fail(Outcome& o, const std::string& what) {
  if (o.pass) o.detail = what;
  o.pass = false;
}

void require(Outcome& o, const CheckReport& r) {
  if (!r.pass) fail(o, r.name + " " + r.scope + (r.witness ? " at " + r.witness->where : ""));
}

std::string chi_detail(const ChiSquareResult& g) {
  std::ostringstream s;
  s << "chi2=" << g.statistic << " df=" << g.df << " p=" << g.p_value;
  return s.str();
}

std::vector<double> exact_table(const Cpf<R>& cpf, int n) { return to_double(tabulate(cpf, n)).p; }

// ---- exact criteria ----------------------------------------------------------

Outcome normalization() {
  Outcome o;
  for (const auto& f : families()) require(o, check_normalization(f.cpf, 10));
  return o;
}

Outcome self_similarity() {
  Outcome o;
  for (const auto& f : families()) {
    require(o, check_uniform_consistency(f.cpf, 9));
    require(o, check_right_consistency(f.cpf, 9));
  }
  const auto control = check_right_consistency(markov_cpf(regenerative_pair(R(1, 2), R(1), 10), "regenerative"), 9);
  if (control.pass || !control.witness) fail(o, "regenerative control (1/2,1) not rejected");
  require(o, check_right_consistency(markov_cpf(regenerative_pair(R(0), R(1), 10), "regenerative"), 9));
  if (o.pass) o.detail = "control witness at " + control.witness->where + ", difference " + control.witness->difference;
  return o;
}

Outcome decrement_calculus() {
  Outcome o;
  for (const auto& [a, t] : std::vector<std::pair<R, R>>{{R(1, 2), R(1)}, {R(1, 3), R(2, 3)}, {R(1, 2), R(0)}, {R(0), R(1)}}) {
    const auto spec = LevySpec::two_parameter(a, t);
    const auto table = levy_exponents<R>(spec, 10);
    const auto q = two_param_q(a, t, 10);
    double worst = 0;
    for (int n = 1; n <= 10; ++n)
      for (int m = 1; m <= n; ++m) {
        if (levy_binomial(table, n, m) / table.phi[static_cast<std::size_t>(n)] != q(n, m))
          fail(o, "exact q mismatch at (" + std::to_string(n) + ":" + std::to_string(m) + ")");
        const double ratio = levy_binomial<double>(spec, n, m) / levy_exponent<double>(spec, n);
        worst = std::max(worst, std::abs(ratio - to_double(q(n, m))));
      }
    if (worst > 1e-9) fail(o, "float q off by " + std::to_string(worst));
    if (t > 0) require(o, check_decrement_recursions(two_param_stationary_pair(a, t, 11), 10));
  }
  return o;
}

Outcome q_star_identity() {
  Outcome o;
  for (const auto& [a, t] : std::vector<std::pair<R, R>>{{R(1, 2), R(1)}, {R(1, 3), R(2, 3)}}) {
    const auto polya = polya_q(a, t - a, 10);
    require(o, check_equal_matrices(two_param_stationary_pair(a, t, 10).q_star, polya, 10, "q*-closed-form"));
    const auto generic = stationary_pair(LevySpec::two_parameter(a, t), beta_meander(a, t), 10);
    require(o, check_equal_matrices(generic.q_star, polya, 10, "q*-from-levy"));
  }
  return o;
}

Outcome last_part_is_size_biased() {
  Outcome o;
  for (const auto& f : families()) {
    require(o, check_theorem_SL(f.cpf, 9));
    const auto m = structural_moments(f.cpf, 9);
    BlockCountRow<R> prev;
    for (int n = 1; n <= 9; ++n) {
      const auto row = block_counts(m, n);
      const auto omega = deletion_law(row, prev);
      for (int r = 1; r <= n; ++r)
        if (omega.omega[static_cast<std::size_t>(r)] != R(r) * row.mu[static_cast<std::size_t>(r)] / R(n))
          fail(o, f.name + ": deletion law at n=" + std::to_string(n));
      prev = row;
    }
  }
  return o;
}

Outcome reconstruction() {
  Outcome o;
  for (const auto& f : families()) {
    const auto rec = reconstruct_markov(structural_moments(f.cpf, 9), 8);
    require(o, check_equal_cpfs(rec.cpf, f.cpf, 8, "round-trip " + f.name));
  }
  return o;
}

Outcome potentials() {
  Outcome o;
  double worst = 0;
  for (const auto& f : families()) {
    const auto m = structural_moments(f.cpf, 10);
    for (int j = 1; j <= 10; ++j) {
      const R from_moments = potential_from_cpf(m, j);
      const R from_counts = j == 1 ? block_counts(m, 1).total() : block_counts(m, j).total() - block_counts(m, j - 1).total();
      const double from_levy = potential_from_levy<double>(f.levy, j);
      if (from_moments != from_counts) fail(o, f.name + ": E(1-V)^(j-1) != mu_j - mu_(j-1) at j=" + std::to_string(j));
      worst = std::max(worst, std::abs(from_levy - to_double(from_moments)));
    }
  }
  if (worst > 1e-8) fail(o, "levy potential off by " + std::to_string(worst));
  for (const R& theta : {R(1, 2), R(1), R(2)}) {
    const auto m = structural_moments(ewens_cpf(theta), 10);
    for (int j = 1; j <= 10; ++j)
      if (potential_from_cpf(m, j) != theta / (R(j - 1) + theta)) fail(o, "ewens closed form at j=" + std::to_string(j));
  }
  for (const R& alpha : {R(1, 3), R(1, 2)}) {
    const auto m = structural_moments(renewal_cpf(alpha), 10);
    for (int j = 1; j <= 10; ++j)
      if (potential_from_cpf(m, j) != oracle::rising(alpha, j - 1) / oracle::factorial(j - 1))
        fail(o, "renewal closed form at j=" + std::to_string(j));
  }
  if (o.pass) {
    std::ostringstream s;
    s << "max float deviation " << worst;
    o.detail = s.str();
  }
  return o;
}

Outcome fragmentation() {
  Outcome o;
  const auto outer = ewens_cpf(R(1));
  const auto inner = renewal_cpf(R(1, 2), true);
  for (int n = 1; n <= 6; ++n) {
    const auto fragmented = fragment_cpf(outer, inner, n);
    const auto target = tabulate(markov_cpf(two_param_stationary_pair(R(1, 2), R(1), n)), n);
    for (const auto& c : enumerate_compositions(n))
      if (fragmented(c) != target(c)) {
        fail(o, "n=" + std::to_string(n) + " at " + c.to_string() + ": fragment " + format_scalar(fragmented(c)) +
                    " vs stationary " + format_scalar(target(c)));
        return o;
      }
  }
  return o;
}

// ---- sampling criteria ------------------------------------------------------
// Each returns its outcome plus a transcript; identical seeds must give
// identical transcripts.

struct Sampled {
  Outcome outcome;
  std::string transcript;
};

Sampled uniform_sampling_construction() {
  const int n = 5;
  const auto expected = exact_table(ewens_cpf(R(1)), n);
  const auto t = replicate_counts(n, kSeedUniformSampling, kReplicas, 200000, [](RngStream& g) {
    auto s = sample_scale_invariant_partition(1.0, 0.01, g);
    return uniform_sampling_composition(s, n, g);
  });
  const auto gof = chi_square_gof(t.counts, expected);
  return {{gof.passes(), "uniform sampling " + chi_detail(gof)}, format_count_table(t, expected, RecordFormat::tsv, &gof)};
}

Sampled poisson_sampling_construction() {
  const int n = 5;
  const auto expected = exact_table(ewens_cpf(R(1)), n);
  const auto t = replicate_counts(n, kSeedPoissonSampling, kReplicas, 200000, [](RngStream& g) {
    ScaleInvariantSet set(1.0);
    return poisson_sampling_composition(set, n, g);
  });
  const auto gof = chi_square_gof(t.counts, expected);
  return {{gof.passes(), "Poisson sampling " + chi_detail(gof)}, format_count_table(t, expected, RecordFormat::tsv, &gof)};
}

Sampled meander_is_tagged_gap() {
  const int draws = 100000;
  std::vector<double> meander, tagged;
  RngStream a(kSeedMeander), b(kSeedTagged);
  for (int i = 0; i < draws; ++i) {
    auto s = sample_scale_invariant_partition(1.0, 1e-3, a);
    meander.push_back(s.intervals[*s.meander].length());
    auto u = sample_scale_invariant_partition(1.0, 1e-3, b);
    tagged.push_back(tagged_gap_length(u, b));
  }
  std::vector<double> squares;
  for (double x : meander) squares.push_back(x * x);
  const auto ks = ks_two_sample(meander, tagged);
  const auto m1 = estimate_mean(meander);
  const auto m2 = estimate_mean(squares);
  Outcome o{ks.passes() && m1.within(0.5) && m2.within(1.0 / 3), ""};
  std::ostringstream s;
  s.precision(17);
  s << "KS D=" << ks.statistic << " p=" << ks.p_value << " E[A]=" << m1.mean << " E[A^2]=" << m2.mean;
  o.detail = s.str();
  return {o, s.str()};
}

Sampled arranged_two_parameter() {
  const int n = 6;
  const auto partitions = enumerate_partitions(n);
  std::vector<double> weights;
  for (const auto& p : partitions) weights.push_back(partition_law(0.5, 0.5, p));
  const TableSampler pick(weights);
  const auto expected = exact_table(markov_cpf(two_param_stationary_pair(R(1, 2), R(1), n)), n);
  const auto t = replicate_counts(n, kSeedArranged, kReplicas, 200000, [&](RngStream& g) {
    return arrange_partition(partitions[pick(g)], 0.5, 0.5, g);
  });
  const auto gof = chi_square_gof(t.counts, expected);
  Outcome o{gof.passes(), "arranged " + chi_detail(gof)};
  std::string transcript = format_count_table(t, expected, RecordFormat::tsv, &gof);

  // (alpha, 0): given the last part, the remaining parts are in uniform order.
  const Partition lambda{3, 2, 1, 1};
  const std::uint64_t draws = 100000;
  RngStream rng(kSeedUniformOrder);
  CountTable u(lambda.size());
  for (std::uint64_t i = 0; i < draws; ++i) u.add(arrange_partition(lambda, 0.5, 0.0, rng));
  std::map<int, std::uint64_t> by_last;
  for (const auto& c : enumerate_compositions(lambda.size())) by_last[c.last()] += u.counts[c.index()];
  for (const auto& c : distinct_arrangements(lambda)) {
    const auto rest = distinct_arrangements(lambda.without(c.last())).size();
    const double p = 1.0 / static_cast<double>(rest);
    const auto m = static_cast<double>(by_last[c.last()]);
    const double freq = static_cast<double>(u.counts[c.index()]) / m;
    if (std::abs(freq - p) > 3 * std::sqrt(p * (1 - p) / m)) {
      o.pass = false;
      o.detail += "; remainder order not uniform at " + c.to_string();
    }
  }
  transcript += format_count_table(u, {}, RecordFormat::tsv);
  return {o, transcript};
}

// ---- driver -----------------------------------------------------------------

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& run) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.2fs", secs);
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << name << " [" << timing << "]";
  if (!o.detail.empty()) std::cout << "  " << o.detail;
  std::cout << std::endl;
}

Outcome within(double secs, double limit, Outcome o) {
  if (secs > limit) fail(o, "runtime " + std::to_string(secs) + "s over " + std::to_string(limit) + "s");
  return o;
}

template <class F>
std::function<Outcome()> timed(double limit, F f) {
  return [=] {
    const auto start = std::chrono::steady_clock::now();
    Outcome o = f();
    return within(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), limit, o);
  };
}

}  // namespace

int main() {
  std::vector<std::string> transcripts;
  auto sampled = [&](double limit, Sampled (*f)()) {
    return timed(limit, [&transcripts, f] {
      auto s = f();
      transcripts.push_back(s.transcript);
      return s.outcome;
    });
  };

  report(1, "normalization", timed(5, normalization));
  report(2, "self-similarity certification", self_similarity);
  report(3, "decrement calculus", decrement_calculus);
  report(4, "q* identity", q_star_identity);
  report(5, "last part is size-biased", last_part_is_size_biased);
  report(6, "reconstruction round trip", reconstruction);
  report(7, "potential function agreement", potentials);
  report(8, "fragmentation identity", timed(30, fragmentation));
  report(9, "Monte Carlo constructions", [&] {
    Outcome a = sampled(60, uniform_sampling_construction)();
    Outcome b = sampled(60, poisson_sampling_construction)();
    return Outcome{a.pass && b.pass, a.detail + "; " + b.detail};
  });
  report(10, "meander is the tagged gap", sampled(600, meander_is_tagged_gap));
  report(11, "arrangement algorithm", sampled(600, arranged_two_parameter));
  report(12, "determinism", [&] {
    const std::vector<Sampled (*)()> reruns{uniform_sampling_construction, poisson_sampling_construction, meander_is_tagged_gap, arranged_two_parameter};
    if (transcripts.size() != reruns.size()) return Outcome{false, "sampling criteria did not all complete"};
    for (std::size_t k = 0; k < reruns.size(); ++k)
      if (reruns[k]().transcript != transcripts[k])
        return Outcome{false, "rerun " + std::to_string(k + 1) + " differs"};
    return Outcome{true, std::to_string(reruns.size()) + " transcripts byte-identical"};
  });
  return failures > 255 ? 255 : failures;
}
