#include "sscomp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "sscomp/errors.hpp"

namespace sscomp {

double chi_square_upper_tail(double x, int df) {
  if (df <= 0 || x <= 0) return 1.0;
  return boost::math::gamma_q(df / 2.0, x / 2.0);
}

double chi_square_upper_tail_wh(double x, int df) {
  if (df <= 0) return 1.0;
  if (x <= 0) return 1.0;
  const double k = df;
  const double z = (std::cbrt(x / k) - (1 - 2 / (9 * k))) / std::sqrt(2 / (9 * k));
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

ChiSquareResult chi_square_gof(std::span<const std::uint64_t> counts, std::span<const double> expected,
                               double min_expected) {
  if (counts.empty() || counts.size() != expected.size())
    throw ParameterError("chi-square needs matching nonempty count and expectation tables");
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
  const double mass = std::accumulate(expected.begin(), expected.end(), 0.0);
  if (!(total > 0) || !(mass > 0)) throw ParameterError("chi-square on an empty table");

  struct Cell {
    double observed;
    double expected;
  };
  std::vector<Cell> cells;
  Cell pool{0, 0};
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = total * expected[i] / mass;
    const double o = static_cast<double>(counts[i]);
    if (e == 0) {
      if (o > 0) return {std::numeric_limits<double>::infinity(), 0, 0, 0};
      continue;
    }
    if (e < min_expected)
      pool = {pool.observed + o, pool.expected + e};
    else
      cells.push_back({o, e});
  }
  if (pool.expected > 0) {
    if (pool.expected >= min_expected || cells.empty()) {
      cells.push_back(pool);
    } else {
      auto smallest = std::min_element(cells.begin(), cells.end(),
                                       [](const Cell& a, const Cell& b) { return a.expected < b.expected; });
      smallest->observed += pool.observed;
      smallest->expected += pool.expected;
    }
  }
  ChiSquareResult r;
  r.cells = static_cast<int>(cells.size());
  for (const auto& c : cells) r.statistic += (c.observed - c.expected) * (c.observed - c.expected) / c.expected;
  r.df = r.cells - 1;
  r.p_value = chi_square_upper_tail(r.statistic, r.df);
  return r;
}

double kolmogorov_tail(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2 * sum, 0.0, 1.0);
}

namespace {

double ks_p_value(double d, double effective_n) {
  const double root = std::sqrt(effective_n);
  return kolmogorov_tail((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ParameterError("KS test needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return {d, ks_p_value(d, na * nb / (na + nb))};
}

KsResult ks_against(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ParameterError("KS test needs a nonempty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return {d, ks_p_value(d, n)};
}

bool MeanEstimate::within(double target, double k) const {
  return std::abs(mean - target) <= k * standard_error;
}

MeanEstimate estimate_mean(std::span<const double> xs) {
  if (xs.size() < 2) throw ParameterError("mean estimate needs at least two values");
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1) / n)};
}

}  // namespace sscomp
