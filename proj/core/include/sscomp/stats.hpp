#pragma once

// Goodness-of-fit machinery for the Monte Carlo checks.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace sscomp {

inline constexpr double kMinCellExpectation = 5.0;
inline constexpr double kDefaultSignificance = 1e-3;

struct ChiSquareResult {
  double statistic = 0;
  int df = 0;
  double p_value = 1;
  int cells = 0;  // after pooling
  bool passes(double significance = kDefaultSignificance) const { return p_value > significance; }
};

/// Pearson statistic of counts against expected probabilities. Cells whose
/// expected count falls below `min_expected` are pooled into one cell; a pool
/// still too small is merged with the smallest remaining cell. Cells with zero
/// expected mass must have zero count (otherwise the statistic is infinite).
/// Throws ParameterError on an empty or mismatched table.
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> counts, std::span<const double> expected,
                               double min_expected = kMinCellExpectation);

/// Upper tail of the chi-square law, Q(df/2, x/2) (regularized incomplete gamma).
double chi_square_upper_tail(double x, int df);

/// Wilson-Hilferty cube-root normal approximation of the same tail. Absolute
/// error is below 7.5e-3 at df = 1, 6e-4 at df = 10 and 1e-4 from df = 60 on.
double chi_square_upper_tail_wh(double x, int df);

struct KsResult {
  double statistic = 0;
  double p_value = 1;
  bool passes(double significance = kDefaultSignificance) const { return p_value > significance; }
};

/// Kolmogorov's limiting upper tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_tail(double lambda);

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
KsResult ks_against(std::vector<double> sample, const std::function<double(double)>& cdf);

struct MeanEstimate {
  double mean = 0;
  double standard_error = 0;
  /// |mean - target| <= k standard errors.
  bool within(double target, double k = 3.0) const;
};

MeanEstimate estimate_mean(std::span<const double> xs);

}  // namespace sscomp
