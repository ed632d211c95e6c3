#pragma once

// Levy-exponent calculus for (delayed, stationary) regenerative sets after the
// transform x = 1 - exp(-y), and the decrement matrices it induces.
//
// Normalisation: the Levy data (d, nu) are only determined up to a positive
// factor. Exact mode reports every Phi value divided by Phi(1) ("phi1"),
// float mode reports absolute values of the data as given ("absolute"). All
// decrement matrices and potentials are ratios and do not depend on it.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sscomp/laws.hpp"
#include "sscomp/scalar.hpp"

namespace sscomp {

/// Tail x -> x^{-alpha} (1-x)^theta of the (alpha, theta) regenerative structure.
struct TwoParamTail {
  Rational alpha;
  Rational theta;
};

struct LevySpec {
  Rational drift{0};
  /// x -> nu~[x, 1] on (0, 1]; empty for a pure-drift subordinator.
  std::function<double(double)> tail;
  /// Optional (x, 1-x) -> nu~[x, 1], accurate when 1-x is tiny.
  std::function<double(double, double)> tail_split;
  /// Present when the tail has the closed form above (enables exact mode).
  std::optional<TwoParamTail> two_param;
  std::string label;

  static LevySpec two_parameter(const Rational& alpha, const Rational& theta);
  static LevySpec pure_drift(const Rational& d);
  static LevySpec generic(const Rational& drift, std::function<double(double)> tail,
                          std::string label);

  bool has_jumps() const { return static_cast<bool>(tail); }
  double tail_at(double x, double one_minus_x) const {
    return tail_split ? tail_split(x, one_minus_x) : tail(x);
  }
};

enum class PhiNormalization { phi1, absolute };
std::string to_string(PhiNormalization n);

template <class S>
struct ExponentTable {
  std::vector<S> phi;  // phi[s] for s = 0..N, phi[0] = 0
  PhiNormalization normalization = PhiNormalization::absolute;
};

/// Phi(s) = d s + s int_0^1 (1-x)^{s-1} nu~[x,1] dx for s = 0..N.
/// Exact mode needs a pure drift or a driftless two-parameter tail.
template <class S>
ExponentTable<S> levy_exponents(const LevySpec& spec, int N);

template <class S>
S levy_exponent(const LevySpec& spec, int s);

/// d s + s B(1 - alpha, s + theta), absolute, via std::beta.
double levy_exponent_closed_form(const LevySpec& spec, int s);

/// Phi(n:m) = C(n,m) sum_j (-1)^{j+1} C(m,j) Phi(n-m+j).
template <class S>
S levy_binomial(const ExponentTable<S>& table, int n, int m);
template <class S>
S levy_binomial(const LevySpec& spec, int n, int m);

/// m = int |log(1-x)| nu~(dx) = int_0^1 nu~[x,1]/(1-x) dx, and the drift,
/// both in the normalisation of levy_exponents<S>. Throws ParameterError when
/// m is infinite.
template <class S>
S levy_mean(const LevySpec& spec);
template <class S>
S levy_drift(const LevySpec& spec);

/// Law of the meander length A_1 (the stationary delay seen through 1 - e^{-X}).
template <class S>
struct MeanderLaw {
  std::function<S(int, int)> moment;     // (a, b) -> E[A^a (1-A)^b]
  S atom_at_zero = S(0);                 // P(A_1 = 0)
  std::function<double(double)> density;  // on (0, 1]; empty for a pure atom
  std::string label;
};

/// Beta(1 - alpha, theta), theta > 0.
template <class S>
MeanderLaw<S> beta_meander(const S& alpha, const S& theta);
/// A_1 = 0 almost surely.
template <class S>
MeanderLaw<S> drift_meander();
/// Law of A_1 under the stationary delay of `spec`.
template <class S>
MeanderLaw<S> meander_from_levy(const LevySpec& spec);

/// Psi(n:m) = C(n,m) E[A^m (1-A)^{n-m}].
template <class S>
S meander_moments(const MeanderLaw<S>& law, int n, int m);

/// q(n:m) = Phi(n:m)/Phi(n),  q*(n:m) = Psi(n:0) q(n:m) + Psi(n:m),  n <= N.
/// Throws ParameterError if Phi(n) = 0 or the law is not the stationary
/// delay of spec (first moment and atom are compared).
template <class S>
DecrementMatrixPair<S> stationary_pair(const LevySpec& spec, const MeanderLaw<S>& law, int N);

/// Stationary pair of the (alpha, theta) regenerative structure, theta > 0;
/// its partition structure is (alpha, theta - alpha).
template <class S>
DecrementMatrixPair<S> two_param_stationary_pair(const S& alpha, const S& theta, int N);

/// g(1) = 1, g(j) = Phi(j-1) / ((d + m)(j - 1)).
template <class S>
S potential_from_levy(const LevySpec& spec, int j);

/// f(j|i) = q(j-1 : j-i) g(j) / g(i): transitions of the increasing chain
/// visiting the 1s of the infinite binary code. `g` is indexed from 1
/// (g[0] unused).
template <class S>
S upchain_transition(const DecrementMatrixPair<S>& dm, const std::vector<S>& g, int i, int j);

/// Row-sum bookkeeping for f(.|i) truncated at J: the mass beyond J equals
/// q*(J : J-i+1)/g(i) (the chain's last visit below J+1 is i).
template <class S>
struct UpchainRowSum {
  int i = 0;
  int J = 0;
  S partial = S(0);  // sum_{j=i+1}^{J} f(j|i)
  S tail = S(0);     // remaining mass, from the killed chain
};

template <class S>
UpchainRowSum<S> upchain_row_sum(const DecrementMatrixPair<S>& dm, const std::vector<S>& g, int i,
                                 int J);

/// Adaptive integral over (0, 1); endpoint singularities allowed. A
/// singularity at 1 is resolved only by the two-argument form, which is
/// handed (x, 1-x) with 1-x computed without cancellation.
double integrate_unit(const std::function<double(double)>& f, double tolerance = 1e-12);
double integrate_unit(const std::function<double(double, double)>& f, double tolerance = 1e-12);

#define SSCOMP_LEVY_EXTERN(S)                                                                   \
  extern template ExponentTable<S> levy_exponents<S>(const LevySpec&, int);                     \
  extern template S levy_exponent<S>(const LevySpec&, int);                                     \
  extern template S levy_binomial<S>(const ExponentTable<S>&, int, int);                        \
  extern template S levy_binomial<S>(const LevySpec&, int, int);                                \
  extern template S levy_mean<S>(const LevySpec&);                                              \
  extern template S levy_drift<S>(const LevySpec&);                                             \
  extern template MeanderLaw<S> beta_meander<S>(const S&, const S&);                            \
  extern template MeanderLaw<S> drift_meander<S>();                                             \
  extern template MeanderLaw<S> meander_from_levy<S>(const LevySpec&);                          \
  extern template S meander_moments<S>(const MeanderLaw<S>&, int, int);                         \
  extern template DecrementMatrixPair<S> stationary_pair<S>(const LevySpec&, const MeanderLaw<S>&, \
                                                             int);                              \
  extern template DecrementMatrixPair<S> two_param_stationary_pair<S>(const S&, const S&, int); \
  extern template S potential_from_levy<S>(const LevySpec&, int);                               \
  extern template S upchain_transition<S>(const DecrementMatrixPair<S>&, const std::vector<S>&, \
                                          int, int);                                            \
  extern template UpchainRowSum<S> upchain_row_sum<S>(const DecrementMatrixPair<S>&,            \
                                                      const std::vector<S>&, int, int);

SSCOMP_LEVY_EXTERN(Rational)
SSCOMP_LEVY_EXTERN(double)
#undef SSCOMP_LEVY_EXTERN

}  // namespace sscomp
