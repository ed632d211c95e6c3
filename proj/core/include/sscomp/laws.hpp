#pragma once

// Exact laws over compositions: composition probability functions (CPFs),
// decrement matrices and the parametric families built from them.

#include <algorithm>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sscomp/composition.hpp"
#include "sscomp/errors.hpp"
#include "sscomp/scalar.hpp"

namespace sscomp {

/// A law over compositions of every supported n.
template <class S>
struct Cpf {
  std::string family;      // e.g. "ewens"
  std::string parameters;  // e.g. "theta=1"
  int max_n = 0;           // 0: every n
  std::function<S(const Composition&)> eval;

  bool supports(int n) const { return max_n == 0 || n <= max_n; }
  /// Throws ParameterError when c is beyond max_n.
  S operator()(const Composition& c) const;
  std::string tag() const { return parameters.empty() ? family : family + "(" + parameters + ")"; }
};

/// Values of a CPF on all compositions of one n, in enumeration order.
template <class S>
struct CpfTable {
  int n = 0;
  std::vector<S> p;

  const S& operator()(const Composition& c) const { return p[c.index()]; }
  S total() const;
};

template <class S>
CpfTable<S> tabulate(const Cpf<S>& cpf, int n, int cap = kDefaultEnumerationCap);

/// A CPF backed by tables for n = 1..tables.size(); tables[k] must have n = k+1.
template <class S>
Cpf<S> table_cpf(std::string family, std::vector<CpfTable<S>> tables);

/// Lower-triangular matrix m(n:r), 1 <= r <= n <= order.
template <class S>
class DecrementMatrix {
 public:
  DecrementMatrix() = default;
  explicit DecrementMatrix(int order)
      : order_(order), v_(static_cast<std::size_t>(order) * (order + 1) / 2, S(0)) {}

  int order() const { return order_; }
  const S& operator()(int n, int r) const { return v_[offset(n, r)]; }
  S& at(int n, int r) { return v_[offset(n, r)]; }
  S row_sum(int n) const {
    S s{0};
    for (int r = 1; r <= n; ++r) s += (*this)(n, r);
    return s;
  }

  friend bool operator==(const DecrementMatrix&, const DecrementMatrix&) = default;

 private:
  std::size_t offset(int n, int r) const {
    if (n < 1 || n > order_ || r < 1 || r > n)
      throw ParameterError("decrement matrix index (" + std::to_string(n) + ":" + std::to_string(r) +
                           ") outside order " + std::to_string(order_));
    return static_cast<std::size_t>(n) * (n - 1) / 2 + static_cast<std::size_t>(r - 1);
  }

  int order_ = 0;
  std::vector<S> v_;
};

/// Transition matrix q and initial law q* of the decreasing chain.
template <class S>
struct DecrementMatrixPair {
  DecrementMatrix<S> q;
  DecrementMatrix<S> q_star;

  /// Largest n for which the product formula can be evaluated.
  int max_n() const { return std::min(q.order() + 1, q_star.order()); }
};

DecrementMatrixPair<double> to_double(const DecrementMatrixPair<Rational>& dm);
CpfTable<double> to_double(const CpfTable<Rational>& t);

// ---- parametric families -------------------------------------------------

/// Bernoulli-digit (Ewens) CPF: theta^l n!/(theta)_n * prod 1/Lambda_j.
template <class S>
Cpf<S> ewens_cpf(const S& theta);

/// Renewal CPF lambda_l alpha^{l-1} prod (1-alpha)_{lambda_j - 1}/lambda_j!.
/// With `reversed`, p(lambda) is evaluated at the reversal of lambda.
template <class S>
Cpf<S> renewal_cpf(const S& alpha, bool reversed = false);

/// Product formula q*(n:lambda_l) prod_{k<l} q(Lambda_k : lambda_k).
template <class S>
Cpf<S> markov_cpf(DecrementMatrixPair<S> dm, std::string family = "markov",
                  std::string parameters = "");

/// Polya-Eggenberger rows q_{alpha,theta}(n:r), n <= order.
template <class S>
S polya_entry(const S& alpha, const S& theta, int n, int r);
template <class S>
DecrementMatrix<S> polya_q(const S& alpha, const S& theta, int order);

/// Decrement matrix of the (alpha, theta) regenerative composition structure.
template <class S>
S two_param_entry(const S& alpha, const S& theta, int n, int r);
template <class S>
DecrementMatrix<S> two_param_q(const S& alpha, const S& theta, int order);

/// Pair with q* := q: the regenerative (alpha, theta) structure.
template <class S>
DecrementMatrixPair<S> regenerative_pair(const S& alpha, const S& theta, int order);

/// (n) with probability one / (1,...,1) with probability one.
template <class S>
DecrementMatrixPair<S> one_block_pair(int order);
template <class S>
DecrementMatrixPair<S> singletons_pair(int order);
template <class S>
Cpf<S> one_block_cpf();
template <class S>
Cpf<S> singletons_cpf();

/// (alpha, theta) partition structure with parts in size-biased order,
/// read right to left.
template <class S>
Cpf<S> sibi_cpf(const S& alpha, const S& theta);

/// Symmetrisation of sibi_cpf over the distinct orderings of the parts.
template <class S>
S partition_law(const S& alpha, const S& theta, const Partition& partition);

/// Both sides of the recursions satisfied by the decrement matrices of every
/// Markovian composition structure, for all 1 <= r <= n <= n_max (needs
/// q and q* of order n_max + 1):
///   q(n:r)  = (r+1)/(n+1) q(n+1:r+1)  + (n+1-r)/(n+1) q(n+1:r)  + q(n+1:1) q(n:r)/(n+1)
///   q*(n:r) = (r+1)/(n+1) q*(n+1:r+1) + (n+1-r)/(n+1) q*(n+1:r) + q*(n+1:1) q(n:r)/(n+1)
template <class S>
struct RecursionSides {
  bool star;  // false: the q recursion, true: the q* recursion
  int n;
  int r;
  S lhs;
  S rhs;
};

template <class S>
std::vector<RecursionSides<S>> decrement_recursion_sides(const DecrementMatrixPair<S>& dm, int n_max);

/// Range checks shared by the families; throw ParameterError.
template <class S>
void require_two_param_range(const S& alpha, const S& theta);  // 0 <= a < 1, theta > -a

#define SSCOMP_LAWS_EXTERN(S)                                                              \
  extern template struct Cpf<S>;                                                           \
  extern template struct CpfTable<S>;                                                      \
  extern template class DecrementMatrix<S>;                                                \
  extern template CpfTable<S> tabulate<S>(const Cpf<S>&, int, int);                        \
  extern template Cpf<S> table_cpf<S>(std::string, std::vector<CpfTable<S>>);              \
  extern template Cpf<S> ewens_cpf<S>(const S&);                                           \
  extern template Cpf<S> renewal_cpf<S>(const S&, bool);                                   \
  extern template Cpf<S> markov_cpf<S>(DecrementMatrixPair<S>, std::string, std::string);  \
  extern template S polya_entry<S>(const S&, const S&, int, int);                          \
  extern template DecrementMatrix<S> polya_q<S>(const S&, const S&, int);                  \
  extern template S two_param_entry<S>(const S&, const S&, int, int);                      \
  extern template DecrementMatrix<S> two_param_q<S>(const S&, const S&, int);              \
  extern template DecrementMatrixPair<S> regenerative_pair<S>(const S&, const S&, int);    \
  extern template DecrementMatrixPair<S> one_block_pair<S>(int);                           \
  extern template DecrementMatrixPair<S> singletons_pair<S>(int);                          \
  extern template Cpf<S> one_block_cpf<S>();                                               \
  extern template Cpf<S> singletons_cpf<S>();                                              \
  extern template Cpf<S> sibi_cpf<S>(const S&, const S&);                                  \
  extern template S partition_law<S>(const S&, const S&, const Partition&);                \
  extern template void require_two_param_range<S>(const S&, const S&);                        \
  extern template std::vector<RecursionSides<S>> decrement_recursion_sides<S>(              \
      const DecrementMatrixPair<S>&, int);

SSCOMP_LAWS_EXTERN(Rational)
SSCOMP_LAWS_EXTERN(double)
#undef SSCOMP_LAWS_EXTERN

}  // namespace sscomp
