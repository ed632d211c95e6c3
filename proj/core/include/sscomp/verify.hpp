#pragma once

// Exact consistency checks. Each check sweeps compositions in enumeration
// order and keeps the worst violation, so a failing report always carries the
// same witness for the same input.

#include <optional>
#include <string>
#include <vector>

#include "sscomp/laws.hpp"

namespace sscomp {

inline constexpr double kFloatCheckTolerance = 1e-9;

struct Witness {
  std::string where;  // composition or matrix entry
  std::string lhs;
  std::string rhs;
  std::string difference;
  double magnitude = 0;
};

struct CheckReport {
  std::string name;
  std::string scope;  // family tag and n range
  bool pass = true;
  ArithmeticMode mode = ArithmeticMode::exact;
  std::optional<Witness> witness;  // worst violation; present iff !pass
  std::vector<std::string> notes;
};

/// Keeps the worse of two reports (a failure beats a pass, larger magnitude
/// beats smaller); notes are concatenated.
CheckReport merge_reports(CheckReport a, const CheckReport& b);

/// Sum over compositions of n equals one, for every 1 <= n <= n_max.
template <class S>
CheckReport check_normalization(const Cpf<S>& cpf, int n_max);

/// p(l_1..l_k) = p(l_1..l_k + 1) + p(l_1..l_k, 1) for all |lambda| < n_max.
template <class S>
CheckReport check_right_consistency(const Cpf<S>& cpf, int n_max);

/// p_{n-1}(lambda) = sum_mu p_n(mu) kappa(mu, lambda) for 2 <= n <= n_max.
template <class S>
CheckReport check_uniform_consistency(const Cpf<S>& cpf, int n_max);

/// p(lambda) = p(l_1 + 1, l_2, ...) + p(1, l_1, ...); additionally confirms
/// that the verdict equals right consistency of the reversed law, recording a
/// failed note (and failing) if the duality is contradicted.
template <class S>
CheckReport check_left_consistency(const Cpf<S>& cpf, int n_max);

/// Both decrement recursions entrywise for n <= n_max (matrices of order n_max+1).
template <class S>
CheckReport check_decrement_recursions(const DecrementMatrixPair<S>& dm, int n_max);

/// Law of the last part equals the size-biased part law r E K_{n,r} / n, n <= n_max.
template <class S>
CheckReport check_theorem_SL(const Cpf<S>& cpf, int n_max);

/// Two CPFs agree on every composition of n <= n_max.
template <class S>
CheckReport check_equal_cpfs(const Cpf<S>& a, const Cpf<S>& b, int n_max, std::string name = "equal-cpf");

/// Two decrement matrices agree entrywise on rows 1..n_max.
template <class S>
CheckReport check_equal_matrices(const DecrementMatrix<S>& a, const DecrementMatrix<S>& b, int n_max,
                                 std::string name = "equal-matrix");

/// The law of the reversed composition.
template <class S>
Cpf<S> reversed_cpf(const Cpf<S>& cpf);

#define SSCOMP_VERIFY_EXTERN(S)                                                                     \
  extern template CheckReport check_normalization<S>(const Cpf<S>&, int);                           \
  extern template CheckReport check_right_consistency<S>(const Cpf<S>&, int);                       \
  extern template CheckReport check_uniform_consistency<S>(const Cpf<S>&, int);                     \
  extern template CheckReport check_left_consistency<S>(const Cpf<S>&, int);                        \
  extern template CheckReport check_decrement_recursions<S>(const DecrementMatrixPair<S>&, int);    \
  extern template CheckReport check_theorem_SL<S>(const Cpf<S>&, int);                              \
  extern template CheckReport check_equal_cpfs<S>(const Cpf<S>&, const Cpf<S>&, int, std::string); \
  extern template CheckReport check_equal_matrices<S>(const DecrementMatrix<S>&,                    \
                                                      const DecrementMatrix<S>&, int, std::string); \
  extern template Cpf<S> reversed_cpf<S>(const Cpf<S>&);

SSCOMP_VERIFY_EXTERN(Rational)
SSCOMP_VERIFY_EXTERN(double)
#undef SSCOMP_VERIFY_EXTERN

}  // namespace sscomp
