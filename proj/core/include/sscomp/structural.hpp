#pragma once

// Structural distribution machinery. For a composition structure derived from
// a random set Z, V is the length of the gap covering an independent uniform
// point; everything here is computed from its moments p(n) = E V^{n-1}, which
// are read off the one-part compositions: p(n) = P(C_n = (n)).

#include <optional>
#include <string>
#include <vector>

#include "sscomp/laws.hpp"
#include "sscomp/levy.hpp"

namespace sscomp {

template <class S>
class StructuralMoments {
 public:
  StructuralMoments() = default;
  /// values[k] = p(k+1); throws ParameterError unless values[0] == 1.
  explicit StructuralMoments(std::vector<S> values);

  int order() const { return static_cast<int>(p_.size()); }
  /// 1-based: p(1) = 1.
  const S& operator()(int n) const;
  std::span<const S> values() const { return p_; }

  /// First violation of complete monotonicity ((-1)^k Delta^k p >= 0) on
  /// the stored range, as text; nullopt when none.
  std::optional<std::string> monotonicity_violation() const;

 private:
  std::vector<S> p_;
};

/// mu(n, r) = E K_{n,r}, the expected number of parts of size r in C_n.
template <class S>
struct BlockCountRow {
  int n = 0;
  std::vector<S> mu;  // mu[r] for r = 1..n, mu[0] unused

  S total() const;  // mu_n = E K_n
  S balls() const;  // sum_r r mu(n, r), equals n
};

/// Law of the size of the box that loses the ball in a one-ball reduction.
template <class S>
struct DeletionLaw {
  int n = 0;
  std::vector<S> omega;  // omega[r] for r = 1..n
};

template <class S>
StructuralMoments<S> structural_moments(const Cpf<S>& cpf, int N);

/// mu(n,r) = C(n,r) sum_j (-1)^j C(n-r,j) p(r+j).
template <class S>
BlockCountRow<S> block_counts(const StructuralMoments<S>& moments, int n);

/// g(j) = E (1-V)^{j-1} = sum_i (-1)^i C(j-1,i) p(i+1).
template <class S>
S potential_from_cpf(const StructuralMoments<S>& moments, int j);

/// omega(n,n) = mu(n,n), omega(n,r) = omega(n,r+1) + mu(n,r) - mu(n-1,r).
/// `prev` may be empty (n = 1). Throws ParameterError on a negative value.
template <class S>
DeletionLaw<S> deletion_law(const BlockCountRow<S>& current, const BlockCountRow<S>& prev);

/// P(L_n = r), r = 1..n, by enumeration (index 0 unused).
template <class S>
std::vector<S> last_part_law(const Cpf<S>& cpf, int n);

/// P(P_n = r) = r mu(n,r)/n for a part picked proportionally to its size.
template <class S>
std::vector<S> size_biased_part_law(const BlockCountRow<S>& row);

/// E K_{n,r} by enumerating the CPF (the oracle for block_counts).
template <class S>
BlockCountRow<S> block_counts_by_enumeration(const Cpf<S>& cpf, int n);

template <class S>
struct Reconstruction {
  DecrementMatrixPair<S> dm;  // q of order n, q* of order n+1
  Cpf<S> cpf;                 // supports compositions of size <= n
  bool one_block = false;
};

/// Rebuilds the self-similar Markov structure of order n from p(1..n+1):
/// q*(n':r) = r mu(n',r)/n', then the q* recursion solved for q. The result is
/// validated (nonnegativity, unit row sums, q recursion) before it is
/// returned. Throws ReconstructionError if q*(n'+1:1) = 0 for a law that is
/// not one-block, or if validation fails.
template <class S>
Reconstruction<S> reconstruct_markov(const StructuralMoments<S>& moments, int n);

struct DensityReport {
  bool pass = true;
  std::size_t monotone_violations = 0;
  double worst_increase = 0;  // largest increase of (1-x) phi(x) along the grid
  double worst_x = 0;
  double total_mass = 0;  // atom + integral of the density
  std::string detail;
};

/// (1-x) phi(x) must be nonincreasing on a uniform grid of `grid` interior
/// points and the total mass must be 1 within 1e-9.
DensityReport structural_density_check(const MeanderLaw<double>& law, int grid = 10000);

#define SSCOMP_STRUCTURAL_EXTERN(S)                                                              \
  extern template class StructuralMoments<S>;                                                    \
  extern template struct BlockCountRow<S>;                                                       \
  extern template StructuralMoments<S> structural_moments<S>(const Cpf<S>&, int);                \
  extern template BlockCountRow<S> block_counts<S>(const StructuralMoments<S>&, int);            \
  extern template S potential_from_cpf<S>(const StructuralMoments<S>&, int);                     \
  extern template DeletionLaw<S> deletion_law<S>(const BlockCountRow<S>&, const BlockCountRow<S>&); \
  extern template std::vector<S> last_part_law<S>(const Cpf<S>&, int);                           \
  extern template std::vector<S> size_biased_part_law<S>(const BlockCountRow<S>&);               \
  extern template BlockCountRow<S> block_counts_by_enumeration<S>(const Cpf<S>&, int);           \
  extern template Reconstruction<S> reconstruct_markov<S>(const StructuralMoments<S>&, int);

SSCOMP_STRUCTURAL_EXTERN(Rational)
SSCOMP_STRUCTURAL_EXTERN(double)
#undef SSCOMP_STRUCTURAL_EXTERN

}  // namespace sscomp
