#include "sscomp/structural.hpp"

#include <algorithm>
#include <cmath>

#include "sscomp/errors.hpp"

namespace sscomp {

namespace {

template <class S>
bool is_negative(const S& x) {
  if constexpr (is_exact_v<S>) {
    return x < 0;
  } else {
    return x < -1e-12;
  }
}

template <class S>
bool differs(const S& a, const S& b) {
  if constexpr (is_exact_v<S>) {
    return a != b;
  } else {
    return std::abs(a - b) > 1e-9;
  }
}

}  // namespace

template <class S>
StructuralMoments<S>::StructuralMoments(std::vector<S> values) : p_(std::move(values)) {
  if (p_.empty() || p_[0] != S(1)) throw ParameterError("structural moments need p(1) = 1");
}

template <class S>
const S& StructuralMoments<S>::operator()(int n) const {
  if (n < 1 || n > order())
    throw ParameterError("structural moment p(" + std::to_string(n) + ") not available (order " +
                         std::to_string(order()) + ")");
  return p_[static_cast<std::size_t>(n - 1)];
}

template <class S>
std::optional<std::string> StructuralMoments<S>::monotonicity_violation() const {
  // (-1)^k Delta^k p(n) is E[V^{n-1} (1-V)^k]; all must be nonnegative.
  std::vector<S> diff(p_);
  for (int k = 0; k < order(); ++k) {
    for (std::size_t i = 0; i < diff.size(); ++i)
      if (is_negative(diff[i]))
        return "(-1)^" + std::to_string(k) + " Delta^" + std::to_string(k) + " p(" +
               std::to_string(i + 1) + ") = " + format_scalar(diff[i]) + " < 0";
    for (std::size_t i = 0; i + 1 < diff.size(); ++i) diff[i] = diff[i] - diff[i + 1];
    diff.pop_back();
  }
  return std::nullopt;
}

template <class S>
S BlockCountRow<S>::total() const {
  S s(0);
  for (int r = 1; r <= n; ++r) s += mu[static_cast<std::size_t>(r)];
  return s;
}

template <class S>
S BlockCountRow<S>::balls() const {
  S s(0);
  for (int r = 1; r <= n; ++r) s += S(r) * mu[static_cast<std::size_t>(r)];
  return s;
}

template <class S>
StructuralMoments<S> structural_moments(const Cpf<S>& cpf, int N) {
  std::vector<S> p;
  p.reserve(static_cast<std::size_t>(N));
  for (int n = 1; n <= N; ++n) p.push_back(cpf(Composition{n}));
  return StructuralMoments<S>(std::move(p));
}

template <class S>
BlockCountRow<S> block_counts(const StructuralMoments<S>& moments, int n) {
  BlockCountRow<S> row;
  row.n = n;
  row.mu.assign(static_cast<std::size_t>(n) + 1, S(0));
  for (int r = 1; r <= n; ++r) {
    S sum(0);
    for (int j = 0; j <= n - r; ++j) {
      S term = binomial<S>(n - r, j) * moments(r + j);
      if (j % 2 == 0) {
        sum += term;
      } else {
        sum -= term;
      }
    }
    row.mu[static_cast<std::size_t>(r)] = binomial<S>(n, r) * sum;
  }
  return row;
}

template <class S>
S potential_from_cpf(const StructuralMoments<S>& moments, int j) {
  if (j < 1) throw ParameterError("potential needs j >= 1");
  S g(0);
  for (int i = 0; i <= j - 1; ++i) {
    S term = binomial<S>(j - 1, i) * moments(i + 1);
    if (i % 2 == 0) {
      g += term;
    } else {
      g -= term;
    }
  }
  return g;
}

template <class S>
DeletionLaw<S> deletion_law(const BlockCountRow<S>& current, const BlockCountRow<S>& prev) {
  const int n = current.n;
  if (prev.n != n - 1) throw ParameterError("deletion_law needs consecutive rows");
  DeletionLaw<S> law;
  law.n = n;
  law.omega.assign(static_cast<std::size_t>(n) + 1, S(0));
  law.omega[static_cast<std::size_t>(n)] = current.mu[static_cast<std::size_t>(n)];
  for (int r = n - 1; r >= 1; --r) {
    law.omega[static_cast<std::size_t>(r)] = law.omega[static_cast<std::size_t>(r + 1)] +
                                             current.mu[static_cast<std::size_t>(r)] -
                                             prev.mu[static_cast<std::size_t>(r)];
  }
  for (int r = 1; r <= n; ++r)
    if (is_negative(law.omega[static_cast<std::size_t>(r)]))
      throw ParameterError("negative deletion probability at r = " + std::to_string(r) +
                           ": block counts do not come from a consistent pair");
  return law;
}

template <class S>
std::vector<S> last_part_law(const Cpf<S>& cpf, int n) {
  std::vector<S> law(static_cast<std::size_t>(n) + 1, S(0));
  for (const auto& c : enumerate_compositions(n)) law[static_cast<std::size_t>(c.last())] += cpf(c);
  return law;
}

template <class S>
std::vector<S> size_biased_part_law(const BlockCountRow<S>& row) {
  std::vector<S> law(static_cast<std::size_t>(row.n) + 1, S(0));
  for (int r = 1; r <= row.n; ++r)
    law[static_cast<std::size_t>(r)] = S(r) * row.mu[static_cast<std::size_t>(r)] / S(row.n);
  return law;
}

template <class S>
BlockCountRow<S> block_counts_by_enumeration(const Cpf<S>& cpf, int n) {
  BlockCountRow<S> row;
  row.n = n;
  row.mu.assign(static_cast<std::size_t>(n) + 1, S(0));
  for (const auto& c : enumerate_compositions(n)) {
    const S p = cpf(c);
    for (int part : c.parts()) row.mu[static_cast<std::size_t>(part)] += p;
  }
  return row;
}

template <class S>
Reconstruction<S> reconstruct_markov(const StructuralMoments<S>& moments, int n) {
  if (n < 1) throw ParameterError("reconstruction needs n >= 1");
  if (moments.order() < n + 1)
    throw ParameterError("reconstruction of order " + std::to_string(n) + " needs p(1.." +
                         std::to_string(n + 1) + ")");

  bool one_block = true;
  for (int k = 1; k <= n + 1; ++k) one_block = one_block && moments(k) == S(1);
  if (one_block) {
    Reconstruction<S> out;
    out.dm = one_block_pair<S>(n + 1);
    out.cpf = markov_cpf(out.dm, "reconstructed", "one-block");
    out.cpf.max_n = n;
    out.one_block = true;
    return out;
  }

  DecrementMatrixPair<S> dm{DecrementMatrix<S>(n), DecrementMatrix<S>(n + 1)};
  for (int m = 1; m <= n + 1; ++m) {
    auto row = block_counts(moments, m);
    auto law = size_biased_part_law(row);
    for (int r = 1; r <= m; ++r) dm.q_star.at(m, r) = law[static_cast<std::size_t>(r)];
  }
  for (int m = 1; m <= n; ++m) {
    const S pivot = dm.q_star(m + 1, 1);
    if (pivot == S(0))
      throw ReconstructionError("q*(" + std::to_string(m + 1) +
                                ":1) = 0: moments do not come from a self-similar Markov law");
    const S m1(m + 1);
    for (int r = 1; r <= m; ++r) {
      const S rest = dm.q_star(m, r) - S(r + 1) / m1 * dm.q_star(m + 1, r + 1) -
                     S(m + 1 - r) / m1 * dm.q_star(m + 1, r);
      dm.q.at(m, r) = rest * m1 / pivot;
    }
  }

  for (int m = 1; m <= n; ++m) {
    for (int r = 1; r <= m; ++r)
      if (is_negative(dm.q(m, r)))
        throw ReconstructionError("negative q(" + std::to_string(m) + ":" + std::to_string(r) +
                                  ") = " + format_scalar(dm.q(m, r)));
    if (differs(dm.q.row_sum(m), S(1)))
      throw ReconstructionError("row " + std::to_string(m) + " of q sums to " +
                                format_scalar(dm.q.row_sum(m)));
  }
  for (int m = 1; m <= n + 1; ++m) {
    for (int r = 1; r <= m; ++r)
      if (is_negative(dm.q_star(m, r)))
        throw ReconstructionError("negative q*(" + std::to_string(m) + ":" + std::to_string(r) + ")");
    if (differs(dm.q_star.row_sum(m), S(1)))
      throw ReconstructionError("row " + std::to_string(m) + " of q* sums to " +
                                format_scalar(dm.q_star.row_sum(m)));
  }
  if (n >= 2) {
    DecrementMatrixPair<S> trimmed{dm.q, dm.q_star};
    for (const auto& side : decrement_recursion_sides(trimmed, n - 1))
      if (!side.star && differs(side.lhs, side.rhs))
        throw ReconstructionError("q recursion fails at (" + std::to_string(side.n) + ":" +
                                  std::to_string(side.r) + ")");
  }

  Reconstruction<S> out;
  out.dm = dm;
  out.cpf = markov_cpf(dm, "reconstructed");
  out.cpf.max_n = n;
  return out;
}

DensityReport structural_density_check(const MeanderLaw<double>& law, int grid) {
  DensityReport report;
  report.total_mass = law.atom_at_zero;
  if (law.density) {
    double prev = 0;
    bool first = true;
    for (int k = 1; k <= grid; ++k) {
      const double x = static_cast<double>(k) / (grid + 1);
      const double h = (1.0 - x) * law.density(x);
      if (!first) {
        const double increase = h - prev;
        if (increase > 1e-12 * std::max(1.0, std::abs(prev))) {
          ++report.monotone_violations;
          if (increase > report.worst_increase) {
            report.worst_increase = increase;
            report.worst_x = x;
          }
        }
      }
      prev = h;
      first = false;
    }
    report.total_mass += integrate_unit(law.density);
  }
  const bool mass_ok = std::abs(report.total_mass - 1.0) <= 1e-9;
  report.pass = report.monotone_violations == 0 && mass_ok;
  if (report.monotone_violations)
    report.detail = "(1-x)phi(x) increases at " + std::to_string(report.monotone_violations) +
                    " grid points; worst at x = " + std::to_string(report.worst_x);
  if (!mass_ok)
    report.detail += (report.detail.empty() ? "" : "; ") + std::string("total mass ") +
                     format_scalar(report.total_mass);
  return report;
}

#define SSCOMP_STRUCTURAL_INSTANTIATE(S)                                                   \
  template class StructuralMoments<S>;                                                     \
  template struct BlockCountRow<S>;                                                        \
  template StructuralMoments<S> structural_moments<S>(const Cpf<S>&, int);                 \
  template BlockCountRow<S> block_counts<S>(const StructuralMoments<S>&, int);             \
  template S potential_from_cpf<S>(const StructuralMoments<S>&, int);                      \
  template DeletionLaw<S> deletion_law<S>(const BlockCountRow<S>&, const BlockCountRow<S>&); \
  template std::vector<S> last_part_law<S>(const Cpf<S>&, int);                            \
  template std::vector<S> size_biased_part_law<S>(const BlockCountRow<S>&);                \
  template BlockCountRow<S> block_counts_by_enumeration<S>(const Cpf<S>&, int);            \
  template Reconstruction<S> reconstruct_markov<S>(const StructuralMoments<S>&, int);

SSCOMP_STRUCTURAL_INSTANTIATE(Rational)
SSCOMP_STRUCTURAL_INSTANTIATE(double)

}  // namespace sscomp
