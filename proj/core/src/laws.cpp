#include "sscomp/laws.hpp"

#include <utility>

#include "sscomp/errors.hpp"

namespace sscomp {

namespace {

template <class S>
std::string fmt(const S& x) {
  return format_scalar(x);
}

}  // namespace

template <class S>
S Cpf<S>::operator()(const Composition& c) const {
  if (c.empty()) throw ParameterError("CPF evaluated at the empty composition");
  if (!supports(c.size()))
    throw ParameterError(tag() + " supports n <= " + std::to_string(max_n) + ", got " +
                         std::to_string(c.size()));
  return eval(c);
}

template <class S>
S CpfTable<S>::total() const {
  S s{0};
  for (const auto& x : p) s += x;
  return s;
}

template <class S>
CpfTable<S> tabulate(const Cpf<S>& cpf, int n, int cap) {
  CpfTable<S> t;
  t.n = n;
  auto comps = enumerate_compositions(n, cap);
  t.p.reserve(comps.size());
  for (const auto& c : comps) t.p.push_back(cpf(c));
  return t;
}

template <class S>
Cpf<S> table_cpf(std::string family, std::vector<CpfTable<S>> tables) {
  for (std::size_t k = 0; k < tables.size(); ++k)
    if (tables[k].n != static_cast<int>(k) + 1)
      throw ParameterError("table_cpf expects tables for n = 1, 2, ... in order");
  auto shared = std::make_shared<const std::vector<CpfTable<S>>>(std::move(tables));
  Cpf<S> cpf;
  cpf.family = std::move(family);
  cpf.max_n = static_cast<int>(shared->size());
  cpf.eval = [shared](const Composition& c) { return (*shared)[c.size() - 1](c); };
  return cpf;
}

DecrementMatrixPair<double> to_double(const DecrementMatrixPair<Rational>& dm) {
  DecrementMatrixPair<double> out{DecrementMatrix<double>(dm.q.order()),
                                  DecrementMatrix<double>(dm.q_star.order())};
  for (int n = 1; n <= dm.q.order(); ++n)
    for (int r = 1; r <= n; ++r) out.q.at(n, r) = to_double(dm.q(n, r));
  for (int n = 1; n <= dm.q_star.order(); ++n)
    for (int r = 1; r <= n; ++r) out.q_star.at(n, r) = to_double(dm.q_star(n, r));
  return out;
}

CpfTable<double> to_double(const CpfTable<Rational>& t) {
  CpfTable<double> out;
  out.n = t.n;
  out.p.reserve(t.p.size());
  for (const auto& x : t.p) out.p.push_back(to_double(x));
  return out;
}

template <class S>
void require_two_param_range(const S& alpha, const S& theta) {
  if (alpha < S(0) || !(alpha < S(1)))
    throw ParameterError("alpha must lie in [0, 1), got " + fmt(alpha));
  if (!(theta > -alpha))
    throw ParameterError("theta must exceed -alpha, got theta = " + fmt(theta));
}

template <class S>
Cpf<S> ewens_cpf(const S& theta) {
  if (!(theta > S(0))) throw ParameterError("ewens theta must be positive, got " + fmt(theta));
  Cpf<S> cpf;
  cpf.family = "ewens";
  cpf.parameters = "theta=" + fmt(theta);
  cpf.eval = [theta](const Composition& c) {
    const int n = c.size();
    S p = factorial<S>(n) / rising(theta, n);
    int prefix = 0;
    for (int part : c.parts()) {
      prefix += part;
      p *= theta;
      p /= S(prefix);
    }
    return p;
  };
  return cpf;
}

template <class S>
Cpf<S> renewal_cpf(const S& alpha, bool reversed) {
  if (!(alpha > S(0)) || !(alpha < S(1)))
    throw ParameterError("renewal alpha must lie in (0, 1), got " + fmt(alpha));
  Cpf<S> cpf;
  cpf.family = reversed ? "renewal-reversed" : "renewal";
  cpf.parameters = "alpha=" + fmt(alpha);
  cpf.eval = [alpha, reversed](const Composition& c) {
    auto parts = c.parts();
    const int l = c.length();
    const int last = reversed ? parts.front() : parts.back();
    S p(last);
    for (int k = 1; k < l; ++k) p *= alpha;
    for (int part : parts) p *= rising(S(1) - alpha, part - 1) / factorial<S>(part);
    return p;
  };
  return cpf;
}

template <class S>
Cpf<S> markov_cpf(DecrementMatrixPair<S> dm, std::string family, std::string parameters) {
  Cpf<S> cpf;
  cpf.family = std::move(family);
  cpf.parameters = std::move(parameters);
  cpf.max_n = dm.max_n();
  auto shared = std::make_shared<const DecrementMatrixPair<S>>(std::move(dm));
  cpf.eval = [shared](const Composition& c) {
    auto parts = c.parts();
    S p = shared->q_star(c.size(), c.last());
    int prefix = 0;
    for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
      prefix += parts[k];
      p *= shared->q(prefix, parts[k]);
    }
    return p;
  };
  return cpf;
}

template <class S>
S polya_entry(const S& alpha, const S& theta, int n, int r) {
  return binomial<S>(n - 1, r - 1) * rising(theta + alpha, n - r) * rising(S(1) - alpha, r - 1) /
         rising(theta + S(1), n - 1);
}

template <class S>
DecrementMatrix<S> polya_q(const S& alpha, const S& theta, int order) {
  require_two_param_range(alpha, theta);
  DecrementMatrix<S> m(order);
  for (int n = 1; n <= order; ++n)
    for (int r = 1; r <= n; ++r) m.at(n, r) = polya_entry(alpha, theta, n, r);
  return m;
}

template <class S>
S two_param_entry(const S& alpha, const S& theta, int n, int r) {
  // At theta = 0 the entry r = n is 0/0; its limit is (1-alpha)_{n-1}/(n-1)!.
  if (theta == S(0) && r == n) return rising(S(1) - alpha, n - 1) / factorial<S>(n - 1);
  return binomial<S>(n, r) * rising(S(1) - alpha, r - 1) / rising(theta + S(n - r), r) *
         (S(n - r) * alpha + S(r) * theta) / S(n);
}

template <class S>
DecrementMatrix<S> two_param_q(const S& alpha, const S& theta, int order) {
  if (alpha < S(0) || !(alpha < S(1)))
    throw ParameterError("alpha must lie in [0, 1), got " + fmt(alpha));
  if (theta < S(0)) throw ParameterError("theta must be nonnegative, got " + fmt(theta));
  if (alpha + theta == S(0)) throw ParameterError("(alpha, theta) = (0, 0) is the trivial structure");
  DecrementMatrix<S> m(order);
  for (int n = 1; n <= order; ++n)
    for (int r = 1; r <= n; ++r) m.at(n, r) = two_param_entry(alpha, theta, n, r);
  return m;
}

template <class S>
DecrementMatrixPair<S> regenerative_pair(const S& alpha, const S& theta, int order) {
  auto q = two_param_q(alpha, theta, order);
  return {q, q};
}

template <class S>
DecrementMatrixPair<S> one_block_pair(int order) {
  DecrementMatrix<S> m(order);
  for (int n = 1; n <= order; ++n) m.at(n, n) = S(1);
  return {m, m};
}

template <class S>
DecrementMatrixPair<S> singletons_pair(int order) {
  DecrementMatrix<S> m(order);
  for (int n = 1; n <= order; ++n) m.at(n, 1) = S(1);
  return {m, m};
}

template <class S>
Cpf<S> one_block_cpf() {
  Cpf<S> cpf;
  cpf.family = "one-block";
  cpf.eval = [](const Composition& c) { return c.length() == 1 ? S(1) : S(0); };
  return cpf;
}

template <class S>
Cpf<S> singletons_cpf() {
  Cpf<S> cpf;
  cpf.family = "singletons";
  cpf.eval = [](const Composition& c) { return c.length() == c.size() ? S(1) : S(0); };
  return cpf;
}

template <class S>
Cpf<S> sibi_cpf(const S& alpha, const S& theta) {
  require_two_param_range(alpha, theta);
  Cpf<S> cpf;
  cpf.family = "size-biased";
  cpf.parameters = "alpha=" + fmt(alpha) + ",theta=" + fmt(theta);
  cpf.eval = [alpha, theta](const Composition& c) {
    const int l = c.length();
    S p{1};
    int prefix = 0;
    for (int k = 1; k <= l; ++k) {
      const int part = c.part(k - 1);
      prefix += part;
      p *= polya_entry(alpha, theta + S(l - k) * alpha, prefix, part);
    }
    return p;
  };
  return cpf;
}

template <class S>
S partition_law(const S& alpha, const S& theta, const Partition& partition) {
  auto sibi = sibi_cpf(alpha, theta);
  S total{0};
  for (const auto& c : distinct_arrangements(partition)) total += sibi(c);
  return total;
}

template <class S>
std::vector<RecursionSides<S>> decrement_recursion_sides(const DecrementMatrixPair<S>& dm, int n_max) {
  if (dm.q.order() < n_max + 1 || dm.q_star.order() < n_max + 1)
    throw ParameterError("recursion check up to n = " + std::to_string(n_max) +
                         " needs matrices of order " + std::to_string(n_max + 1));
  std::vector<RecursionSides<S>> out;
  for (int n = 1; n <= n_max; ++n) {
    const S n1(n + 1);
    for (int r = 1; r <= n; ++r) {
      const S a = S(r + 1) / n1;
      const S b = S(n + 1 - r) / n1;
      out.push_back({false, n, r, dm.q(n, r),
                     a * dm.q(n + 1, r + 1) + b * dm.q(n + 1, r) + dm.q(n + 1, 1) * dm.q(n, r) / n1});
      out.push_back({true, n, r, dm.q_star(n, r),
                     a * dm.q_star(n + 1, r + 1) + b * dm.q_star(n + 1, r) +
                         dm.q_star(n + 1, 1) * dm.q(n, r) / n1});
    }
  }
  return out;
}

#define SSCOMP_LAWS_INSTANTIATE(S)                                                  \
  template struct Cpf<S>;                                                           \
  template struct CpfTable<S>;                                                      \
  template class DecrementMatrix<S>;                                                \
  template CpfTable<S> tabulate<S>(const Cpf<S>&, int, int);                        \
  template Cpf<S> table_cpf<S>(std::string, std::vector<CpfTable<S>>);              \
  template Cpf<S> ewens_cpf<S>(const S&);                                           \
  template Cpf<S> renewal_cpf<S>(const S&, bool);                                   \
  template Cpf<S> markov_cpf<S>(DecrementMatrixPair<S>, std::string, std::string);  \
  template S polya_entry<S>(const S&, const S&, int, int);                          \
  template DecrementMatrix<S> polya_q<S>(const S&, const S&, int);                  \
  template S two_param_entry<S>(const S&, const S&, int, int);                      \
  template DecrementMatrix<S> two_param_q<S>(const S&, const S&, int);              \
  template DecrementMatrixPair<S> regenerative_pair<S>(const S&, const S&, int);    \
  template DecrementMatrixPair<S> one_block_pair<S>(int);                           \
  template DecrementMatrixPair<S> singletons_pair<S>(int);                          \
  template Cpf<S> one_block_cpf<S>();                                               \
  template Cpf<S> singletons_cpf<S>();                                              \
  template Cpf<S> sibi_cpf<S>(const S&, const S&);                                  \
  template S partition_law<S>(const S&, const S&, const Partition&);                \
  template void require_two_param_range<S>(const S&, const S&);                        \
  template std::vector<RecursionSides<S>> decrement_recursion_sides<S>(              \
      const DecrementMatrixPair<S>&, int);

SSCOMP_LAWS_INSTANTIATE(Rational)
SSCOMP_LAWS_INSTANTIATE(double)

}  // namespace sscomp
