#include "sscomp/levy.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>

#include "sscomp/errors.hpp"

namespace sscomp {

namespace {

double pow_or_one(double base, double exponent) {
  return exponent == 0.0 ? 1.0 : std::pow(base, exponent);
}

void require_tail_range(const Rational& alpha, const Rational& theta) {
  if (alpha < 0 || alpha >= 1) throw ParameterError("alpha must lie in [0, 1), got " + alpha.str());
  if (theta < 0) throw ParameterError("theta must be nonnegative, got " + theta.str());
  if (alpha + theta == 0) throw ParameterError("(alpha, theta) = (0, 0) is the trivial structure");
}

// int_0^1 f(x, 1-x) dx with the two halves integrated separately so that each
// endpoint is resolved in its own variable.
double integrate_split(const std::function<double(double, double)>& f, double tolerance) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto left = [&](double x) { return f(x, 1.0 - x); };
  auto right = [&](double t) { return f(1.0 - t, t); };
  double err = 0;
  double a = integrator.integrate(left, 0.0, 0.5, tolerance, &err);
  double b = integrator.integrate(right, 0.0, 0.5, tolerance, &err);
  return a + b;
}

double exponent_by_quadrature(const LevySpec& spec, int s) {
  if (s == 0) return 0.0;
  double phi = to_double(spec.drift) * s;
  if (spec.has_jumps()) {
    phi += s * integrate_split(
                   [&](double x, double cx) { return pow_or_one(cx, s - 1) * spec.tail_at(x, cx); },
                   1e-12);
  }
  return phi;
}

double mean_by_quadrature(const LevySpec& spec) {
  if (!spec.has_jumps()) return 0.0;
  if (spec.two_param && spec.two_param->theta == 0)
    throw ParameterError("m is infinite for theta = 0 (" + spec.label + ")");
  double m = std::numeric_limits<double>::infinity();
  try {
    m = integrate_split([&](double x, double cx) { return spec.tail_at(x, cx) / cx; }, 1e-12);
  } catch (const std::exception&) {
    throw ParameterError("m = int nu~[x,1]/(1-x) dx does not converge for " + spec.label);
  }
  if (!std::isfinite(m)) throw ParameterError("m is infinite for " + spec.label);
  return m;
}

// Exact two-parameter exponent divided by Phi(1) = B(1-alpha, 1+theta):
// Phi(s)/Phi(1) = s (1+theta)_{s-1} / (2-alpha+theta)_{s-1}.
Rational two_param_exponent_ratio(const TwoParamTail& t, int s) {
  if (s == 0) return Rational(0);
  return Rational(s) * rising(Rational(1) + t.theta, s - 1) /
         rising(Rational(2) - t.alpha + t.theta, s - 1);
}

}  // namespace

std::string to_string(PhiNormalization n) {
  return n == PhiNormalization::phi1 ? "phi(1)=1" : "absolute";
}

double integrate_unit(const std::function<double(double)>& f, double tolerance) {
  // Near 1 the complement variable can round x to exactly 1; such nodes carry
  // negligible weight, so they are evaluated at the largest double below 1.
  return integrate_split([&](double x, double) { return f(x < 1.0 ? x : std::nextafter(1.0, 0.0)); },
                         tolerance);
}

double integrate_unit(const std::function<double(double, double)>& f, double tolerance) {
  return integrate_split(f, tolerance);
}

LevySpec LevySpec::two_parameter(const Rational& alpha, const Rational& theta) {
  require_tail_range(alpha, theta);
  LevySpec spec;
  const double a = to_double(alpha);
  const double th = to_double(theta);
  spec.tail = [a, th](double x) { return std::pow(x, -a) * pow_or_one(1.0 - x, th); };
  spec.tail_split = [a, th](double x, double cx) { return std::pow(x, -a) * pow_or_one(cx, th); };
  spec.two_param = TwoParamTail{alpha, theta};
  spec.label = "two-param(alpha=" + alpha.str() + ",theta=" + theta.str() + ")";
  return spec;
}

LevySpec LevySpec::pure_drift(const Rational& d) {
  if (d <= 0) throw ParameterError("pure drift needs d > 0");
  LevySpec spec;
  spec.drift = d;
  spec.label = "drift(d=" + d.str() + ")";
  return spec;
}

LevySpec LevySpec::generic(const Rational& drift, std::function<double(double)> tail,
                           std::string label) {
  if (drift < 0) throw ParameterError("drift must be nonnegative");
  LevySpec spec;
  spec.drift = drift;
  spec.tail = std::move(tail);
  spec.label = std::move(label);
  return spec;
}

template <class S>
ExponentTable<S> levy_exponents(const LevySpec& spec, int N) {
  ExponentTable<S> table;
  table.phi.reserve(static_cast<std::size_t>(N) + 1);
  if constexpr (is_exact_v<S>) {
    table.normalization = PhiNormalization::phi1;
    if (spec.two_param) {
      if (spec.drift != 0)
        throw ParameterError("exact mode: drift plus a two-parameter tail is not rational");
      for (int s = 0; s <= N; ++s) table.phi.push_back(two_param_exponent_ratio(*spec.two_param, s));
    } else if (!spec.has_jumps()) {
      if (spec.drift == 0) throw ParameterError("zero Levy exponent");
      for (int s = 0; s <= N; ++s) table.phi.push_back(Rational(s));
    } else {
      throw ParameterError("exact mode needs a closed-form tail; use float mode for " + spec.label);
    }
  } else {
    table.normalization = PhiNormalization::absolute;
    for (int s = 0; s <= N; ++s) table.phi.push_back(exponent_by_quadrature(spec, s));
  }
  return table;
}

template <class S>
S levy_exponent(const LevySpec& spec, int s) {
  if (s < 0) throw ParameterError("levy_exponent needs s >= 0");
  return levy_exponents<S>(spec, s).phi[static_cast<std::size_t>(s)];
}

double levy_exponent_closed_form(const LevySpec& spec, int s) {
  double phi = to_double(spec.drift) * s;
  if (spec.two_param && s > 0) {
    const double a = to_double(spec.two_param->alpha);
    const double th = to_double(spec.two_param->theta);
    phi += s * std::beta(1.0 - a, s + th);
  } else if (spec.has_jumps() && s > 0) {
    throw ParameterError("no closed form for " + spec.label);
  }
  return phi;
}

template <class S>
S levy_binomial(const ExponentTable<S>& table, int n, int m) {
  if (m < 1 || m > n) throw ParameterError("levy_binomial needs 1 <= m <= n");
  if (n >= static_cast<int>(table.phi.size())) throw ParameterError("exponent table too short");
  S sum(0);
  for (int j = 0; j <= m; ++j) {
    S term = binomial<S>(m, j) * table.phi[static_cast<std::size_t>(n - m + j)];
    if (j % 2 == 0) {
      sum -= term;
    } else {
      sum += term;
    }
  }
  return binomial<S>(n, m) * sum;
}

template <class S>
S levy_binomial(const LevySpec& spec, int n, int m) {
  if constexpr (is_exact_v<S>) {
    return levy_binomial(levy_exponents<S>(spec, n), n, m);
  } else {
    // The alternating sum telescopes to C(n,m) (d [m=1] + int x^m (1-x)^{n-m} nu~(dx));
    // integrating against the tail directly avoids the cancellation.
    if (m < 1 || m > n) throw ParameterError("levy_binomial needs 1 <= m <= n");
    double value = m == 1 ? to_double(spec.drift) : 0.0;
    if (spec.has_jumps()) {
      value += integrate_split(
          [&](double x, double cx) {
            double dh = m * pow_or_one(x, m - 1) * pow_or_one(cx, n - m);
            if (n > m) dh -= (n - m) * pow_or_one(x, m) * pow_or_one(cx, n - m - 1);
            return dh * spec.tail_at(x, cx);
          },
          1e-13);
    }
    return binomial<double>(n, m) * value;
  }
}

template <class S>
S levy_mean(const LevySpec& spec) {
  if constexpr (is_exact_v<S>) {
    if (spec.two_param) {
      const auto& t = *spec.two_param;
      if (t.theta == 0) throw ParameterError("m is infinite for theta = 0 (" + spec.label + ")");
      return (Rational(1) - t.alpha + t.theta) / t.theta;
    }
    if (!spec.has_jumps()) return Rational(0);
    throw ParameterError("exact mode needs a closed-form tail; use float mode for " + spec.label);
  } else {
    return mean_by_quadrature(spec);
  }
}

template <class S>
S levy_drift(const LevySpec& spec) {
  if constexpr (is_exact_v<S>) {
    if (spec.two_param) return Rational(0);
    if (!spec.has_jumps()) return Rational(1);
    throw ParameterError("exact mode needs a closed-form tail; use float mode for " + spec.label);
  } else {
    return to_double(spec.drift);
  }
}

template <class S>
MeanderLaw<S> beta_meander(const S& alpha, const S& theta) {
  if (alpha < S(0) || !(alpha < S(1)) || !(theta > S(0)))
    throw ParameterError("Beta(1-alpha, theta) meander needs 0 <= alpha < 1 and theta > 0");
  MeanderLaw<S> law;
  law.moment = [alpha, theta](int a, int b) {
    return rising(S(1) - alpha, a) * rising(theta, b) / rising(S(1) - alpha + theta, a + b);
  };
  const double a = to_double(alpha);
  const double th = to_double(theta);
  const double norm = std::beta(1.0 - a, th);
  law.density = [a, th, norm](double x) {
    return std::pow(x, -a) * pow_or_one(1.0 - x, th - 1.0) / norm;
  };
  law.label = "beta(1-alpha,theta), alpha=" + format_scalar(alpha) + ", theta=" + format_scalar(theta);
  return law;
}

template <class S>
MeanderLaw<S> drift_meander() {
  MeanderLaw<S> law;
  law.moment = [](int a, int) { return a == 0 ? S(1) : S(0); };
  law.atom_at_zero = S(1);
  law.label = "atom at 0";
  return law;
}

template <class S>
MeanderLaw<S> meander_from_levy(const LevySpec& spec) {
  if constexpr (is_exact_v<S>) {
    if (spec.two_param) {
      if (spec.drift != 0)
        throw ParameterError("exact mode: drift plus a two-parameter tail is not rational");
      return beta_meander<Rational>(spec.two_param->alpha, spec.two_param->theta);
    }
    if (!spec.has_jumps()) return drift_meander<Rational>();
    throw ParameterError("exact mode needs a closed-form tail; use float mode for " + spec.label);
  } else {
    if (!spec.has_jumps()) return drift_meander<double>();
    const double d = to_double(spec.drift);
    const double m = mean_by_quadrature(spec);
    const double total = d + m;
    MeanderLaw<double> law;
    law.atom_at_zero = d / total;
    auto tail = spec.tail;
    law.density = [tail, total](double x) { return tail(x) / (total * (1.0 - x)); };
    const double atom = law.atom_at_zero;
    law.moment = [spec, total, atom](int a, int b) {
      double v = integrate_split(
          [&](double x, double cx) { return pow_or_one(x, a) * std::pow(cx, b - 1) * spec.tail_at(x, cx); },
          1e-12);
      return v / total + (a == 0 ? atom : 0.0);
    };
    law.label = "stationary meander of " + spec.label;
    return law;
  }
}

template <class S>
S meander_moments(const MeanderLaw<S>& law, int n, int m) {
  if (m < 0 || m > n) throw ParameterError("meander_moments needs 0 <= m <= n");
  return binomial<S>(n, m) * law.moment(m, n - m);
}

template <class S>
DecrementMatrixPair<S> stationary_pair(const LevySpec& spec, const MeanderLaw<S>& law, int N) {
  {
    auto expected = meander_from_levy<S>(spec);
    const S tol = is_exact_v<S> ? S(0) : S(1e-9);
    if (abs_value(S(expected.moment(1, 0) - law.moment(1, 0))) > tol ||
        abs_value(S(expected.atom_at_zero - law.atom_at_zero)) > tol)
      throw ParameterError("meander law is not the stationary delay of " + spec.label);
  }
  DecrementMatrixPair<S> dm{DecrementMatrix<S>(N), DecrementMatrix<S>(N)};
  std::optional<ExponentTable<S>> table;
  if constexpr (is_exact_v<S>) table = levy_exponents<S>(spec, N);
  for (int n = 1; n <= N; ++n) {
    const S phi_n = table ? table->phi[static_cast<std::size_t>(n)] : levy_exponent<S>(spec, n);
    if (phi_n == S(0)) throw ParameterError("Phi(" + std::to_string(n) + ") = 0");
    const S psi0 = meander_moments(law, n, 0);
    for (int m = 1; m <= n; ++m) {
      const S phi_nm = table ? levy_binomial(*table, n, m) : levy_binomial<S>(spec, n, m);
      const S q = phi_nm / phi_n;
      dm.q.at(n, m) = q;
      dm.q_star.at(n, m) = psi0 * q + meander_moments(law, n, m);
    }
  }
  return dm;
}

template <class S>
DecrementMatrixPair<S> two_param_stationary_pair(const S& alpha, const S& theta, int N) {
  if constexpr (is_exact_v<S>) {
    return stationary_pair(LevySpec::two_parameter(alpha, theta), beta_meander(alpha, theta), N);
  } else {
    // Same construction with the exponent ratio in closed form.
    auto law = beta_meander(alpha, theta);
    DecrementMatrixPair<double> dm{two_param_q(alpha, theta, N), DecrementMatrix<double>(N)};
    for (int n = 1; n <= N; ++n) {
      const double psi0 = meander_moments(law, n, 0);
      for (int m = 1; m <= n; ++m)
        dm.q_star.at(n, m) = psi0 * dm.q(n, m) + meander_moments(law, n, m);
    }
    return dm;
  }
}

template <class S>
S potential_from_levy(const LevySpec& spec, int j) {
  if (j < 1) throw ParameterError("potential needs j >= 1");
  if (j == 1) return S(1);
  const S dm = levy_drift<S>(spec) + levy_mean<S>(spec);
  return levy_exponent<S>(spec, j - 1) / (dm * S(j - 1));
}

template <class S>
S upchain_transition(const DecrementMatrixPair<S>& dm, const std::vector<S>& g, int i, int j) {
  if (i < 1 || j <= i) throw ParameterError("upchain_transition needs 1 <= i < j");
  if (static_cast<std::size_t>(j) >= g.size()) throw ParameterError("potential sequence too short");
  if (g[static_cast<std::size_t>(i)] == S(0))
    throw ParameterError("zero potential at i = " + std::to_string(i));
  return dm.q(j - 1, j - i) * g[static_cast<std::size_t>(j)] / g[static_cast<std::size_t>(i)];
}

template <class S>
UpchainRowSum<S> upchain_row_sum(const DecrementMatrixPair<S>& dm, const std::vector<S>& g, int i,
                                 int J) {
  if (J < i) throw ParameterError("upchain_row_sum needs J >= i");
  UpchainRowSum<S> row;
  row.i = i;
  row.J = J;
  for (int j = i + 1; j <= J; ++j) row.partial += upchain_transition(dm, g, i, j);
  row.tail = dm.q_star(J, J - i + 1) / g[static_cast<std::size_t>(i)];
  return row;
}

#define SSCOMP_LEVY_INSTANTIATE(S)                                                               \
  template ExponentTable<S> levy_exponents<S>(const LevySpec&, int);                             \
  template S levy_exponent<S>(const LevySpec&, int);                                             \
  template S levy_binomial<S>(const ExponentTable<S>&, int, int);                                \
  template S levy_binomial<S>(const LevySpec&, int, int);                                        \
  template S levy_mean<S>(const LevySpec&);                                                      \
  template S levy_drift<S>(const LevySpec&);                                                     \
  template MeanderLaw<S> beta_meander<S>(const S&, const S&);                                    \
  template MeanderLaw<S> drift_meander<S>();                                                     \
  template MeanderLaw<S> meander_from_levy<S>(const LevySpec&);                                  \
  template S meander_moments<S>(const MeanderLaw<S>&, int, int);                                 \
  template DecrementMatrixPair<S> stationary_pair<S>(const LevySpec&, const MeanderLaw<S>&, int); \
  template DecrementMatrixPair<S> two_param_stationary_pair<S>(const S&, const S&, int);         \
  template S potential_from_levy<S>(const LevySpec&, int);                                       \
  template S upchain_transition<S>(const DecrementMatrixPair<S>&, const std::vector<S>&, int,    \
                                   int);                                                         \
  template UpchainRowSum<S> upchain_row_sum<S>(const DecrementMatrixPair<S>&,                    \
                                               const std::vector<S>&, int, int);

SSCOMP_LEVY_INSTANTIATE(Rational)
SSCOMP_LEVY_INSTANTIATE(double)

}  // namespace sscomp
