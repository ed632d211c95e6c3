#include "sscomp_tools/families.hpp"

#include <memory>
#include <sstream>

#include "sscomp/errors.hpp"
#include "sscomp/levy.hpp"

namespace sscomp::cli {

FamilySpec FamilySpec::parse(const std::string& text) {
  FamilySpec spec;
  const auto colon = text.find(':');
  spec.name = text.substr(0, colon);
  if (spec.name.empty()) throw ParameterError("empty family name in '" + text + "'");
  if (colon == std::string::npos) return spec;
  std::stringstream rest(text.substr(colon + 1));
  for (std::string item; std::getline(rest, item, ',');) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParameterError("family parameter '" + item + "' is not key=value");
    spec.values[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return spec;
}

std::optional<std::string> FamilySpec::get(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) return std::nullopt;
  return it->second;
}

namespace {

struct Params {
  std::map<std::string, Parameter> values;
  bool exact = true;

  Rational rational(const std::string& key) const { return std::get<Rational>(values.at(key)); }
  double real(const std::string& key) const { return to_double(values.at(key)); }
  std::string text() const {
    std::string out;
    for (const auto& [k, v] : values) {
      if (!out.empty()) out += ",";
      out += k + "=" + std::visit([](const auto& x) { return format_scalar(x); }, v);
    }
    return out;
  }
};

Params read_params(const FamilySpec& spec, std::initializer_list<const char*> keys, bool force_float) {
  Params p;
  for (const char* key : keys) {
    auto v = spec.get(key);
    if (!v) throw ParameterError("family " + spec.name + " needs parameter " + key);
    p.values[key] = parse_parameter(*v);
    p.exact = p.exact && is_exact(p.values[key]);
  }
  for (const auto& [k, _] : spec.values) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw ParameterError("family " + spec.name + " has no parameter " + k);
  }
  if (force_float) p.exact = false;
  return p;
}

std::function<Draw(int)> markov_sampler(const DecrementMatrixPair<double>& dm) {
  return [dm](int n) -> Draw {
    auto sampler = std::make_shared<const MarkovCompositionSampler>(dm, n);
    return [sampler](RngStream& rng) { return (*sampler)(rng); };
  };
}

// Sets cpfs and matrices of a family whose law is a stationary or regenerative pair.
template <class Build>
void attach_pair(Family& f, const Params& p, int order, const std::string& name, Build build) {
  if (p.exact) {
    f.exact_dm = build(Rational{}, order);
    f.exact_cpf = markov_cpf(*f.exact_dm, name, p.text());
    f.float_dm = to_double(*f.exact_dm);
  } else {
    f.float_dm = build(double{}, order);
  }
  f.float_cpf = markov_cpf(*f.float_dm, name, p.text());
  f.alternatives["markov"] = markov_sampler(*f.float_dm);
}

}  // namespace

Family make_family(const FamilySpec& spec, int order, bool force_float, const std::string& matrix_text) {
  Family f;
  const std::string& name = spec.name;
  if (order < 1) throw ParameterError("n must be positive");

  if (name == "ewens") {
    const auto p = read_params(spec, {"theta"}, force_float);
    const double theta = p.real("theta");
    if (p.exact) {
      f.exact_cpf = ewens_cpf(p.rational("theta"));
      f.exact_dm = two_param_stationary_pair(Rational(0), p.rational("theta"), order);
      f.float_dm = to_double(*f.exact_dm);
    } else {
      f.float_dm = two_param_stationary_pair(0.0, theta, order);
    }
    f.float_cpf = ewens_cpf(theta);
    f.sampler = [theta](int n) -> Draw {
      return [theta, n](RngStream& rng) { return sample_bernoulli_string(theta, n, rng); };
    };
    f.alternatives["markov"] = markov_sampler(*f.float_dm);
    f.alternatives["scale-invariant"] = [theta](int n) -> Draw {
      return [theta, n](RngStream& rng) {
        auto partition = sample_scale_invariant_partition(theta, 0.01, rng);
        return uniform_sampling_composition(partition, n, rng);
      };
    };
    f.alternatives["poisson"] = [theta](int n) -> Draw {
      return [theta, n](RngStream& rng) {
        ScaleInvariantSet set(theta);
        return poisson_sampling_composition(set, n, rng);
      };
    };
  } else if (name == "renewal" || name == "renewal-reversed") {
    const bool reversed = name == "renewal-reversed";
    const auto p = read_params(spec, {"alpha"}, force_float);
    const double alpha = p.real("alpha");
    if (p.exact) f.exact_cpf = renewal_cpf(p.rational("alpha"), reversed);
    f.float_cpf = renewal_cpf(alpha, reversed);
    if (!reversed) {
      if (p.exact) {
        f.exact_dm = two_param_stationary_pair(p.rational("alpha"), p.rational("alpha"), order);
        f.float_dm = to_double(*f.exact_dm);
      } else {
        f.float_dm = two_param_stationary_pair(alpha, alpha, order);
      }
      f.alternatives["markov"] = markov_sampler(*f.float_dm);
    }
    f.sampler = [alpha, reversed](int n) -> Draw {
      return [alpha, n, reversed](RngStream& rng) {
        auto c = sample_renewal_string(alpha, n, rng);
        return reversed ? reverse(c) : c;
      };
    };
  } else if (name == "two-param" || name == "regenerative") {
    const auto p = read_params(spec, {"alpha", "theta"}, force_float);
    if (name == "two-param") {
      attach_pair(f, p, order, name, [&](auto tag, int N) {
        using S = decltype(tag);
        if constexpr (is_exact_v<S>)
          return two_param_stationary_pair(p.rational("alpha"), p.rational("theta"), N);
        else
          return two_param_stationary_pair(p.real("alpha"), p.real("theta"), N);
      });
      const double alpha = p.real("alpha");
      const double theta = p.real("theta") - alpha;
      f.alternatives["arrange"] = [alpha, theta](int n) -> Draw {
        auto partitions = std::make_shared<const std::vector<Partition>>(enumerate_partitions(n));
        std::vector<double> weights;
        for (const auto& lambda : *partitions) weights.push_back(partition_law(alpha, theta, lambda));
        auto table = std::make_shared<const TableSampler>(weights);
        return [alpha, theta, partitions, table](RngStream& rng) {
          return arrange_partition((*partitions)[(*table)(rng)], alpha, theta, rng);
        };
      };
    } else {
      attach_pair(f, p, order, name, [&](auto tag, int N) {
        using S = decltype(tag);
        if constexpr (is_exact_v<S>)
          return regenerative_pair(p.rational("alpha"), p.rational("theta"), N);
        else
          return regenerative_pair(p.real("alpha"), p.real("theta"), N);
      });
    }
    f.sampler = f.alternatives["markov"];
  } else if (name == "markov-table") {
    read_params(spec, {}, force_float);
    const MatrixFile m = parse_matrix_file(matrix_text);
    const bool exact = m.exact && !force_float;
    if (exact) {
      f.exact_dm = m.exact_dm;
      f.exact_cpf = markov_cpf(m.exact_dm, name);
    }
    f.float_dm = m.float_dm;
    f.float_cpf = markov_cpf(m.float_dm, name);
    f.alternatives["markov"] = markov_sampler(m.float_dm);
    f.sampler = f.alternatives["markov"];
    f.exact = exact;
    f.tag = f.float_cpf.tag();
    return f;
  } else {
    throw ParameterError("unknown family '" + name +
                         "' (expected ewens, renewal, renewal-reversed, two-param, regenerative, markov-table)");
  }
  f.exact = f.exact_cpf.has_value();
  f.tag = f.exact ? f.exact_cpf->tag() : f.float_cpf.tag();
  return f;
}

MatrixFile parse_matrix_file(const std::string& text) {
  struct Entry {
    bool star;
    int n;
    int r;
    Parameter value;
  };
  std::vector<Entry> entries;
  int q_order = 0, star_order = 0;
  bool exact = true;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string name, value;
    int n = 0, r = 0;
    if (!(fields >> name)) continue;
    if (!(fields >> n >> r >> value) || (name != "q" && name != "q*"))
      throw ParseError("matrix file line " + std::to_string(line_no) + ": expected 'q|q* n r value'");
    if (n < 1 || r < 1 || r > n)
      throw ParseError("matrix file line " + std::to_string(line_no) + ": index outside 1 <= r <= n");
    Entry e{name == "q*", n, r, parse_parameter(value)};
    exact = exact && is_exact(e.value);
    (e.star ? star_order : q_order) = std::max(e.star ? star_order : q_order, n);
    entries.push_back(std::move(e));
  }
  if (star_order == 0) throw ParseError("matrix file holds no q* rows");
  MatrixFile m;
  m.exact = exact;
  m.exact_dm = {DecrementMatrix<Rational>(q_order), DecrementMatrix<Rational>(star_order)};
  m.float_dm = {DecrementMatrix<double>(q_order), DecrementMatrix<double>(star_order)};
  for (const auto& e : entries) {
    (e.star ? m.float_dm.q_star : m.float_dm.q).at(e.n, e.r) = to_double(e.value);
    if (exact) (e.star ? m.exact_dm.q_star : m.exact_dm.q).at(e.n, e.r) = std::get<Rational>(e.value);
  }
  return m;
}

}  // namespace sscomp::cli
