#pragma once

// Named composition families as seen from the command line.

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "sscomp/laws.hpp"
#include "sscomp/rng.hpp"
#include "sscomp/stochastic.hpp"

namespace sscomp::cli {

/// "ewens:theta=1" -> {name: ewens, values: {theta: "1"}}.
struct FamilySpec {
  std::string name;
  std::map<std::string, std::string> values;

  static FamilySpec parse(const std::string& text);
  std::optional<std::string> get(const std::string& key) const;
};

using Draw = std::function<Composition(RngStream&)>;

/// Everything the commands need from one family at one size bound.
struct Family {
  std::string tag;
  bool exact = true;
  std::optional<Cpf<Rational>> exact_cpf;
  Cpf<double> float_cpf;
  std::optional<DecrementMatrixPair<Rational>> exact_dm;
  std::optional<DecrementMatrixPair<double>> float_dm;
  /// Natural sampler at size n; empty if the family has none.
  std::function<Draw(int)> sampler;
  /// Alternative samplers keyed by name ("scale-invariant", "poisson", "arrange", "markov").
  std::map<std::string, std::function<Draw(int)>> alternatives;
};

/// Builds a family. `order` bounds the sizes that matrix-backed families
/// support; `force_float` discards exact mode. `matrix_text` feeds markov-table.
/// Throws ParameterError for unknown names or parameters out of range.
Family make_family(const FamilySpec& spec, int order, bool force_float, const std::string& matrix_text = "");

/// Decrement matrices from records "q|q*  n  r  value" (as written by the cpf
/// and reconstruct commands). Values with a decimal point force float mode.
struct MatrixFile {
  bool exact = true;
  DecrementMatrixPair<Rational> exact_dm;
  DecrementMatrixPair<double> float_dm;
};
MatrixFile parse_matrix_file(const std::string& text);

}  // namespace sscomp::cli
