#pragma once

// Line-oriented records (tab-separated) and the equivalent JSON documents.
// Probabilities print as "p/q" in exact mode and shortest round-trip decimals
// in float mode.

#include <string>
#include <string_view>
#include <vector>

#include "sscomp/laws.hpp"
#include "sscomp/stats.hpp"
#include "sscomp/stochastic.hpp"
#include "sscomp/verify.hpp"

namespace sscomp {

enum class RecordFormat { tsv, json };

RecordFormat parse_record_format(std::string_view text);

/// binary composition, probability, family tag; followed by a
/// "#normalization" line carrying the table total.
template <class S>
std::string format_cpf_table(const CpfTable<S>& table, const std::string& tag, RecordFormat format);

/// q(n:r) / q*(n:r) rows as: name, n, r, value.
template <class S>
std::string format_matrix_pair(const DecrementMatrixPair<S>& dm, int n_max, RecordFormat format);

/// index, value; indices start at `first`.
template <class S>
std::string format_sequence(const std::string& name, const std::vector<S>& values, int first,
                            RecordFormat format);

/// One composition per line in binary encoding.
std::string format_draw_log(const std::vector<Composition>& draws);

/// composition, count, expected count, standardized residual (O-E)/sqrt(E).
/// `expected` holds probabilities in table order, or is empty when no exact
/// table exists (the last two columns are then omitted). A goodness-of-fit
/// result, when given, is appended as a "#chi-square" line / "chi_square" key.
std::string format_count_table(const CountTable& counts, const std::vector<double>& expected,
                               RecordFormat format, const ChiSquareResult* gof = nullptr);

std::string format_reports(const std::vector<CheckReport>& reports, RecordFormat format);

/// Moments p(1), p(2), ... from text: one value per line, optionally preceded
/// by its 1-based index; blank lines and '#' comments are skipped. Values are
/// exact fractions. Throws ParseError on malformed or out-of-order lines.
std::vector<Rational> parse_moment_file(std::string_view text);

#define SSCOMP_RECORDS_EXTERN(S)                                                                       \
  extern template std::string format_cpf_table<S>(const CpfTable<S>&, const std::string&, RecordFormat); \
  extern template std::string format_matrix_pair<S>(const DecrementMatrixPair<S>&, int, RecordFormat);   \
  extern template std::string format_sequence<S>(const std::string&, const std::vector<S>&, int,         \
                                                 RecordFormat);

SSCOMP_RECORDS_EXTERN(Rational)
SSCOMP_RECORDS_EXTERN(double)
#undef SSCOMP_RECORDS_EXTERN

}  // namespace sscomp
