#include "sscomp/records.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "sscomp/errors.hpp"

namespace sscomp {

using Json = nlohmann::ordered_json;

namespace {

Json scalar_json(const Rational& x) { return format_scalar(x); }
Json scalar_json(double x) { return x; }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

RecordFormat parse_record_format(std::string_view text) {
  if (text == "tsv") return RecordFormat::tsv;
  if (text == "json") return RecordFormat::json;
  throw ParameterError("unknown output format '" + std::string(text) + "' (expected tsv or json)");
}

template <class S>
std::string format_cpf_table(const CpfTable<S>& table, const std::string& tag, RecordFormat format) {
  const auto comps = enumerate_compositions(table.n);
  if (format == RecordFormat::json) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < comps.size(); ++i)
      rows.push_back({{"composition", comps[i].to_binary()}, {"probability", scalar_json(table.p[i])}});
    return dump({{"family", tag},
                 {"n", table.n},
                 {"mode", to_string(mode_of<S>())},
                 {"rows", rows},
                 {"normalization", scalar_json(table.total())}});
  }
  std::string out;
  for (std::size_t i = 0; i < comps.size(); ++i)
    out += comps[i].to_binary() + "\t" + format_scalar(table.p[i]) + "\t" + tag + "\n";
  out += "#normalization\t" + format_scalar(table.total()) + "\t" + tag + "\n";
  return out;
}

template <class S>
std::string format_matrix_pair(const DecrementMatrixPair<S>& dm, int n_max, RecordFormat format) {
  Json rows = Json::array();
  std::string out;
  auto emit = [&](const char* name, const DecrementMatrix<S>& m, int top) {
    for (int n = 1; n <= top; ++n)
      for (int r = 1; r <= n; ++r) {
        if (format == RecordFormat::json)
          rows.push_back({{"matrix", name}, {"n", n}, {"r", r}, {"value", scalar_json(m(n, r))}});
        else
          out += std::string(name) + "\t" + std::to_string(n) + "\t" + std::to_string(r) + "\t" +
                 format_scalar(m(n, r)) + "\n";
      }
  };
  emit("q", dm.q, std::min(n_max, dm.q.order()));
  emit("q*", dm.q_star, std::min(n_max, dm.q_star.order()));
  return format == RecordFormat::json ? dump({{"mode", to_string(mode_of<S>())}, {"entries", rows}}) : out;
}

template <class S>
std::string format_sequence(const std::string& name, const std::vector<S>& values, int first,
                            RecordFormat format) {
  if (format == RecordFormat::json) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < values.size(); ++i)
      rows.push_back({{"index", first + static_cast<int>(i)}, {"value", scalar_json(values[i])}});
    return dump({{"name", name}, {"values", rows}});
  }
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i)
    out += name + "\t" + std::to_string(first + static_cast<int>(i)) + "\t" + format_scalar(values[i]) + "\n";
  return out;
}

std::string format_draw_log(const std::vector<Composition>& draws) {
  std::string out;
  for (const auto& c : draws) out += c.to_binary() + "\n";
  return out;
}

std::string format_count_table(const CountTable& counts, const std::vector<double>& expected,
                               RecordFormat format, const ChiSquareResult* gof) {
  const bool with_expected = !expected.empty();
  if (with_expected && expected.size() != counts.counts.size())
    throw ParameterError("expected table does not match the count table");
  const auto comps = enumerate_compositions(counts.n);
  const double total = static_cast<double>(counts.total);
  Json rows = Json::array();
  std::string out;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto count = counts.counts[i];
    if (format == RecordFormat::json) {
      Json row = {{"composition", comps[i].to_binary()}, {"count", count}};
      if (with_expected) {
        const double e = total * expected[i];
        row["expected"] = e;
        row["residual"] = e > 0 ? (static_cast<double>(count) - e) / std::sqrt(e) : 0.0;
      }
      rows.push_back(row);
      continue;
    }
    out += comps[i].to_binary() + "\t" + std::to_string(count);
    if (with_expected) {
      const double e = total * expected[i];
      out += "\t" + format_scalar(e) + "\t" +
             format_scalar(e > 0 ? (static_cast<double>(count) - e) / std::sqrt(e) : 0.0);
    }
    out += "\n";
  }
  if (format == RecordFormat::json) {
    Json doc = {{"n", counts.n}, {"total", counts.total}, {"rows", rows}};
    if (gof)
      doc["chi_square"] = {{"statistic", gof->statistic}, {"df", gof->df}, {"p_value", gof->p_value}};
    return dump(doc);
  }
  out += "#total\t" + std::to_string(counts.total) + "\n";
  if (gof)
    out += "#chi-square\t" + format_scalar(gof->statistic) + "\t" + std::to_string(gof->df) + "\t" +
           format_scalar(gof->p_value) + "\n";
  return out;
}

std::string format_reports(const std::vector<CheckReport>& reports, RecordFormat format) {
  if (format == RecordFormat::json) {
    Json rows = Json::array();
    for (const auto& r : reports) {
      Json row = {{"name", r.name}, {"scope", r.scope}, {"verdict", r.pass ? "pass" : "fail"},
                  {"mode", to_string(r.mode)}};
      if (r.witness)
        row["witness"] = {{"where", r.witness->where},
                          {"lhs", r.witness->lhs},
                          {"rhs", r.witness->rhs},
                          {"difference", r.witness->difference}};
      if (!r.notes.empty()) row["notes"] = r.notes;
      rows.push_back(row);
    }
    return dump(rows);
  }
  std::string out;
  for (const auto& r : reports) {
    out += r.name + "\t" + r.scope + "\t" + (r.pass ? "pass" : "fail") + "\t" + to_string(r.mode);
    if (r.witness)
      out += "\t" + r.witness->where + "\t" + r.witness->lhs + "\t" + r.witness->rhs + "\t" + r.witness->difference;
    out += "\n";
    for (const auto& note : r.notes) out += "#note\t" + r.name + "\t" + note + "\n";
  }
  return out;
}

std::vector<Rational> parse_moment_file(std::string_view text) {
  std::vector<Rational> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    std::istringstream fields(body);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.size() > 2) throw ParseError("moment file line " + std::to_string(line_no) + ": too many fields");
    if (tokens.size() == 2) {
      int index = 0;
      const auto [ptr, ec] = std::from_chars(tokens[0].data(), tokens[0].data() + tokens[0].size(), index);
      if (ec != std::errc() || ptr != tokens[0].data() + tokens[0].size())
        throw ParseError("moment file line " + std::to_string(line_no) + ": bad index '" + tokens[0] + "'");
      if (index != static_cast<int>(out.size()) + 1)
        throw ParseError("moment file line " + std::to_string(line_no) + ": expected index " +
                         std::to_string(out.size() + 1));
    }
    try {
      out.push_back(parse_rational(tokens.back()));
    } catch (const std::exception& e) {
      throw ParseError("moment file line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (out.empty()) throw ParseError("moment file holds no values");
  return out;
}

#define SSCOMP_RECORDS_INSTANTIATE(S)                                                                \
  template std::string format_cpf_table<S>(const CpfTable<S>&, const std::string&, RecordFormat); \
  template std::string format_matrix_pair<S>(const DecrementMatrixPair<S>&, int, RecordFormat);   \
  template std::string format_sequence<S>(const std::string&, const std::vector<S>&, int, RecordFormat);

SSCOMP_RECORDS_INSTANTIATE(Rational)
SSCOMP_RECORDS_INSTANTIATE(double)

}  // namespace sscomp
