#include "sscomp_tools/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sscomp/errors.hpp"
#include "sscomp/records.hpp"
#include "sscomp/stats.hpp"
#include "sscomp/structural.hpp"
#include "sscomp/verify.hpp"
#include "sscomp_tools/families.hpp"

namespace sscomp::cli {

namespace {

constexpr const char* kOutputDirEnv = "SSCOMP_OUTPUT_DIR";

struct Options {
  std::string family;
  std::string alpha;
  std::string theta;
  std::string matrix_file;
  std::string outer;
  std::string inner;
  std::string mode = "auto";
  int n = 0;
  std::optional<std::uint64_t> seed;
  std::uint64_t draws = 100000;
  int replicas = 1;
  std::string sampler = "natural";
  std::string output;
  std::string format = "tsv";
  std::string log;
  std::string checks = "normalization,right,uniform,last-part,recursions";
  std::string moments;
  std::string compare;
  std::string partition;
  bool gate = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative())
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) p = std::filesystem::path(dir) / p;
  return p;
}

void write_file(const std::string& path, const std::string& text) {
  const auto p = resolve_output(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ParameterError("cannot write " + p.string());
  f << text;
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output.empty())
    out << text;
  else
    write_file(o.output, text);
}

bool force_float(const Options& o) {
  if (o.mode == "float") return true;
  if (o.mode == "auto" || o.mode == "exact") return false;
  throw ParameterError("unknown mode '" + o.mode + "' (expected auto, exact or float)");
}

FamilySpec main_spec(const Options& o) {
  if (o.family.empty()) throw ParameterError("--family is required");
  FamilySpec spec{o.family, {}};
  if (!o.alpha.empty()) spec.values["alpha"] = o.alpha;
  if (!o.theta.empty()) spec.values["theta"] = o.theta;
  return spec;
}

void require_n(const Options& o) {
  if (o.n < 1) throw ParameterError("--n must be a positive integer");
  if (o.n > kDefaultEnumerationCap)
    throw CapExceeded("n=" + std::to_string(o.n) + " exceeds the enumeration cap " +
                      std::to_string(kDefaultEnumerationCap));
}

/// Family for --family, including the fragmentation product of --outer and --inner.
Family resolve_family(const Options& o, int order) {
  const bool fl = force_float(o);
  const std::string matrix_text = o.matrix_file.empty() ? "" : read_file(o.matrix_file);
  if (o.family != "fragment") {
    Family f = make_family(main_spec(o), order, fl, matrix_text);
    if (o.mode == "exact" && !f.exact) throw ParameterError("exact mode needs fractional parameters");
    return f;
  }
  if (o.outer.empty() || o.inner.empty()) throw ParameterError("fragment needs --outer and --inner");
  const Family outer = make_family(FamilySpec::parse(o.outer), order, fl);
  const Family inner = make_family(FamilySpec::parse(o.inner), order, fl);
  if (!outer.sampler || !inner.sampler) throw ParameterError("fragment parts need samplers");
  Family f;
  f.exact = outer.exact && inner.exact;
  if (o.mode == "exact" && !f.exact) throw ParameterError("exact mode needs fractional parameters");
  const std::string params = "outer=" + outer.tag + ";inner=" + inner.tag;
  std::vector<CpfTable<double>> float_tables;
  std::vector<CpfTable<Rational>> exact_tables;
  for (int m = 1; m <= order; ++m) {
    if (f.exact) {
      exact_tables.push_back(fragment_cpf(*outer.exact_cpf, *inner.exact_cpf, m));
      float_tables.push_back(to_double(exact_tables.back()));
    } else {
      float_tables.push_back(fragment_cpf(outer.float_cpf, inner.float_cpf, m));
    }
  }
  if (f.exact) {
    f.exact_cpf = table_cpf("fragment", std::move(exact_tables));
    f.exact_cpf->parameters = params;
  }
  f.float_cpf = table_cpf("fragment", std::move(float_tables));
  f.float_cpf.parameters = params;
  f.tag = f.float_cpf.tag();
  auto outer_sampler = outer.sampler;
  auto inner_sampler = inner.sampler;
  f.sampler = [outer_sampler, inner_sampler](int n) -> Draw {
    auto outer_draw = outer_sampler(n);
    auto inner_draws = std::make_shared<std::vector<Draw>>();
    for (int r = 1; r <= n; ++r) inner_draws->push_back(inner_sampler(r));
    return [outer_draw, inner_draws](RngStream& rng) {
      return fragment_sample(
          outer_draw(rng), [&](int r, RngStream& g) { return (*inner_draws)[static_cast<std::size_t>(r - 1)](g); },
          rng);
    };
  };
  return f;
}

std::vector<double> expected_table(const Family& f, int n) {
  if (f.exact) return to_double(tabulate(*f.exact_cpf, n)).p;
  return tabulate(f.float_cpf, n).p;
}

/// Splits `draws` over replicas exactly as replicate_counts does, optionally
/// keeping the draws (in replica order) for the log.
CountTable collect(const Options& o, const Draw& draw, std::vector<Composition>* log) {
  if (o.replicas < 1) throw ParameterError("--replicas must be positive");
  if (!o.seed) throw ParameterError("sampling needs --seed");
  if (!log) return replicate_counts(o.n, *o.seed, o.replicas, o.draws, draw);
  CountTable table(o.n);
  const auto per = o.draws / static_cast<std::uint64_t>(o.replicas);
  const auto extra = o.draws % static_cast<std::uint64_t>(o.replicas);
  for (int r = 0; r < o.replicas; ++r) {
    RngStream rng(*o.seed, static_cast<std::uint64_t>(r));
    const auto mine = per + (static_cast<std::uint64_t>(r) < extra ? 1 : 0);
    for (std::uint64_t i = 0; i < mine; ++i) {
      log->push_back(draw(rng));
      table.add(log->back());
    }
  }
  return table;
}

int report_counts(const Options& o, const CountTable& counts, const std::vector<double>& expected,
                  std::ostream& out, std::ostream& err) {
  std::optional<ChiSquareResult> gof;
  if (!expected.empty() && counts.total > 0) gof = chi_square_gof(counts.counts, expected);
  emit(o, format_count_table(counts, expected, parse_record_format(o.format), gof ? &*gof : nullptr), out);
  if (gof && o.gate && !gof->passes()) {
    err << "chi-square gate failed: p=" << gof->p_value << "\n";
    return kCheckFailed;
  }
  return kPass;
}

int cmd_cpf(const Options& o, std::ostream& out) {
  require_n(o);
  const Family f = resolve_family(o, o.n + 1);
  const auto format = parse_record_format(o.format);
  emit(o,
       f.exact ? format_cpf_table(tabulate(*f.exact_cpf, o.n), f.tag, format)
               : format_cpf_table(tabulate(f.float_cpf, o.n), f.tag, format),
       out);
  return kPass;
}

int cmd_sample(const Options& o, std::ostream& out, std::ostream& err) {
  require_n(o);
  if (!o.seed) throw ParameterError("sampling needs --seed");
  const Family f = resolve_family(o, o.n + 1);
  std::function<Draw(int)> make;
  if (o.sampler == "natural") {
    make = f.sampler;
  } else if (auto it = f.alternatives.find(o.sampler); it != f.alternatives.end()) {
    make = it->second;
  }
  if (!make) throw ParameterError("family " + f.tag + " has no sampler '" + o.sampler + "'");
  std::vector<Composition> log;
  const CountTable counts = collect(o, make(o.n), o.log.empty() ? nullptr : &log);
  if (!o.log.empty()) write_file(o.log, format_draw_log(log));
  return report_counts(o, counts, expected_table(f, o.n), out, err);
}

template <class S>
std::vector<CheckReport> run_checks(const Options& o, const Cpf<S>& cpf, const std::optional<DecrementMatrixPair<S>>& dm) {
  std::vector<CheckReport> reports;
  std::stringstream list(o.checks);
  for (std::string name; std::getline(list, name, ',');) {
    if (name == "normalization")
      reports.push_back(check_normalization(cpf, o.n));
    else if (name == "right")
      reports.push_back(check_right_consistency(cpf, o.n));
    else if (name == "uniform")
      reports.push_back(check_uniform_consistency(cpf, o.n));
    else if (name == "left")
      reports.push_back(check_left_consistency(cpf, o.n));
    else if (name == "last-part")
      reports.push_back(check_theorem_SL(cpf, o.n));
    else if (name == "recursions") {
      if (dm) reports.push_back(check_decrement_recursions(*dm, o.n));
    } else
      throw ParameterError("unknown check '" + name + "'");
  }
  return reports;
}

int cmd_check(const Options& o, std::ostream& out) {
  require_n(o);
  const Family f = resolve_family(o, o.n + 1);
  const auto reports = f.exact ? run_checks(o, *f.exact_cpf, f.exact_dm) : run_checks(o, f.float_cpf, f.float_dm);
  emit(o, format_reports(reports, parse_record_format(o.format)), out);
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.pass; });
  return ok ? kPass : kCheckFailed;
}

int cmd_reconstruct(const Options& o, std::ostream& out) {
  require_n(o);
  if (o.moments.empty()) throw ParameterError("reconstruct needs --moments");
  auto values = parse_moment_file(read_file(o.moments));
  if (static_cast<int>(values.size()) < o.n + 1)
    throw ParameterError("reconstruction at n=" + std::to_string(o.n) + " needs p(1.." + std::to_string(o.n + 1) +
                         "), file has " + std::to_string(values.size()));
  values.resize(static_cast<std::size_t>(o.n + 1));
  const auto rec = reconstruct_markov(StructuralMoments<Rational>(values), o.n);
  std::vector<CheckReport> reports;
  if (!o.compare.empty()) {
    const Family target = make_family(FamilySpec::parse(o.compare), o.n + 1, false);
    if (!target.exact) throw ParameterError("--compare needs a family with fractional parameters");
    reports.push_back(check_equal_cpfs(rec.cpf, *target.exact_cpf, o.n, "round-trip"));
  }
  const auto format = parse_record_format(o.format);
  const auto table = tabulate(rec.cpf, o.n);
  std::string text;
  if (format == RecordFormat::json) {
    nlohmann::ordered_json doc;
    doc["one_block"] = rec.one_block;
    doc["matrices"] = nlohmann::ordered_json::parse(format_matrix_pair(rec.dm, o.n, format));
    doc["cpf"] = nlohmann::ordered_json::parse(format_cpf_table(table, "reconstructed", format));
    if (!reports.empty()) doc["reports"] = nlohmann::ordered_json::parse(format_reports(reports, format));
    text = doc.dump(2) + "\n";
  } else {
    text = format_matrix_pair(rec.dm, o.n, format) + format_cpf_table(table, "reconstructed", format);
    if (!reports.empty()) text += format_reports(reports, format);
  }
  emit(o, text, out);
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.pass; });
  return ok ? kPass : kCheckFailed;
}

int cmd_arrange(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.partition.empty()) throw ParameterError("arrange needs --partition");
  const Partition lambda = Partition::parse(o.partition);
  Options local = o;
  local.n = lambda.size();
  require_n(local);
  if (o.alpha.empty() || o.theta.empty()) throw ParameterError("arrange needs --alpha and --theta");
  const Parameter a = parse_parameter(o.alpha);
  const Parameter t = parse_parameter(o.theta);
  const double alpha = to_double(a), theta = to_double(t);
  require_two_param_range(alpha, theta);
  std::vector<double> expected(std::size_t{1} << (local.n - 1), 0.0);
  if (is_exact(a) && is_exact(t) && !force_float(o)) {
    for (const auto& [c, p] : arrangement_law(lambda, std::get<Rational>(a), std::get<Rational>(t)))
      expected[c.index()] = to_double(p);
  } else {
    for (const auto& [c, p] : arrangement_law(lambda, alpha, theta)) expected[c.index()] = p;
  }
  Draw draw = [lambda, alpha, theta](RngStream& rng) { return arrange_partition(lambda, alpha, theta, rng); };
  std::vector<Composition> log;
  const CountTable counts = collect(local, draw, o.log.empty() ? nullptr : &log);
  if (!o.log.empty()) write_file(o.log, format_draw_log(log));
  return report_counts(local, counts, expected, out, err);
}

int cmd_fragment(const Options& o, std::ostream& out, std::ostream& err) {
  Options local = o;
  local.family = "fragment";
  if (o.seed) return cmd_sample(local, out, err);
  return cmd_cpf(local, out);
}

void add_family_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--family", o.family,
                  "ewens | renewal | renewal-reversed | two-param | regenerative | markov-table | fragment");
  cmd->add_option("--alpha", o.alpha, "alpha as p/q (exact) or decimal (float)");
  cmd->add_option("--theta", o.theta, "theta as p/q (exact) or decimal (float)");
  cmd->add_option("--matrix-file", o.matrix_file, "q/q* records for markov-table");
  cmd->add_option("--outer", o.outer, "outer family of a fragmentation, e.g. ewens:theta=1");
  cmd->add_option("--inner", o.inner, "inner family of a fragmentation, e.g. renewal-reversed:alpha=1/2");
  cmd->add_option("--mode", o.mode, "auto | exact | float");
}

void add_output_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--output", o.output, "output file (relative paths resolve under $SSCOMP_OUTPUT_DIR)");
  cmd->add_option("--format", o.format, "tsv | json");
}

void add_sampling_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "random seed (required)");
  cmd->add_option("--draws", o.draws, "number of draws");
  cmd->add_option("--replicas", o.replicas, "independent streams run concurrently");
  cmd->add_option("--log", o.log, "write every draw (binary encoding) to this file");
  cmd->add_flag("--gate", o.gate, "exit 1 when the chi-square p-value is at most 1e-3");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and sampled composition structures"};
  app.require_subcommand(1);
  Options o;

  auto* cpf = app.add_subcommand("cpf", "tabulate a CPF over all compositions of n");
  add_family_options(cpf, o);
  cpf->add_option("--n", o.n, "size")->required();
  add_output_options(cpf, o);

  auto* sample = app.add_subcommand("sample", "sample compositions and compare with the exact table");
  add_family_options(sample, o);
  sample->add_option("--n", o.n, "size")->required();
  sample->add_option("--sampler", o.sampler, "natural | markov | scale-invariant | poisson | arrange");
  add_sampling_options(sample, o);
  add_output_options(sample, o);

  auto* check = app.add_subcommand("check", "exact consistency checks; exit 1 on any failure");
  add_family_options(check, o);
  check->add_option("--n", o.n, "largest n checked")->required();
  check->add_option("--checks", o.checks, "comma list of normalization,right,uniform,left,last-part,recursions");
  add_output_options(check, o);

  auto* reconstruct = app.add_subcommand("reconstruct", "rebuild a self-similar Markov law from p(1..n+1)");
  reconstruct->add_option("--moments", o.moments, "moment file")->required();
  reconstruct->add_option("--n", o.n, "size")->required();
  reconstruct->add_option("--compare", o.compare, "family to compare with, e.g. ewens:theta=1");
  add_output_options(reconstruct, o);

  auto* arrange = app.add_subcommand("arrange", "arrange a partition into a composition");
  arrange->add_option("--partition", o.partition, "parts, e.g. 2,1,1")->required();
  arrange->add_option("--alpha", o.alpha, "alpha")->required();
  arrange->add_option("--theta", o.theta, "theta")->required();
  arrange->add_option("--mode", o.mode, "auto | exact | float");
  add_sampling_options(arrange, o);
  add_output_options(arrange, o);

  auto* fragment = app.add_subcommand("fragment", "fragmentation product: exact table, or draws with --seed");
  fragment->add_option("--outer", o.outer, "outer family, e.g. ewens:theta=1")->required();
  fragment->add_option("--inner", o.inner, "inner family, e.g. renewal-reversed:alpha=1/2")->required();
  fragment->add_option("--n", o.n, "size")->required();
  fragment->add_option("--mode", o.mode, "auto | exact | float");
  add_sampling_options(fragment, o);
  add_output_options(fragment, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kPass;
    }
    err << e.what() << "\n";
    return kInvalidParameters;
  }

  try {
    if (*cpf) return cmd_cpf(o, out);
    if (*sample) return cmd_sample(o, out, err);
    if (*check) return cmd_check(o, out);
    if (*reconstruct) return cmd_reconstruct(o, out);
    if (*arrange) return cmd_arrange(o, out, err);
    if (*fragment) return cmd_fragment(o, out, err);
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const ReconstructionError& e) {
    err << "reconstruction infeasible: " << e.what() << "\n";
    return kReconstructionInfeasible;
  } catch (const std::invalid_argument& e) {  // ParameterError, ParseError
    err << "invalid parameters: " << e.what() << "\n";
    return kInvalidParameters;
  } catch (const SamplerError& e) {
    err << "invalid sampler input: " << e.what() << "\n";
    return kInvalidParameters;
  }
  return kInvalidParameters;
}

}  // namespace sscomp::cli
