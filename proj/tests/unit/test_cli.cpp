#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "sscomp_tools/cli.hpp"
#include "sscomp_tools/families.hpp"

using sscomp::cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "sscomp_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("cpf tables") {
  const auto ewens = run({"cpf", "--family", "ewens", "--theta", "1", "--n", "3"});
  CHECK(ewens.code == 0);
  CHECK(ewens.out ==
        "100\t1/3\tewens(theta=1)\n101\t1/6\tewens(theta=1)\n110\t1/3\tewens(theta=1)\n111\t1/6\tewens(theta=1)\n"
        "#normalization\t1\tewens(theta=1)\n");
  const auto renewal = run({"cpf", "--family", "renewal", "--alpha", "1/2", "--n", "3"});
  CHECK(renewal.out.find("100\t3/8") == 0);
  CHECK(renewal.out.find("101\t1/8") != std::string::npos);
  CHECK(renewal.out.find("110\t1/4") != std::string::npos);
  const auto approx = run({"cpf", "--family", "ewens", "--theta", "1.0", "--n", "2"});
  CHECK(approx.out.find("10\t0.5\t") == 0);
  const auto forced = run({"cpf", "--family", "ewens", "--theta", "1", "--n", "2", "--mode", "float"});
  CHECK(forced.out == approx.out);
  const auto json = run({"cpf", "--family", "two-param", "--alpha", "1/2", "--theta", "1", "--n", "4", "--format", "json"});
  const auto doc = nlohmann::json::parse(json.out);
  CHECK(doc["normalization"] == "1");
  CHECK(doc["rows"].size() == 8);
}

TEST_CASE("exit codes") {
  CHECK(run({"cpf", "--family", "ewens", "--theta", "0", "--n", "3"}).code == 2);
  CHECK(run({"cpf", "--family", "ewens", "--theta", "-1/2", "--n", "3"}).code == 2);
  CHECK(run({"cpf", "--family", "renewal", "--alpha", "1", "--n", "3"}).code == 2);
  CHECK(run({"cpf", "--family", "nope", "--n", "3"}).code == 2);
  CHECK(run({"cpf", "--family", "ewens", "--theta", "1", "--n", "17"}).code == 3);
  CHECK(run({"cpf", "--family", "ewens", "--theta", "1/0", "--n", "3"}).code == 2);
  CHECK(run({"cpf", "--family", "ewens", "--theta", "1", "--n", "3", "--mode", "exact", "--format", "xml"}).code == 2);
  CHECK(run({"sample", "--family", "ewens", "--theta", "1", "--n", "3"}).code == 2);  // no seed
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("checks") {
  const auto pass = run({"check", "--family", "two-param", "--alpha", "1/2", "--theta", "1", "--n", "9"});
  CHECK(pass.code == 0);
  CHECK(pass.out.find("fail") == std::string::npos);
  const auto control = run({"check", "--family", "regenerative", "--alpha", "1/2", "--theta", "1", "--n", "9", "--checks", "right"});
  CHECK(control.code == 1);
  CHECK(control.out.find("right-consistency") == 0);
  CHECK(control.out.find("\tfail\t") != std::string::npos);
  const auto left = run({"check", "--family", "renewal-reversed", "--alpha", "1/2", "--n", "6", "--checks", "left"});
  CHECK(left.code == 0);
  CHECK(run({"check", "--family", "ewens", "--theta", "1", "--n", "4", "--checks", "sideways"}).code == 2);
}

TEST_CASE("sampling is byte reproducible") {
  const std::vector<std::string> args{"sample", "--family", "ewens", "--theta", "1", "--n", "4", "--seed", "5", "--draws", "20000", "--replicas", "3"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("#chi-square") != std::string::npos);
  auto other = args;
  other[8] = "6";
  CHECK(run(other).out != a.out);
  // Draw log agrees with the count table and with the unlogged run.
  const auto log = scratch("draws.log");
  auto logged = args;
  logged.insert(logged.end(), {"--log", log.string()});
  CHECK(run(logged).out == a.out);
  std::istringstream lines(slurp(log));
  int count = 0;
  for (std::string line; std::getline(lines, line);) ++count;
  CHECK(count == 20000);
  for (const char* sampler : {"scale-invariant", "poisson", "markov"}) {
    auto alt = args;
    alt.insert(alt.end(), {"--sampler", sampler, "--gate"});
    CHECK(run(alt).code == 0);
  }
  CHECK(run({"sample", "--family", "two-param", "--alpha", "1/2", "--theta", "1", "--n", "5", "--seed", "1", "--sampler", "arrange", "--gate"}).code == 0);
  CHECK(run({"sample", "--family", "renewal", "--alpha", "1/2", "--n", "4", "--seed", "1", "--sampler", "poisson"}).code == 2);
}

TEST_CASE("reconstruction") {
  const auto moments = scratch("ewens.moments");
  std::ofstream(moments) << "1\n1/2\n1/3\n1/4\n1/5\n1/6\n1/7\n1/8\n1/9\n";
  const auto ok = run({"reconstruct", "--moments", moments.string(), "--n", "8", "--compare", "ewens:theta=1"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("round-trip") != std::string::npos);
  CHECK(ok.out.find("\tpass\t") != std::string::npos);
  const auto mismatch = run({"reconstruct", "--moments", moments.string(), "--n", "8", "--compare", "ewens:theta=2"});
  CHECK(mismatch.code == 1);
  const auto bad = scratch("bad.moments");
  std::ofstream(bad) << "1\n1\n1/2\n1/3\n";
  CHECK(run({"reconstruct", "--moments", bad.string(), "--n", "3"}).code == 4);
  const auto ones = scratch("ones.moments");
  std::ofstream(ones) << "1\n1\n1\n1\n";
  const auto one = run({"reconstruct", "--moments", ones.string(), "--n", "3", "--format", "json"});
  CHECK(one.code == 0);
  CHECK(nlohmann::json::parse(one.out)["one_block"] == true);
  CHECK(run({"reconstruct", "--moments", moments.string(), "--n", "9"}).code == 2);
  // Matrices written by reconstruct feed the markov-table family.
  const auto matrices = scratch("ewens.matrices");
  std::ofstream(matrices) << ok.out.substr(0, ok.out.find("1000"));
  const auto table = run({"cpf", "--family", "markov-table", "--matrix-file", matrices.string(), "--n", "4"});
  CHECK(table.code == 0);
  CHECK(table.out.find("1000\t1/4\t") == 0);
}

TEST_CASE("arrangement and fragmentation") {
  CHECK(run({"arrange", "--partition", "3", "--alpha", "1/2", "--theta", "0", "--seed", "1", "--draws", "10"}).out == "100\t10\t10\t0\n101\t0\t0\t0\n110\t0\t0\t0\n111\t0\t0\t0\n#total\t10\n#chi-square\t0\t0\t1\n");
  const auto uniform = run({"arrange", "--partition", "2,1,1", "--alpha", "1/2", "--theta", "0", "--seed", "2", "--gate"});
  CHECK(uniform.code == 0);
  CHECK(run({"arrange", "--partition", "2,1", "--alpha", "2", "--theta", "0", "--seed", "2"}).code == 2);
  const auto exact = run({"fragment", "--outer", "ewens:theta=1", "--inner", "renewal:alpha=1/2", "--n", "3"});
  CHECK(exact.code == 0);
  CHECK(exact.out.find("#normalization\t1\t") != std::string::npos);
  const auto sampled = run({"fragment", "--outer", "ewens:theta=1", "--inner", "renewal-reversed:alpha=1/2", "--n", "5", "--seed", "4", "--gate"});
  CHECK(sampled.code == 0);
  const auto via_cpf = run({"cpf", "--family", "fragment", "--outer", "ewens:theta=1", "--inner", "renewal:alpha=1/2", "--n", "3"});
  CHECK(via_cpf.out == exact.out);
}

TEST_CASE("output directory from the environment") {
  const auto dir = scratch("outdir");
  setenv("SSCOMP_OUTPUT_DIR", dir.string().c_str(), 1);
  const auto r = run({"cpf", "--family", "ewens", "--theta", "1", "--n", "2", "--output", "table.tsv"});
  unsetenv("SSCOMP_OUTPUT_DIR");
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(dir / "table.tsv").find("10\t1/2") == 0);
}

TEST_CASE("family specs") {
  const auto spec = sscomp::cli::FamilySpec::parse("two-param:alpha=1/2,theta=1");
  CHECK(spec.name == "two-param");
  CHECK(spec.get("theta") == "1");
  CHECK_FALSE(spec.get("beta"));
  CHECK_THROWS(sscomp::cli::FamilySpec::parse("ewens:theta"));
  CHECK_THROWS(sscomp::cli::make_family(sscomp::cli::FamilySpec::parse("ewens:theta=1,alpha=1/2"), 3, false));
}

}  // TEST_SUITE
