#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "momentfix/cli.hpp"

using momentfix::cli::run;
using Json = nlohmann::ordered_json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "momentfix");
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("momentfix_test_" + name);
  std::ofstream(path) << content;
  return path;
}

struct EnvGuard {
  explicit EnvGuard(const char* value) { ::setenv("MOMENTFIX_PRECISION_BITS", value, 1); }
  ~EnvGuard() { ::unsetenv("MOMENTFIX_PRECISION_BITS"); }
  EnvGuard(const EnvGuard&) = delete;
  EnvGuard& operator=(const EnvGuard&) = delete;
};

}  // namespace

TEST_CASE("fixed-point command") {
  const auto r = invoke({"fixed-point", "--terms", "3", "--precision-bits", "128"});
  REQUIRE(r.code == momentfix::cli::kOk);
  const auto j = Json::parse(r.out);
  CHECK(j["command"] == "fixed-point");
  CHECK(j["precision_bits"] == 128);
  CHECK(j["seed"].is_null());
  const auto& rows = j["results"]["rows"];
  REQUIRE(rows.size() == 3);
  CHECK(rows[0]["n"] == 1);
  const std::string m1 = rows[0]["m"];
  CHECK(m1.rfind("0.61803398874989484820458683436563811772", 0) == 0);
  const std::string m2 = rows[1]["m"];
  CHECK(m2.rfind("0.47725999647401964454222988450064446544", 0) == 0);
  CHECK(j["results"]["all_within_tol"] == true);
  CHECK(Json::parse(j.dump(2)) == j);
}

TEST_CASE("output is deterministic") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"lipschitz", "--samples", "50", "--seed", "7", "--terms", "24"},
        std::vector<std::string>{"iterate", "--steps", "5", "--terms", "16", "--start", "geometric:0.5"},
        std::vector<std::string>{"spectral", "--max-p", "3", "--eval-n", "0,2"}}) {
    const auto a = invoke(args);
    const auto b = invoke(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
  const auto seed7 = Json::parse(invoke({"lipschitz", "--samples", "50", "--seed", "7", "--terms", "24"}).out);
  CHECK(seed7["seed"] == 7);
  const auto seed8 = Json::parse(invoke({"lipschitz", "--samples", "50", "--seed", "8", "--terms", "24"}).out);
  CHECK(seed7["results"] != seed8["results"]);
}

TEST_CASE("iterate command") {
  const auto r = invoke({"iterate", "--start", "zero", "--steps", "3", "--terms", "4"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  const auto& steps = j["results"]["steps"];
  REQUIRE(steps.size() == 3);
  CHECK(steps[0]["step"] == 1);
  CHECK(steps[0]["step_ratio"].is_null());
  CHECK(steps[0]["iterate"][0] == "1");
  CHECK(steps[1]["iterate"][0] == "0.5");
  CHECK_FALSE(steps[1]["step_ratio"].is_null());

  const auto csv = invoke({"iterate", "--steps", "2", "--terms", "3", "--format", "csv"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("step,distance_lo,distance_hi,step_ratio,step_bound,x1,x2,x3\n", 0) == 0);

  const auto seq = write_temp("start.txt", "# start\n1/2\n1/4\n1/8\n");
  const auto from_file = invoke({"iterate", "--start", "file:" + seq.string(), "--steps", "1"});
  REQUIRE(from_file.code == 0);
  const std::string y1 = Json::parse(from_file.out)["results"]["steps"][0]["iterate"][0];
  CHECK(y1.rfind("0.666666666666666666666666666666666666", 0) == 0);

  CHECK(invoke({"iterate", "--start", "bogus"}).code == momentfix::cli::kUsage);
  CHECK(invoke({"iterate", "--start", "geometric:1.5"}).code == momentfix::cli::kUsage);
  CHECK(invoke({"iterate", "--start", "file:/nonexistent/momentfix.txt"}).code == momentfix::cli::kIoError);
  CHECK(invoke({"iterate", "--steps", "0"}).code == momentfix::cli::kUsage);
}

TEST_CASE("lipschitz command") {
  const auto r = invoke({"lipschitz", "--samples", "100", "--in-c", "--terms", "32"});
  REQUIRE(r.code == 0);
  const auto scan = invoke({"lipschitz", "--mode", "scan"});
  REQUIRE(scan.code == 0);
  const auto j = Json::parse(scan.out);
  CHECK(j["results"]["points"].size() == 4);
  CHECK(j["results"]["monotone"] == true);
  const std::string first = j["results"]["points"][0]["ratio"];
  CHECK(first.rfind("0.613705638880109381", 0) == 0);
  CHECK(invoke({"lipschitz", "--mode", "other"}).code == momentfix::cli::kUsage);
  CHECK(invoke({"lipschitz", "--mode", "scan", "--a-values", "0"}).code == momentfix::cli::kUsage);
}

TEST_CASE("cm-check command") {
  const auto good = write_temp("good.txt", "1\n1/2\n1/3\n1/4\n1/5\n");
  const auto bad = write_temp("bad.txt", "1\n0.9\n0.7\n");
  const auto not_one = write_temp("notone.txt", "0.5\n0.25\n");

  const auto exact = invoke({"cm-check", "--input", good.string(), "--depth", "4", "--exact"});
  CHECK(exact.code == momentfix::cli::kOk);
  const auto j = Json::parse(exact.out);
  CHECK(j["results"]["verdict"] == "certified");
  CHECK(j["results"]["exact"] == true);
  // D[4][0] of 1/(n+1) is 4! 0! / 5! = 1/5
  bool found = false;
  for (const auto& cell : j["results"]["table"]) {
    if (cell["m"] == 4 && cell["n"] == 0) {
      CHECK(cell["value"] == "1/5");
      found = true;
    }
  }
  CHECK(found);

  const auto refuted = invoke({"cm-check", "--input", bad.string(), "--depth", "2", "--exact"});
  CHECK(refuted.code == momentfix::cli::kRefuted);
  CHECK(refuted.err.find("refuted") != std::string::npos);
  CHECK(Json::parse(refuted.out)["results"]["worst"]["value"] == "-1/10");

  CHECK(invoke({"cm-check", "--input", bad.string(), "--depth", "2", "--bits", "64"}).code == momentfix::cli::kRefuted);
  CHECK(invoke({"cm-check", "--input", "fixed-point", "--depth", "6"}).code == momentfix::cli::kOk);
  CHECK(invoke({"cm-check", "--input", "fixed-point", "--exact"}).code == momentfix::cli::kUsage);
  CHECK(invoke({"cm-check", "--input", good.string(), "--exact", "--precision-bits", "64"}).code ==
        momentfix::cli::kUsage);
  CHECK(invoke({"cm-check", "--input", not_one.string(), "--depth", "1"}).code == momentfix::cli::kUsage);
  CHECK(invoke({"cm-check", "--input", good.string(), "--depth", "9"}).code == momentfix::cli::kUsage);
  CHECK(invoke({"cm-check", "--input", "/nonexistent/momentfix.txt"}).code == momentfix::cli::kIoError);
  CHECK(invoke({"cm-check"}).code == momentfix::cli::kUsage);

  const auto csv = invoke({"cm-check", "--input", good.string(), "--depth", "1", "--exact", "--format", "csv"});
  CHECK(csv.out == "m,n,value\n0,0,1\n0,1,1/2\n1,0,1/2\n");
}

TEST_CASE("spectral command") {
  const auto r = invoke({"spectral", "--max-p", "2", "--eval-n", "0,1"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  REQUIRE(j["results"]["terms"].size() == 3);
  const std::string xi1 = j["results"]["terms"][1]["xi"];
  CHECK(xi1.rfind("-1.567353753101655332547341965088129172", 0) == 0);
  CHECK(j["results"]["evaluations"].size() == 2);
  const auto csv = invoke({"spectral", "--max-p", "1", "--eval-n", "3", "--format", "csv"});
  CHECK(csv.out.rfind("p,xi,alpha,residual\n", 0) == 0);
  CHECK(csv.out.find("\n\nn,partial_sum,target,gap\n") != std::string::npos);
  CHECK(invoke({"spectral", "--eval-n", "x"}).code == momentfix::cli::kUsage);
}

TEST_CASE("precision handling") {
  CHECK(invoke({"fixed-point", "--precision-bits", "52"}).code == momentfix::cli::kUsage);
  CHECK(invoke({"fixed-point", "--terms", "0"}).code == momentfix::cli::kUsage);
  CHECK(invoke({"fixed-point", "--format", "xml"}).code == momentfix::cli::kUsage);
  CHECK(invoke({}).code == momentfix::cli::kUsage);
  CHECK(invoke({"--help"}).code == momentfix::cli::kOk);
  CHECK(Json::parse(invoke({"fixed-point", "--terms", "1"}).out)["precision_bits"] == 128);
  {
    EnvGuard env("200");
    CHECK(Json::parse(invoke({"fixed-point", "--terms", "1"}).out)["precision_bits"] == 200);
    CHECK(Json::parse(invoke({"fixed-point", "--terms", "1", "--precision-bits", "64"}).out)["precision_bits"] == 64);
  }
  {
    EnvGuard env("lots");
    CHECK(invoke({"fixed-point"}).code == momentfix::cli::kUsage);
  }
  const auto csv = invoke({"fixed-point", "--terms", "2", "--format", "csv", "--precision-bits", "53"});
  CHECK(csv.out.rfind("n,m_n,residual\n1,0.618033988749894903,", 0) == 0);
}
