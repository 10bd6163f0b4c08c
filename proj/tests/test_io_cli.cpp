#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mcurv/report_io.hpp"

using nlohmann::json;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

CmdResult run_cli(const std::string& args) {
  static int counter = 0;
  std::string out = "cli_out_" + std::to_string(counter) + ".txt";
  std::string err = "cli_err_" + std::to_string(counter) + ".txt";
  ++counter;
  std::string cmd = std::string(MCURV_BIN) + " " + args + " > " + out + " 2> " + err;
  int rc = std::system(cmd.c_str());
  CmdResult res;
  res.exit_code = WEXITSTATUS(rc);
  res.out = slurp(out);
  res.err = slurp(err);
  std::remove(out.c_str());
  std::remove(err.c_str());
  return res;
}

json schema(const std::string& name) {
  std::string path = std::string(MCURV_SCHEMA_DIR) + "/" + name;
  std::ifstream f(path);
  REQUIRE(f.good());
  return json::parse(f);
}

}  // namespace

TEST_SUITE("io_cli") {

TEST_CASE("format_double round-trips") {
  using mcurv::io::format_double;
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.5) == "1.5");
  mcurv::Rng rng(99);
  for (int i = 0; i < 2000; ++i) {
    double x = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-300, 300));
    double back = std::strtod(format_double(x).c_str(), nullptr);
    CHECK(back == x);
  }
}

TEST_CASE("scale report serialization") {
  mcurv::ScaleReport rep;
  rep.base = 10;
  rep.predicted_exponent = 0.4;
  rep.fitted_exponent = 0.41;
  rep.gap_check = 0.2;
  rep.levels.push_back({1, 10, 0.5, 0.5});
  rep.levels.push_back({2, 100, 0.6, 1.1});
  auto j = mcurv::io::scale_report_json(rep);
  CHECK(j["schema_version"] == 1);
  CHECK(j["levels"].size() == 2);
  CHECK(j["levels"][1]["cumulative"] == doctest::Approx(1.1));

  std::ostringstream csv;
  mcurv::io::scale_report_csv(csv, rep);
  CHECK(csv.str().rfind("level,cells,sum,cumulative,fitted,predicted\n", 0) == 0);
  CHECK(csv.str().find("\n1,10,0.5,0.5,0.41,0.4\n") != std::string::npos);
}

TEST_CASE("matches_schema flags missing and mistyped fields") {
  json sch{{"required", {"a", "b"}},
           {"properties", {{"a", {{"type", "number"}}}, {"b", {{"type", "string"}}}}}};
  std::string why;
  CHECK(mcurv::io::matches_schema({{"a", 1.0}, {"b", "x"}}, sch, &why));
  CHECK_FALSE(mcurv::io::matches_schema({{"a", 1.0}}, sch, &why));
  CHECK(why.find("missing") != std::string::npos);
  CHECK_FALSE(mcurv::io::matches_schema({{"a", 1.0}, {"b", 2.0}}, sch, &why));
}

TEST_CASE("cli: saw command is deterministic and matches the closed form") {
  auto r1 = run_cli("saw --N 10 --alpha 0.5 --grid 64 --out cli_saw1.csv");
  auto r2 = run_cli("saw --N 10 --alpha 0.5 --grid 64 --out cli_saw2.csv");
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  CHECK(slurp("cli_saw1.csv") == slurp("cli_saw2.csv"));
  CHECK(r1.out == r2.out);
  CHECK(r1.out.rfind("hoelder_constant ", 0) == 0);

  // last row: x=1, F close to 1/(2(1 - 10^-1/2))
  std::string csv = slurp("cli_saw1.csv");
  auto pos = csv.rfind("\n1,");
  REQUIRE(pos != std::string::npos);
  std::string last = csv.substr(pos + 1);
  double x, f, F;
  REQUIRE(std::sscanf(last.c_str(), "%lf,%lf,%lf", &x, &f, &F) == 3);
  CHECK(F == doctest::Approx(1.0 / (2 * (1 - std::pow(10.0, -0.5)))).epsilon(1e-9));
  std::remove("cli_saw1.csv");
  std::remove("cli_saw2.csv");
}

TEST_CASE("cli: invalid saw parameters exit with code 1") {
  auto r = run_cli("saw --alpha 1.5 --out cli_bad.csv");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("alpha must be in (0,1)") != std::string::npos);
}

TEST_CASE("cli: circle energy report matches the schema and the closed form") {
  auto r = run_cli("energy mp --gen circle --r 1 --n 200 --p 2");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  std::string why;
  CHECK(mcurv::io::matches_schema(j, schema("energy_report.schema.json"), &why));
  INFO(why);
  double exact = std::pow(2 * M_PI, 3);
  CHECK(std::fabs(j["energy"].get<double>() - exact) / exact < 0.02);

  auto seg = run_cli("energy mp --gen segment --p 3 --n 64");
  json js = json::parse(seg.out);
  CHECK(js["energy"].get<double>() == 0.0);

  auto flat = run_cli("energy ep --gen flat-patch --m 2 --p 8 --samples 2000");
  json jf = json::parse(flat.out);
  CHECK(jf["energy"].get<double>() == 0.0);
}

TEST_CASE("cli: diverge curve verdicts and reports") {
  auto r = run_cli(
      "diverge curve --p 4 --alpha 0.6 --N 20 --k 1..3 --cells 32 --spc 16 "
      "--gap-samples 100 --out cli_div.json --out-csv cli_div.csv");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("CONVERGENT", 0) == 0);
  json j = json::parse(slurp("cli_div.json"));
  std::string why;
  CHECK(mcurv::io::matches_schema(j, schema("diverge_report.schema.json"), &why));
  INFO(why);
  CHECK(j["verdict"] == "CONVERGENT");
  CHECK(j["levels"].size() == 3);
  std::string csv = slurp("cli_div.csv");
  CHECK(csv.rfind("level,cells,sum,cumulative,fitted,predicted\n", 0) == 0);
  std::remove("cli_div.json");
  std::remove("cli_div.csv");
}

TEST_CASE("cli: gap-check failure exits with code 2") {
  auto r = run_cli("diverge curve --p 30 --alpha 0.9 --N 2 --k 1..3 --gap-samples 50");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("increase N") != std::string::npos);
}

TEST_CASE("cli: cone-check on a segment") {
  auto r = run_cli("cone-check --gen segment --n 100");
  REQUIRE(r.exit_code == 0);
  auto nl = r.out.find('\n');
  json j = json::parse(r.out.substr(0, r.out.rfind("PASS")));
  std::string why;
  CHECK(mcurv::io::matches_schema(j, schema("cone_report.schema.json"), &why));
  INFO(why);
  CHECK(j["pass"].get<bool>());
  CHECK(j["max_angle_ratio"].get<double>() == 0.0);
  (void)nl;
}

TEST_CASE("cli: config file supplies defaults, flags override") {
  {
    std::ofstream cfg("cli_cfg.json");
    cfg << "{\"n\": 150, \"p\": 3.0}\n";
  }
  auto r = run_cli("energy mp --config cli_cfg.json --gen circle --r 1");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["config"]["n"] == 150);
  CHECK(j["config"]["p"] == 3.0);

  auto r2 = run_cli("energy mp --config cli_cfg.json --gen circle --r 1 --n 100");
  json j2 = json::parse(r2.out);
  CHECK(j2["config"]["n"] == 100);
  CHECK(j2["config"]["p"] == 3.0);
  std::remove("cli_cfg.json");
}

TEST_CASE("cli: beta report on the saw graph") {
  auto r = run_cli(
      "beta --gen saw-graph --m 1 --N 100 --alpha 0.5 --centers 8 "
      "--rexp-min 3 --rexp-max 8 --tuples 300 --cloud 4096 --seed 5");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  std::string why;
  CHECK(mcurv::io::matches_schema(j, schema("beta_report.schema.json"), &why));
  INFO(why);
  CHECK(j["violations"].get<int>() == 0);
  CHECK(j["simplex_bound_violations"].get<int>() == 0);
  CHECK(j["simplex_bound_max_ratio"].get<double>() <= 1.0);
  CHECK(j["slope"].get<double>() >= 0.4);
}

TEST_CASE("cli: csv curve input with malformed rows") {
  {
    std::ofstream f("cli_curve.csv");
    f << "0,0,0\n0.5,0.5,0\n1.0,oops,0\n";
  }
  auto r = run_cli("energy mp --input cli_curve.csv --p 2");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("row 3") != std::string::npos);

  {
    std::ofstream f("cli_curve.csv");
    f << "# segment\n0,0,0\n0.5,0.5,0\n1.0,1.0,0\n";
  }
  auto r2 = run_cli("energy mp --input cli_curve.csv --p 2");
  REQUIRE(r2.exit_code == 0);
  json j = json::parse(r2.out);
  CHECK(j["energy"].get<double>() == 0.0);
  std::remove("cli_curve.csv");
}

}  // TEST_SUITE
