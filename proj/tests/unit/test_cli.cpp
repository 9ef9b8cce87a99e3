#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cqmc_cli/cli.hpp"

using namespace cqmc::cli;
using nlohmann::json;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run_args(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = run(args, out, err);
  return {status, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
  args.push_back("--format");
  args.push_back("json");
  const Run r = run_args(args);
  REQUIRE(r.status == 0);
  return json::parse(r.out);
}

}  // namespace

TEST_CASE("parse accepts the documented forms") {
  const Command gap = parse({"gap", "--k", "2", "--theta", "4", "--N", "3"});
  CHECK(gap.name == "gap");
  CHECK(gap.k == 2);
  CHECK(*gap.theta == 4.0);
  CHECK(gap.N == 3);
  const Command ev = parse({"evaluate", "--k", "2", "--theta", "4", "--n", "2", "--kind", "gamma",
                            "--observable", "1.1:Z"});
  CHECK(ev.name == "evaluate");
  CHECK(ev.kind == "gamma");
  CHECK(ev.observable == "1.1:Z");
  CHECK(parse({"critical", "--k", "3"}).k == 3);
  CHECK(parse({"fixed-points", "--k", "2", "--beta", "0.7"}).beta == 0.7);
  CHECK(parse({"verify", "--k", "2", "--theta", "4", "--format", "csv"}).format == Format::Csv);
}

TEST_CASE("parse rejects bad command lines") {
  CHECK_THROWS_AS(parse({"gap", "--k", "2", "--theta", "4", "--beta", "0.6931"}), UsageError);
  CHECK_THROWS_AS(parse({"gap", "--k", "2"}), UsageError);
  CHECK_THROWS_AS(parse({"frobnicate"}), UsageError);
  CHECK_THROWS_AS(parse({}), UsageError);
  CHECK_THROWS_AS(parse({"gap", "--k", "two", "--theta", "4"}), UsageError);
  CHECK_THROWS_AS(parse({"evaluate", "--k", "2", "--theta", "4"}), UsageError);
  CHECK_THROWS_AS(parse({"boundary", "--k", "2", "--theta", "4", "--kind", "delta"}), UsageError);
  CHECK_THROWS_AS(parse({"boundary", "--k", "2", "--theta", "4", "--kind", "alpha"}), UsageError);
  CHECK_THROWS_AS(parse({"gap", "--k", "2", "--theta", "4", "--format", "xml"}), UsageError);
  CHECK_THROWS_AS(parse({"phase-diagram", "--theta", "4"}), UsageError);
  try {
    parse({"gap", "--k", "2", "--theta", "4", "--beta", "0.6931"});
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("--beta") != std::string::npos);
  }
}

TEST_CASE("exit statuses") {
  CHECK(run_args({"gap", "--k", "2", "--theta", "4", "--beta", "1"}).status == 2);
  CHECK(run_args({}).status == 2);
  const Run regime = run_args({"correlation", "--k", "2", "--theta", "2.5", "--N", "1", "--kind", "gamma"});
  CHECK(regime.status == 1);
  CHECK(regime.err.find("error") != std::string::npos);
  CHECK(run_args({"evaluate", "--k", "2", "--theta", "4", "--n", "5", "--observable", "1:Z"}).status == 1);
  CHECK(run_args({"gap", "--k", "1", "--theta", "4"}).status == 1);
  CHECK(run_args({"fixed-points", "--k", "2", "--theta", "0.5"}).status == 1);
  CHECK(run_args({"critical", "--k", "2"}).status == 0);
}

TEST_CASE("critical payload") {
  const json j = run_json({"critical", "--k", "2"});
  CHECK(j["result"]["theta_c"] == 3.0);
  CHECK(j["result"]["beta_c"] == 0.549306144334);
  CHECK(j["command"] == "critical");
}

TEST_CASE("correlation and evaluate payloads") {
  const json c = run_json({"correlation", "--k", "2", "--theta", "4", "--N", "1", "--kind", "gamma"});
  CHECK(c["result"]["value"] == 0.8778637245);
  CHECK(c["params"]["theta"] == 4.0);
  CHECK(c["params"]["beta"] == 0.69314718056);
  const json e = run_json({"evaluate", "--k", "2", "--theta", "4", "--n", "2", "--kind", "gamma",
                           "--observable", "1.1:Z"});
  CHECK(e["result"]["value"] == c["result"]["value"]);
  const json x = run_json({"evaluate", "--k", "2", "--beta", "0.6931471805599453", "--n", "1",
                           "--kind", "gamma", "--observable", "1:X,2:Z"});
  CHECK(x["result"]["value"] == 0.0);
  CHECK(x["result"]["diagonal_part"] == "1:0,2:Z");
}

TEST_CASE("gap, trajectory and boundary payloads") {
  const json g = run_json({"gap", "--k", "2", "--theta", "4", "--N", "3"});
  CHECK(g["result"]["verdict"] == "phase-transition");
  CHECK(g["result"]["gap"] == 0.892586805833);
  const json u = run_json({"gap", "--k", "2", "--theta", "3"});
  CHECK(u["result"]["verdict"] == "unique-state");
  CHECK(u["result"]["eps0"].is_null());

  const json t = run_json({"trajectory", "--k", "2", "--theta", "4", "--x0", "0.1", "--y0", "1"});
  CHECK(t["result"]["verdict"] == "exits-domain");
  CHECK(t["result"]["exit_step"] == 3);
  const json c = run_json({"trajectory", "--k", "2", "--theta", "4", "--steps", "60"});
  CHECK(c["result"]["verdict"] == "converges");
  CHECK(c["result"]["limit"]["x"].get<double>() == doctest::Approx(0.16).epsilon(1e-10));

  const json b = run_json({"boundary", "--k", "2", "--theta", "4", "--kind", "gamma", "--n", "2"});
  CHECK(b["result"]["levels"].size() == 3);
  CHECK(b["result"]["levels"][0]["h0"] == 0.133333333333);
  CHECK(b["result"]["normalization"] == 1.0);
  const json f = run_json({"fixed-points", "--k", "2", "--theta", "4"});
  CHECK(f["result"]["count"] == 3);
  CHECK(f["result"]["fixed_points"][2]["t"] == 6.85410196625);
}

TEST_CASE("verify exits zero with at least 30 checks") {
  const Run r = run_args({"verify", "--k", "2", "--theta", "4", "--format", "json"});
  CHECK(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j["result"]["total"].get<int>() >= 30);
  CHECK(j["result"]["all_passed"] == true);
}

TEST_CASE("phase diagram csv") {
  const Run r = run_args({"phase-diagram", "--k", "2", "--theta-min", "2.5", "--theta-max", "4",
                          "--theta-step", "0.5", "--format", "csv"});
  REQUIRE(r.status == 0);
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "theta,regime,t2,t3,lambda2,m_infinity,eps0");
  std::getline(lines, row);
  CHECK(row == "2.5,unique,,,,0.0,");
  int count = 1;
  while (std::getline(lines, row)) ++count;
  CHECK(count == 4);
}

TEST_CASE("output is deterministic and formats agree") {
  const std::vector<std::string> args{"phase-diagram", "--k", "3", "--theta-min", "1.5", "--theta-max",
                                      "4", "--theta-step", "0.25"};
  CHECK(run_args(args).out == run_args(args).out);
  auto with = [&](const char* fmt) {
    auto a = args;
    a.push_back("--format");
    a.push_back(fmt);
    return run_args(a).out;
  };
  CHECK(with("json") == with("json"));
  const json j = json::parse(with("json"));
  const std::string text = with("text");
  for (const auto& row : j["result"]["rows"]) {
    if (!row["m_infinity"].is_null()) CHECK(text.find("m_infinity=" + row["m_infinity"].dump()) != std::string::npos);
  }
  const std::string csv = with("csv");
  for (const auto& row : j["result"]["rows"]) CHECK(csv.find(row["m_infinity"].dump()) != std::string::npos);
}

TEST_CASE("timing is opt-in") {
  const json plain = run_json({"critical", "--k", "2"});
  CHECK_FALSE(plain.contains("elapsed_ms"));
  const json timed = run_json({"critical", "--k", "2", "--timing"});
  CHECK(timed.contains("elapsed_ms"));
}

TEST_CASE("reports round-trip through json") {
  const Outcome o = execute(parse({"gap", "--k", "3", "--theta", "3", "--N", "2", "--timing"}));
  const json j = o.report;
  const Report back = j.get<Report>();
  CHECK(back == o.report);
  CHECK(json::parse(j.dump()).get<Report>() == o.report);
}

TEST_CASE("--out writes the report to a file") {
  const std::string path = "cqmc_cli_test_out.json";
  const Run r = run_args({"critical", "--k", "4", "--format", "json", "--out", path});
  CHECK(r.status == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const json j = json::parse(in);
  CHECK(j["result"]["theta_c"] == round12(5.0 / 3.0));
  std::remove(path.c_str());
}

TEST_CASE("twelve significant digits") {
  CHECK(round12(0.87786372449991744) == 0.8778637245);
  CHECK(round12(1.0 / 3.0) == 0.333333333333);
  CHECK(round12(0.0) == 0.0);
}
