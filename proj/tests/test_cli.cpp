#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <sys/wait.h>

#include "cdalg/cli.hpp"

using namespace cdalg;

namespace {

struct Run {
  int exit_code;
  std::string out;
};

Run run_binary(const std::string& args) {
  const std::string cmd = std::string(CDCALC_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Json circle_json() {
  return {{"kind", "circle"}, {"center", 0}, {"radius", 1}, {"direction", "e1"}, {"turns", 1}};
}

}  // namespace

TEST_CASE("eval job") {
  const RunOutcome r = run_job({{"command", "eval"}, {"level", 2}, {"expression", "e1*e2"}});
  CHECK(r.exit_code == 0);
  CHECK(r.report["result"]["value"] == Json({0, 0, 0, 1}));
  CHECK(r.report["command"] == "eval");
}

TEST_CASE("integrate job") {
  const RunOutcome r = run_job({{"command", "integrate"},
                                {"level", 3},
                                {"expression", "z^-1"},
                                {"path", circle_json()},
                                {"tol", 1e-6}});
  REQUIRE(r.exit_code == 0);
  const Json& v = r.report["result"]["value"];
  CHECK(v[1].get<double>() == doctest::Approx(2 * std::numbers::pi).epsilon(1e-6));
  CHECK(std::abs(v[0].get<double>()) < 1e-6);
}

TEST_CASE("expression trees in JSON") {
  const Json tree = {{"op", "add"},
                     {"args", {{{"const", 3}}, {{"op", "mul"}, {"args", {{{"const", "e1"}}, {{"var", "z"}}}}}}}};
  const RunOutcome r = run_job({{"command", "eval"}, {"level", 2}, {"expression", tree}, {"point", "e2"}});
  REQUIRE(r.exit_code == 0);
  CHECK(r.report["result"]["value"] == Json({3, 0, 0, 1}));
}

TEST_CASE("zerodiv job") {
  CHECK(run_job({{"command", "zerodiv"}, {"level", 3}}).report["result"]["found"] == false);
  const RunOutcome r = run_job({{"command", "zerodiv"}, {"level", 4}});
  CHECK(r.report["result"]["found"] == true);
  CHECK(r.report["result"]["product_norm"] == 0.0);
}

TEST_CASE("usage errors exit 1, numerical errors exit 2") {
  const RunOutcome level = run_job({{"command", "eval"}, {"level", 9}, {"expression", "z"}});
  CHECK(level.exit_code == 1);
  CHECK(level.report["error"]["kind"] == "invalid_level");
  CHECK(run_job({{"command", "eval"}, {"level", 3}, {"expression", "z +"}}).exit_code == 1);
  CHECK(run_job({{"command", "eval"}, {"level", 3}}).exit_code == 1);
  CHECK(run_job({{"command", "eval"}, {"level", 3}, {"expression", "z"}, {"bogus", 1}}).exit_code == 1);
  const RunOutcome pole = run_job({{"command", "eval"}, {"level", 3}, {"expression", "z^-1"}, {"point", 0}});
  CHECK(pole.exit_code == 2);
  CHECK(pole.report.contains("error"));
}

TEST_CASE("malformed jobs always produce error JSON") {
  const std::vector<Json> seeds = {
      {{"command", "integrate"}, {"level", 3}, {"expression", "z"}, {"path", circle_json()}},
      {{"command", "cauchy"}, {"level", 3}, {"expression", "z^2"}, {"point", 0.1}, {"path", circle_json()}},
      {{"command", "laurent"}, {"level", 3}, {"expression", "z^-1"}, {"k_min", -2}, {"k_max", 2},
       {"rho_inner", 0.5}, {"rho_outer", 1.5}, {"direction", "e1"}},
      {{"command", "crcheck"}, {"level", 2}, {"expression", "zc"}, {"point", "e1"}},
  };
  const std::vector<Json> junk = {nullptr, true, -1, 0, 1e300, "", "((", Json::array(), Json::object(),
                                  Json({1, 2}), Json({{"kind", "square"}}), "e1*e1*", 9, -7.5};
  std::mt19937_64 rng(7);
  int failures = 0;
  for (int t = 0; t < 400; ++t) {
    Json job = seeds[rng() % seeds.size()];
    const int edits = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < edits; ++k) {
      auto it = job.begin();
      std::advance(it, rng() % job.size());
      const std::string key = it.key();
      switch (rng() % 3) {
        case 0: job[key] = junk[rng() % junk.size()]; break;
        case 1: job.erase(key); break;
        default: job["extra" + std::to_string(k)] = 1; break;
      }
      if (job.empty()) break;
    }
    const RunOutcome r = run_job(job);
    const bool ok = r.exit_code == 0 ? r.report.contains("result")
                                     : (r.exit_code == 1 || r.exit_code == 2) &&
                                           r.report.contains("error") &&
                                           r.report["error"].contains("kind");
    if (!ok) {
      ++failures;
      MESSAGE(job.dump());
    }
  }
  CHECK(failures == 0);
  CHECK(run_job(Json::array()).exit_code == 1);
  CHECK(run_job("text").exit_code == 1);
}

TEST_CASE("reports are deterministic") {
  const Json job = {{"command", "roots"}, {"level", 3}, {"expression", "z^3 + e1*z + e2"}, {"seed", 3}};
  CHECK(dump_report(run_job(job).report) == dump_report(run_job(job).report));
}

TEST_CASE("binary: flags, exit codes and selftest") {
  const Run eval = run_binary("eval --level 2 --expr 'e1*e2'");
  CHECK(eval.exit_code == 0);
  CHECK(Json::parse(eval.out)["result"]["value"] == Json({0, 0, 0, 1}));
  CHECK(run_binary("eval --level 9 --expr z").exit_code == 1);
  CHECK(run_binary("eval --level 3 --expr z --unknown-flag 1").exit_code == 1);
  const Run pole = run_binary("eval --level 3 --expr 'z^-1' --point 0");
  CHECK(pole.exit_code == 2);
  CHECK(Json::parse(pole.out).contains("error"));

  const std::string job_path = "cdcalc_test_job.json";
  std::ofstream(job_path) << R"({"command": "integrate", "level": 3, "expression": "z^-1",
    "path": {"kind": "circle", "center": 0, "radius": 1, "direction": "e1"}})";
  const Run a = run_binary("--job " + job_path);
  const Run b = run_binary("--job " + job_path);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  std::remove(job_path.c_str());

  const Run fault = run_binary("selftest --inject-sign-fault");
  CHECK(fault.exit_code == 2);
  CHECK(fault.out.find("criterion  1  FAIL") != std::string::npos);
}
