#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

std::string cli_path() {
  const char* p = std::getenv("PROPHET_CLI");
  REQUIRE(p != nullptr);
  return p;
}

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  std::string cmd = env_prefix + cli_path() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult res;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) res.out.append(buf.data(), n);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

const char* kTableHorizon =
    R"('{"kind":"finite","support":[1,2,3,4],"pmf":[0.5,0.25,0.05,0.2]}')";

}  // namespace

TEST_CASE("classify emits one report per requested class") {
  CliResult r = run_cli(std::string("classify --horizon ") + kTableHorizon);
  REQUIRE(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 7);  // default class list
  CHECK(j[0]["class"] == "ihr");
  CHECK(j[0]["verdict"] == "non-member");
  CHECK(j[2]["class"] == "g");
  CHECK(j[2]["verdict"] == "member");
  CHECK(j[3]["class"] == "gbar");
  CHECK(j[3]["verdict"] == "non-member");
  CHECK(j[4]["class"] == "nbu");
  CHECK(j[4]["margin"].get<double>() == Catch::Approx(0.05));
  CHECK(j[6]["class"] == "cv");
  CHECK(j[6].contains("variance_bound"));

  CliResult one = run_cli(std::string("classify --classes g --horizon ") + kTableHorizon);
  REQUIRE(one.exit_code == 0);
  CHECK(nlohmann::json::parse(one.out).size() == 1);
}

TEST_CASE("eval exact reports the closed-form threshold value") {
  CliResult r = run_cli(std::string("eval --horizon ") + kTableHorizon +
                        R"( --value '{"kind":"uniform","a":0,"b":1}')" +
                        R"( --policy '{"kind":"threshold","pi":0.5}' --method exact)");
  REQUIRE(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  REQUIRE(j.contains("exact"));
  CHECK(j["exact"]["gambler"].get<double>() > 0.0);
  CHECK(j["exact"]["gambler"].get<double>() <= j["exact"]["prophet"].get<double>());
  CHECK_FALSE(j.contains("mc"));

  CliResult both = run_cli(std::string("eval --runs 2000 --method both --horizon ") +
                           kTableHorizon + R"( --value '{"kind":"uniform","a":0,"b":1}')" +
                           R"( --policy '{"kind":"threshold","pi":0.5}')");
  REQUIRE(both.exit_code == 0);
  nlohmann::json jb = nlohmann::json::parse(both.out);
  double exact = jb["exact"]["gambler"].get<double>();
  double mc = jb["mc"]["estimate"].get<double>();
  double se = jb["mc"]["se"].get<double>();
  CHECK(std::abs(mc - exact) <= 4.0 * se);

  // No closed form for the secretary rule.
  CliResult sec = run_cli(std::string("eval --method exact --horizon ") + kTableHorizon +
                          R"( --value '{"kind":"uniform","a":0,"b":1}')" +
                          R"( --policy '{"kind":"secretary","m":4}')");
  CHECK(sec.exit_code == 2);
}

TEST_CASE("simulate is deterministic and honors PROPHET_SEED") {
  std::string args = std::string("simulate --runs 5000 --horizon ") + kTableHorizon +
                     R"( --value '{"kind":"pareto","epsilon":1.5}')" +
                     R"( --policy '{"kind":"randomized","pi":1.5,"q":0.5}')";
  CliResult a = run_cli(args);
  CliResult b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);  // byte-identical
  nlohmann::json j = nlohmann::json::parse(a.out);
  CHECK(j["seed"].get<std::uint64_t>() == 12345);  // default
  CHECK(j["policy"] == "randomized");
  CHECK(j.contains("ratio"));

  CliResult env = run_cli(args, "PROPHET_SEED=777 ");
  nlohmann::json je = nlohmann::json::parse(env.out);
  CHECK(je["seed"].get<std::uint64_t>() == 777);
  CliResult flag = run_cli(args + " --seed 777");
  CHECK(flag.out == env.out);  // env var and flag agree
}

TEST_CASE("hard emits the frozen CSV column order") {
  CliResult r = run_cli("hard --epsilon 0.5 --m-grid 100,1000");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("m,Z_m,E_H,E_MH,pi_bar,gambler,ratio\n", 0) == 0);
  // Two data rows after the header.
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);

  CliResult full = run_cli("hard --epsilon 0.1 --m-grid 100 --perturbed --cv --moments 1");
  REQUIRE(full.exit_code == 0);
  CHECK(full.out.rfind("m,Z_m,E_H,E_MH,pi_bar,gambler,ratio,"
                       "linear_slack,concave_slack,target_slack,cv2,cv_limit,"
                       "moment_exact,moment_asymptote,moment_ratio\n",
                       0) == 0);
}

TEST_CASE("reproduce --only runs the named criterion") {
  CliResult r = run_cli("reproduce --only cv_bound");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("PASS  3 cv_bound:", 0) == 0);
  CliResult csv = run_cli("reproduce --only cv_bound,toy_backward_induction --emit csv");
  REQUIRE(csv.exit_code == 0);
  CHECK(csv.out.rfind("id,name,pass,computed,bound,detail\n", 0) == 0);
  CliResult none = run_cli("reproduce --only no_such_criterion");
  CHECK(none.exit_code == 2);
}

TEST_CASE("config file values are used unless overridden by flags") {
  std::string path = "cli_test_config.json";
  {
    std::ofstream cfg(path);
    cfg << R"({"horizon":{"kind":"finite","support":[1,2,3,4],"pmf":[0.5,0.25,0.05,0.2]},)"
        << R"("classes":"nbu"})";
  }
  CliResult r = run_cli("classify --config " + path);
  REQUIRE(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  REQUIRE(j.size() == 1);
  CHECK(j[0]["class"] == "nbu");
  // The flag wins over the config value.
  CliResult over = run_cli("classify --classes hnbue --config " + path);
  CHECK(nlohmann::json::parse(over.out)[0]["class"] == "hnbue");
  // Unknown config keys are rejected.
  {
    std::ofstream cfg(path);
    cfg << R"({"horizont":{"kind":"geometric","q":0.5}})";
  }
  CHECK(run_cli("classify --config " + path).exit_code == 2);
  std::remove(path.c_str());
}

TEST_CASE("validation and numeric failures map to exit codes 2 and 3") {
  CHECK(run_cli("classify --horizon 'not json'").exit_code == 2);
  CHECK(run_cli(R"(classify --horizon '{"kind":"cauchy"}')").exit_code == 2);
  CHECK(run_cli(R"(classify --horizon '{"kind":"finite","support":[1],"pmf":[0.9]}')").exit_code ==
        2);
  CHECK(run_cli(std::string("classify --classes nosuch --horizon ") + kTableHorizon)
            .exit_code == 2);
  // Unknown keys in distribution JSON are rejected.
  CHECK(run_cli(R"(classify --horizon '{"kind":"geometric","q":0.5,"mean":2}')").exit_code == 2);
  // Moment overflow surfaces as a numeric failure.
  CHECK(run_cli("hard --epsilon 0.5 --m-grid 100 --moments 9999").exit_code == 3);
}
