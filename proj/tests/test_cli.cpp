#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ecs/catalog.hpp"
#include "ecs/systems.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Runs the CLI through the shell; `args` is spliced verbatim.
Run ecs_run(const std::string& args, const std::string& env = "") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto out = dir / "ecs_cli_test.out";
  const auto err = dir / "ecs_cli_test.err";
  const std::string cmd = env + " '" ECS_CLI_PATH "' " + args + " >'" + out.string() + "' 2>'" +
                          err.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / ("ecs_cli_" + name);
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

}  // namespace

TEST_CASE("search examples") {
  auto r = ecs_run("search --r-min 4 --r-max 4 --max-modulus 600 --format compact --jobs 1");
  CHECK(r.code == 0);
  CHECK(r.out == "4(1): 3,6\n");
  CHECK(r.err.find("counts 4:1 total 1 undecided 0 (bound 600)") != std::string::npos);

  r = ecs_run("search --r-min 2 --r-max 3 --max-modulus 600");
  CHECK(r.code == 0);
  CHECK(r.out == "2(0):\n3(0):\n");

  r = ecs_run("search --r-min 12 --r-max 12 --max-modulus 100 --format json");
  CHECK(r.code == 0);
  const auto c = ecs::parse_json(r.out);
  CHECK(c.count(12) == 7);
  CHECK(c.bound == 100);
}

TEST_CASE("search usage errors") {
  CHECK(ecs_run("search --format xml").code == 2);
  CHECK(ecs_run("search --r-min 5 --r-max 4").code == 2);
  CHECK(ecs_run("search --jobs 0").code == 2);
  CHECK(ecs_run("frobnicate").code == 2);
  CHECK(ecs_run("").code == 2);
  CHECK(ecs_run("search --r-min 4 --r-max 4 --max-modulus 20", "ECS_LCM_CAP=abc").code == 2);
}

TEST_CASE("search checkpoint via the CLI") {
  const auto ck = std::filesystem::temp_directory_path() / "ecs_cli_ck.jsonl";
  std::filesystem::remove(ck);
  const std::string args = "search --r-min 2 --r-max 9 --max-modulus 60 --jobs 2 --checkpoint '" +
                           ck.string() + "'";
  const auto full = ecs_run("search --r-min 2 --r-max 9 --max-modulus 60 --jobs 1");
  const auto stopped = ecs_run(args + " --stop-after 10");
  CHECK(stopped.code == 3);
  CHECK(stopped.out.empty());
  const auto resumed = ecs_run(args);
  CHECK(resumed.code == 0);
  CHECK(resumed.out == full.out);
  const auto other = ecs_run("search --r-min 2 --r-max 9 --max-modulus 61 --checkpoint '" +
                             ck.string() + "'");
  CHECK(other.code == 2);
  CHECK(other.err.find("refusing to resume") != std::string::npos);
  std::filesystem::remove(ck);
}

TEST_CASE("verify") {
  auto r = ecs_run("verify \"0 mod 3, 1 mod 6, 2 mod 6, 4 mod 6, 5 mod 6\"");
  CHECK(r.code == 0);
  CHECK(r.out == "VALID\ndensity 1\n");

  r = ecs_run("verify \"0 mod 2, 1 mod 3, 5 mod 6\"");
  CHECK(r.code == 1);
  CHECK(r.out == "INVALID\ndensity 1\nconflict 0 mod 2, 1 mod 3 at 4\ngap 3\n");

  r = ecs_run("verify \"0 mod 2, 1 mod 4\"");
  CHECK(r.code == 1);
  CHECK(r.out == "INVALID\ndensity 3/4\ngap 3\n");

  CHECK(ecs_run("verify \"0 mod\"").code == 2);
  CHECK(ecs_run("verify \"0 mod 2, 1 mod 2\" --bruteforce").code == 0);
  CHECK(ecs_run("verify \"0 mod 128, 0 mod 78125\" --bruteforce", "ECS_LCM_CAP=9999999").code == 3);
  CHECK(ecs_run("verify \"0 mod 2, 1 mod 2\" --bruteforce", "ECS_LCM_CAP=1").code == 3);
}

TEST_CASE("witness") {
  auto r = ecs_run("witness \"3 6^4\"");
  CHECK(r.code == 0);
  CHECK(r.out == "0 mod 3, 1 mod 6, 2 mod 6, 4 mod 6, 5 mod 6\n");
  CHECK(ecs::verify(ecs::parse_system(r.out)).valid);
  CHECK(ecs_run("witness \"3 6^4\" --branch fewest").code == 0);

  r = ecs_run("witness \"2 3 6\"");
  CHECK(r.code == 1);
  CHECK(r.out == "INFEASIBLE\n");

  r = ecs_run("witness \"3 4\"");
  CHECK(r.code == 2);
  CHECK(r.err.find("7/12") != std::string::npos);

  CHECK(ecs_run("witness \"3^2 6\"").code == 2);
  // the gap scan needs points up to 5 of Z/6
  r = ecs_run("witness \"3 6^4\"", "ECS_LCM_CAP=3");
  CHECK(r.code == 3);
  CHECK(r.out == "UNDECIDED\n");
}

TEST_CASE("trivial and double") {
  auto r = ecs_run("trivial 3");
  CHECK(r.code == 0);
  CHECK(r.out == "0 mod 2, 1 mod 4, 3 mod 8, 7 mod 8\n");
  CHECK(ecs_run("trivial 0").code == 2);
  CHECK(ecs_run("trivial 64").code == 3);

  r = ecs_run("double \"0 mod 2, 1 mod 2\"");
  CHECK(r.code == 0);
  CHECK(r.out == "0 mod 2, 1 mod 4, 3 mod 4\n");
  CHECK(ecs_run("double \"0 mod 3\"").code == 1);
  CHECK(ecs_run("double \"0 mod\"").code == 2);

  // chained output stays valid
  std::string t = ecs_run("trivial 4").out;
  t.pop_back();
  r = ecs_run("double \"" + t + "\"");
  CHECK(r.code == 0);
  CHECK(ecs::verify(ecs::parse_system(r.out)).valid);
}

TEST_CASE("catalog show") {
  auto r = ecs_run("catalog show --r 8");
  CHECK(r.code == 0);
  CHECK(r.out == "8(2): 3,12; 5,10\n");
  r = ecs_run("catalog show");
  CHECK(r.code == 0);
  CHECK(ecs::parse_compact(r.out, 600, 3) == ecs::golden());
  r = ecs_run("catalog show --format json");
  CHECK(ecs::parse_json(r.out) == ecs::golden());
  CHECK(ecs_run("catalog show --r 40").code == 2);
  CHECK(ecs_run("catalog").code == 2);
}

TEST_CASE("catalog diff") {
  const auto run = ecs_run("search --r-min 6 --r-max 6 --max-modulus 20 --format json");
  REQUIRE(run.code == 0);
  const auto path = write_temp("r6.json", run.out);
  auto r = ecs_run("catalog diff '" + path.string() + "'");
  CHECK(r.code == 0);
  CHECK(r.out.empty());

  ecs::Catalog c = ecs::parse_json(run.out);
  c.results.at(6).pop_back();
  const auto less = write_temp("r6_less.json", ecs::format_json(c));
  r = ecs_run("catalog diff '" + less.string() + "'");
  CHECK(r.code == 1);
  CHECK(r.out == "missing 6: 3,6,12\ncount 6: -1\n");

  CHECK(ecs_run("catalog diff /nonexistent/run.json").code == 2);
  const auto junk = write_temp("junk.json", "{not json");
  CHECK(ecs_run("catalog diff '" + junk.string() + "'").code == 2);
  std::filesystem::remove(path);
  std::filesystem::remove(less);
  std::filesystem::remove(junk);
}
