#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// stdout of the command; stderr is discarded unless merged by the caller
Result run(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string(DUALPCF_BIN) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string corpus(const std::string& name) { return std::string(CORPUS_DIR) + "/" + name + ".dpcf"; }

}  // namespace

TEST_CASE("check prints the type") {
  Result r = run("check " + corpus("abs_deriv"));
  CHECK(r.code == 0);
  CHECK(r.out == "π\n");
  Result e = run("check -e 'fun x: delta. max(x, 0 - x)'");
  CHECK(e.code == 0);
  CHECK(e.out == "δ → δ\n");
}

TEST_CASE("eval text and json") {
  Result r = run("eval " + corpus("abs_deriv"));
  CHECK(r.code == 0);
  CHECK(r.out == "[-1,1]\n");
  Result j = run("eval " + corpus("abs_deriv") + " --format json");
  REQUIRE(j.code == 0);
  auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["std"]["lo"] == "-1");
  CHECK(doc["std"]["hi"] == "1");
  CHECK(doc["inf"]["lo"] == "0");
  CHECK(doc["cost"] == 4);
  CHECK(doc["type"] == "pi");
  CHECK(doc["steps"].get<std::uint64_t>() > 0);
}

TEST_CASE("eval by width") {
  Result j = run("eval -e 'int (fun t: pi. in_delta t)' --width 1/64 --format json");
  REQUIRE(j.code == 0);
  auto doc = nlohmann::json::parse(j.out);
  // doubling schedule 1, 2, 4, 8; width 2^-m at cost m
  CHECK(doc["cost"] == 8);
  CHECK(doc["std"]["lo"] == "255/512");
  CHECK(doc["std"]["hi"] == "257/512");
  CHECK(doc["reached"] == true);
}

TEST_CASE("exit codes") {
  Result bad = run("check -e 'fun x: delta. if (0<) x then 1 else 0'", true);
  CHECK(bad.code == 1);
  CHECK(bad.out.find("ZeroTestOnDual") != std::string::npos);
  CHECK(run("eval -e 'fun x: delta. ((('").code == 1);
  CHECK(run("eval /nonexistent/file.dpcf").code == 1);
  CHECK(run("eval " + corpus("nested_int_xyz") + " --cost 8 --budget 1000").code == 2);
  CHECK(run("eval -e 'Y[nu] (fun n: nu. n)' --cost 3").code == 2);
}

TEST_CASE("examples") {
  Result l = run("examples list");
  CHECK(l.code == 0);
  CHECK(l.out.find("abs_deriv") != std::string::npos);
  CHECK(l.out.find("factorial_nat") != std::string::npos);
  Result f = run("examples run factorial_nat");
  CHECK(f.code == 0);
  CHECK(f.out.find("24") != std::string::npos);
  CHECK(run("examples run no_such_program").code == 1);
}

TEST_CASE("verify emits json lines") {
  Result v = run("verify --suite soundness");
  CHECK(v.code == 0);
  std::istringstream lines(v.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    auto doc = nlohmann::json::parse(line);
    CHECK(doc["suite"] == "soundness");
    CHECK(doc["verdict"] == "pass");
    ++count;
  }
  CHECK(count == 100);
}
