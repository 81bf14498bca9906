#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "support/generators.hpp"

using gvlam::testgen::data_path;

namespace {

struct Run {
  int rc;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(GVLAM_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string d(const char* rel) { return "'" + data_path(rel) + "'"; }

bool has(const Run& r, const char* s) { return r.out.find(s) != std::string::npos; }

}  // namespace

TEST_CASE("check") {
  auto ok = run("check " + d("theories/timed.thy") + " " + d("terms/eq1_lhs.term"));
  CHECK(ok.rc == 0);
  CHECK(has(ok, "X -o X"));
  auto dup = run("check " + d("theories/timed.thy") + " " + d("terms/dup.term") + " -c 'x : X'");
  CHECK(dup.rc == 1);
  auto parse = run("check " + d("theories/timed.thy") + " 'fn x : X =>'");
  CHECK(parse.rc == 65);
  auto deriv = run("check " + d("theories/timed.thy") + " 'wait_1(x)' -c 'x : X' --emit-derivation");
  CHECK(deriv.rc == 0);
  CHECK(has(deriv, "(ax"));
}

TEST_CASE("prove") {
  auto p = run("prove " + d("theories/timed.thy") + " " + d("proofs/promotion.proof"));
  CHECK(p.rc == 0);
  CHECK(has(p, "bound: 2"));
  auto w = run("prove " + d("theories/prob.thy") + " " + d("proofs/walk.proof"));
  CHECK(w.rc == 0);
  CHECK(has(w, "3.866025403784438"));
  CHECK(run("prove " + d("theories/timed.thy") + " " + d("proofs/bad_weak.proof")).rc == 2);
  CHECK(run("prove " + d("theories/timed_directed.thy") + " " + d("proofs/sym_wait.proof")).rc == 2);
  CHECK(run("prove " + d("theories/timed.thy") + " /nonexistent.proof").rc == 64);
  CHECK(run("prove /nonexistent.thy " + d("proofs/promotion.proof")).rc == 65);
}

TEST_CASE("bound") {
  auto b = run("bound " + d("theories/timed.thy") + " " + d("terms/eq1_lhs.term") + " " + d("terms/eq1_rhs.term"));
  CHECK(b.rc == 0);
  CHECK(has(b, "bound: 1"));
  auto e = run("bound " + d("theories/timed.thy") + " 'wait_1(x)' 'wait_4(x)' -c 'x : X' --emit-proof");
  CHECK(e.rc == 0);
  CHECK(has(e, "(axiom wait"));
  auto f = run("bound " + d("theories/timed.thy") + " 'wait_1(x)' 'wait_1(wait_1(x))' -c 'x : X'");
  CHECK(f.rc == 3);
  CHECK(has(f, "FAIL"));
}

TEST_CASE("model") {
  auto dist = run("model distance " + d("theories/timed.thy") + " " + d("terms/eq1_lhs.term") + " " +
                  d("terms/eq1_rhs.term") + " --model 'timed(8)'");
  CHECK(dist.rc == 0);
  CHECK(has(dist, "distance: 1"));
  auto small = run("model distance " + d("theories/timed.thy") + " " + d("terms/eq1_lhs.term") + " " +
                   d("terms/eq1_rhs.term") + " --model " + d("models/small.model"));
  CHECK(small.rc == 0);
  CHECK(has(small, "distance: 1"));
  auto missing = run("model eval " + d("theories/timed.thy") + " 'wait_3(x)' -c 'x : X' --model " +
                     d("models/small.model"));
  CHECK(missing.rc == 4);
  auto ax = run("model verify-axioms " + d("theories/timed.thy") + " --model 'timed(8)' --max 3");
  CHECK(ax.rc == 0);
  auto sweep = run("model prob-sweep --max 4 --format csv");
  CHECK(sweep.rc == 0);
  CHECK(has(sweep, "2,1,1,1/2"));
  CHECK(run("model gaussian-grid --max-k 2").rc == 0);
}

TEST_CASE("oracle and usage") {
  auto o = run("oracle diaconis 3 2 2");
  CHECK(o.rc == 0);
  CHECK(has(o, "PASS"));
  CHECK(run("oracle perm 4").rc == 0);
  CHECK(run("oracle gaussian-tv 0 1 1 2").rc == 0);
  CHECK(run("frobnicate").rc == 64);
  CHECK(run("check").rc == 64);
}
