#include "doctest.h"

#include "gvlam/error.hpp"
#include "gvlam/parser.hpp"
#include "gvlam/vequation.hpp"
#include "support/generators.hpp"

using namespace gvlam;
using testgen::data_path;

namespace {

const Theory& timed() {
  static const Theory th = load_theory(data_path("theories/timed.thy"));
  return th;
}

VProof proof_file(const Theory& th, const char* rel) { return parse_proof(th, read_file(data_path(rel))); }

QuantaleValue m(const Rational& q) { return QuantaleValue::metric(Magnitude(q)); }

}  // namespace

TEST_CASE("proofs from the data directory") {
  VEquation s = validate(timed(), proof_file(timed(), "proofs/sym_wait.proof"));
  CHECK(alpha_eq(s.lhs, parse_term("wait_2(x)")));
  CHECK(alpha_eq(s.rhs, parse_term("wait_1(x)")));
  CHECK(s.bound == m(1));

  VEquation t = validate(timed(), proof_file(timed(), "proofs/trans_wait.proof"));
  CHECK(alpha_eq(t.lhs, parse_term("wait_1(wait_1(x))")));
  CHECK(alpha_eq(t.rhs, parse_term("wait_3(x)")));
  CHECK(t.bound == m(1));

  VEquation p = validate(timed(), proof_file(timed(), "proofs/promotion.proof"));
  CHECK(p.bound == m(2));
  CHECK(p.type == parse_type("!2 (X -o X)"));
  CHECK(to_string(p).find("=[2]") != std::string::npos);
}

TEST_CASE("rule misapplications are reported at the node") {
  try {
    validate(timed(), proof_file(timed(), "proofs/bad_weak.proof"));
    FAIL("weakening to a smaller bound accepted");
  } catch (const ProofError& e) {
    CHECK(e.path().empty());
  }
  Theory directed = load_theory(data_path("theories/timed_directed.thy"));
  CHECK_THROWS_AS(validate(directed, proof_file(directed, "proofs/sym_wait.proof")), ProofError);
  // a bad premise deeper down
  VProof deep = parse_proof(timed(), "(trans (axiom wait :n 1 :m 2) (weak :q 0 (axiom wait :n 2 :m 3)))");
  try {
    validate(timed(), deep);
    FAIL("no error");
  } catch (const ProofError& e) {
    CHECK(e.path() == Path{1});
  }
  CHECK_THROWS_AS(validate(timed(), parse_proof(timed(), "(axiom nosuch)")), ProofError);
  CHECK_THROWS_AS(validate(timed(), parse_proof(timed(), "(trans (axiom wait :n 1 :m 2) (axiom wait :n 1 :m 2))")),
                  ProofError);
  CHECK_THROWS_AS(parse_proof(timed(), "(frobnicate)"), ParseError);
}

TEST_CASE("annotate and print") {
  VProof p = annotate(timed(), proof_file(timed(), "proofs/promotion.proof"));
  REQUIRE(p.concl);
  CHECK(p.premises.size() == 1);
  REQUIRE(p.premises[0].concl);
  CHECK(p.premises[0].concl->bound == m(1));
  CHECK(proof_size(p) == 3);
  VProof again = parse_proof(timed(), to_string(p));
  CHECK(validate(timed(), again).bound == p.concl->bound);
  CHECK(bound_report(*p.concl) == "2");
}

TEST_CASE("bound synthesis") {
  Context none;
  auto r = synthesize(timed(), none, parse_term("fn x : X => wait_1(x)"), parse_term("fn x : X => wait_2(x)"));
  REQUIRE(r);
  CHECK(r->eq.bound == m(1));
  CHECK(validate(timed(), r->proof).bound == m(1));

  auto same = synthesize(timed(), parse_context("x : X"), parse_term("wait_2(x)"), parse_term("wait_2(x)"));
  REQUIRE(same);
  CHECK(same->eq.bound == m(0));

  auto beta = synthesize(timed(), parse_context("x : X"), parse_term("(fn y : X => wait_1(y)) x"), parse_term("wait_3(x)"),
                         SynthOptions{.normalize_first = true});
  REQUIRE(beta);
  CHECK(beta->eq.bound == m(2));

  CHECK_THROWS_AS(synthesize(timed(), parse_context("x : X"), parse_term("wait_1(x)"), parse_term("fn y : X => y")),
                  TypeError);
}

TEST_CASE("generated proofs validate and round-trip") {
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    testgen::ProofGen g(seed);
    VProof p = g.proof(3);
    VEquation e = validate(testgen::timed_max_theory(), p);
    VProof back = parse_proof(testgen::timed_max_theory(), to_string(p));
    VEquation e2 = validate(testgen::timed_max_theory(), back);
    CHECK(alpha_eq(e.lhs, e2.lhs));
    CHECK(alpha_eq(e.rhs, e2.rhs));
    CHECK(e.bound == e2.bound);
    ++ok;
  }
  CHECK(ok == 40);
}
