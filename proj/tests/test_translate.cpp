#include <string>
#include <vector>

#include "doctest.h"
#include "hybis/fixtures.hpp"
#include "hybis/semantics.hpp"
#include "hybis/translate.hpp"

using namespace hybis;

namespace {

Signature sig_pq() { return Signature{{"p", "q"}, {"s", "t"}}; }

FolFormula st_of(const std::string& text) {
  return st(parse_hybrid(text, sig_pq()));
}

// sat_hybrid at w  ==  sat_fol of the translation with stx := w
void check_evaluation_equivalence(const KripkeModel& m,
                                  const std::string& text) {
  HybridFormula f = parse_hybrid(text, m.sig());
  FolFormula t = st(f);
  for (int w = 0; w < m.num_worlds(); ++w) {
    CAPTURE(text);
    CAPTURE(m.world_name(w));
    CHECK(sat_hybrid(m, {}, w, f) ==
          sat_fol(m, {{kDesignatedX, w}}, t));
  }
}

// round trip through both translations preserves the value everywhere
void check_round_trip(const KripkeModel& m, const std::string& text) {
  HybridFormula f = parse_hybrid(text, m.sig());
  HybridFormula back = sbt(st(f));
  for (int w = 0; w < m.num_worlds(); ++w) {
    CAPTURE(text);
    CAPTURE(m.world_name(w));
    CHECK(sat_hybrid(m, {}, w, f) == sat_hybrid(m, {}, w, back));
  }
}

}  // namespace

TEST_CASE("standard translation clause shapes") {
  CHECK(to_string(st_of("p")) == "P(stx)");
  CHECK(to_string(st_of("'t")) == "'t = stx");
  CHECK(to_string(st_of("?x")) == "x = stx");
  CHECK(to_string(st_of("false")) == "false");
  CHECK(to_string(st_of("<> p")) == "exists sty . (R(stx,sty) & P(sty))");
  CHECK(to_string(st_of("@'t p")) == "exists sty . (sty = 't & P(sty))");
  CHECK(to_string(st(parse_hybrid("p", sig_pq()), StTarget::Y)) == "P(sty)");
  // the designated variable swaps under each modal step
  CHECK(to_string(st_of("<> <> p")) ==
        "exists sty . (R(stx,sty) & (exists stx . (R(sty,stx) & P(stx))))");
  // down x quantifies x onto the current target
  CHECK(to_string(st_of("down x . <> ?x")) ==
        "exists x . (x = stx & (exists sty . (R(stx,sty) & x = sty)))");
  // exists x quantifies x without moving the target
  CHECK(to_string(st_of("exists x . (?x & p)")) ==
        "exists x . (x = stx & P(stx))");
}

TEST_CASE("standard translation rejects designated variable capture") {
  CHECK_THROWS_AS(st(HybridFormula::down("stx", HybridFormula::wvar("stx"))),
                  DomainError);
}

TEST_CASE("evaluation equivalence on handpicked formulas") {
  std::vector<std::string> formulas = {
      "p",
      "'t",
      "~'s",
      "p & ~'t",
      "<> p",
      "[] (p -> 't)",
      "<> 't",
      "@'t <> p",
      "@'s (p | <> 's)",
      "down x . <> ?x",
      "down x . <> @?x p",
      "down x . [] ~?x",
      "exists x . (?x & <> p)",
      "exists x . @?x (p & ~'t)",
      "down x . exists y . @?y <> ?x",
  };
  for (const char* model : {"fig1_m", "fig1_n"}) {
    KripkeModel m = fixture_model(model);
    for (const std::string& text : formulas)
      check_evaluation_equivalence(m, text);
  }
}

TEST_CASE("back translation inverts the standard translation") {
  std::vector<std::string> formulas = {
      "p",
      "'s",
      "p -> 't & p",
      "<> (p & 't)",
      "[] [] p",
      "@'t p",
      "down x . <> ?x",
      "down x . @'s <> ?x",
      "exists x . (?x & p)",
  };
  for (const char* model : {"fig1_m", "fig1_n"}) {
    KripkeModel m = fixture_model(model);
    for (const std::string& text : formulas) check_round_trip(m, text);
  }
}

TEST_CASE("back translation handles reserved variable names") {
  // the translation image uses stx/sty; the output is renamed, re-parseable,
  // and closed because the one free variable gets bound on top
  HybridFormula h = sbt(parse_fol("exists sty . (R(stx,sty) & P(sty))"));
  CHECK(is_sentence(h));
  CHECK(to_string(h).find("stx") == std::string::npos);
  CHECK(to_string(h) == "exists v2 . (?v2 & (exists v1 . (@?v2 <> ?v1 & @?v1 p)))");
  HybridFormula closed = sbt(parse_fol("exists stx . P(stx)"));
  CHECK(to_string(closed) == "exists v1 . @?v1 p");
}

TEST_CASE("back translation rejects more than one free variable") {
  CHECK_THROWS_AS(sbt(parse_fol("R(v1,v2)")), DomainError);
  CHECK_NOTHROW(sbt(parse_fol("exists v2 . R(v1,v2)")));
}

TEST_CASE("relativisation bounds every quantifier") {
  FolFormula f = parse_fol("exists v1 . forall v2 . (R(v1,v2) -> P(v2))");
  CHECK(to_string(relativise(f, "U")) ==
        "exists v1 . (U(v1) & (forall v2 . (U(v2) -> R(v1,v2) -> P(v2))))");
  CHECK_THROWS_AS(relativise(parse_fol("U(v1)"), "U"), DomainError);
}

TEST_CASE("relativised sentences see only the chosen part of a union") {
  KripkeModel a = fixture_model("fig1_m");
  KripkeModel b = fixture_model("fig1_n");
  KripkeModel u = disjoint_union(a, b);
  FolExpansion ex;
  ex.preds.emplace_back("U", part_mask(u, "a"));
  for (const char* text : {
           "exists v1 . forall v2 . ~R(v2,v1)",  // some world has no parent
           "forall v1 . (P(v1) -> exists v2 . R(v1,v2))",
           "exists v1 . exists v2 . (R(v1,v2) & R(v2,v1))",
           "exists v1 . (v1 = 't & (exists v2 . R(v2,v1)))",
       }) {
    FolFormula f = parse_fol(text);
    CAPTURE(text);
    CHECK(sat_fol(a, {}, f) == sat_fol(u, ex, {}, relativise(f, "U")));
  }
}

TEST_CASE("the reduction formula combines part and whole") {
  FolFormula sigma = parse_fol("exists v1 . P(v1)");
  FolFormula phi = parse_fol("Q(v1)");
  CHECK(to_string(psi_sigma(sigma, phi, "U")) ==
        "Q(v1) | ((exists v1 . U(v1)) -> exists v1 . (U(v1) & P(v1)))");
  // sigma must be closed, phi must have exactly one free variable,
  // and the predicate must be fresh in both
  CHECK_THROWS_AS(psi_sigma(parse_fol("P(v1)"), phi, "U"), DomainError);
  CHECK_THROWS_AS(psi_sigma(sigma, parse_fol("exists v1 . Q(v1)"), "U"),
                  DomainError);
  CHECK_THROWS_AS(psi_sigma(sigma, phi, "Q"), DomainError);
  CHECK_THROWS_AS(psi_sigma(sigma, phi), DomainError);  // default P in sigma
}
