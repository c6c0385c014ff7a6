#include <string>
#include <vector>

#include "doctest.h"
#include "hybis/fixtures.hpp"
#include "hybis/semantics.hpp"

using namespace hybis;

namespace {

// w0 -> w1 -> w1; p at w0 only, q at w1 only, root names w0.
KripkeModel two_worlds() {
  Signature sig{{"p", "q"}, {"root"}};
  return KripkeModel(sig, {"w0", "w1"}, {{"w0", "w1"}, {"w1", "w1"}},
                     {{"w0"}, {"w1"}}, {"w0"});
}

bool holds(const KripkeModel& m, const std::string& world,
           const std::string& text, const WvarAssignment& env = {}) {
  return sat_hybrid(m, env, m.require_world(world),
                    parse_hybrid(text, m.sig()));
}

}  // namespace

TEST_CASE("atomic and boolean satisfaction") {
  KripkeModel m = two_worlds();
  CHECK(holds(m, "w0", "p"));
  CHECK_FALSE(holds(m, "w1", "p"));
  CHECK(holds(m, "w0", "'root"));
  CHECK_FALSE(holds(m, "w1", "'root"));
  CHECK_FALSE(holds(m, "w0", "false"));
  CHECK(holds(m, "w0", "true"));
  CHECK(holds(m, "w0", "~q"));
  CHECK(holds(m, "w0", "p | q"));
  CHECK_FALSE(holds(m, "w0", "p & q"));
  CHECK(holds(m, "w0", "p -> ~q"));
  CHECK(holds(m, "w1", "p -> q"));
}

TEST_CASE("diamond and box follow the edges") {
  KripkeModel m = two_worlds();
  CHECK(holds(m, "w0", "<> q"));
  CHECK_FALSE(holds(m, "w0", "<> p"));
  CHECK(holds(m, "w1", "<> q"));   // self loop
  CHECK(holds(m, "w0", "[] q"));
  CHECK(holds(m, "w1", "[] q"));
  // a world with no successors satisfies every box
  KripkeModel chain = fixture_model("fig2_chain", 2);  // m0 -> m1
  CHECK(holds(chain, "m1", "[] false"));
  CHECK_FALSE(holds(chain, "m1", "<> true"));
}

TEST_CASE("world variables read the assignment") {
  KripkeModel m = two_worlds();
  CHECK(holds(m, "w0", "?x", {{"x", 0}}));
  CHECK_FALSE(holds(m, "w1", "?x", {{"x", 0}}));
  // the innermost binding wins
  CHECK(holds(m, "w1", "?x", {{"x", 0}, {"x", 1}}));
  CHECK_THROWS_AS(holds(m, "w0", "?x"), EvalError);
}

TEST_CASE("down binds the current point") {
  KripkeModel m = two_worlds();
  CHECK(holds(m, "w0", "down x . ?x"));
  CHECK(holds(m, "w1", "down x . <> ?x"));        // via the self loop
  CHECK_FALSE(holds(m, "w0", "down x . <> ?x"));  // w0 is not reflexive
  CHECK(holds(m, "w0", "down x . <> ~?x"));
  // shadowing: the inner binder wins inside, the outer applies again outside
  CHECK(holds(m, "w0", "down x . <> (down x . ?x)"));
}

TEST_CASE("at jumps to the named place") {
  KripkeModel m = two_worlds();
  CHECK(holds(m, "w1", "@'root p"));
  CHECK_FALSE(holds(m, "w1", "@'root q"));
  CHECK(holds(m, "w1", "@?y p", {{"y", 0}}));
  CHECK(holds(m, "w0", "down x . <> @?x p"));
  CHECK_THROWS_AS(holds(m, "w0", "@?y p"), EvalError);
}

TEST_CASE("exists picks a world without moving the point") {
  KripkeModel m = two_worlds();
  CHECK(holds(m, "w0", "exists x . (?x & p)"));        // x := w0
  CHECK(holds(m, "w0", "exists x . @?x q"));           // x := w1
  CHECK_FALSE(holds(m, "w0", "exists x . (?x & q)"));  // q fails at w0
  CHECK(holds(m, "w1", "exists x . (q & @?x p)"));
}

TEST_CASE("named world checks on the first figure") {
  KripkeModel n = fixture_model("fig1_n");
  CHECK(holds(n, "n1", "'t"));
  CHECK_FALSE(holds(n, "n0", "'t"));
  CHECK(holds(n, "n0", "<> 't"));
  KripkeModel m = fixture_model("fig1_m");
  CHECK_FALSE(holds(m, "m2", "'t"));
  CHECK(holds(m, "m0", "<> 't & <> ~'t"));
}

TEST_CASE("slot names and assignments") {
  CHECK(slot_name(1) == "x1");
  CHECK(slot_name(3) == "x3");
  WvarAssignment env = slot_assignment({4, 7});
  REQUIRE(env.size() == 2);
  CHECK(env[0] == std::pair<std::string, int>{"x1", 4});
  CHECK(env[1] == std::pair<std::string, int>{"x2", 7});
}

TEST_CASE("first-order satisfaction over the same structures") {
  KripkeModel m = two_worlds();
  auto sat = [&](const std::string& text, const FolValuation& val = {}) {
    return sat_fol(m, val, parse_fol(text));
  };
  CHECK(sat("P(v1)", {{"v1", 0}}));
  CHECK_FALSE(sat("P(v1)", {{"v1", 1}}));
  CHECK(sat("R(v1,v2)", {{"v1", 0}, {"v2", 1}}));
  CHECK_FALSE(sat("R(v1,v2)", {{"v1", 1}, {"v2", 0}}));
  CHECK(sat("v1 = 'root", {{"v1", 0}}));
  CHECK(sat("(exists v1 . (P(v1) & R(v1,v1))) | (exists v1 . Q(v1))"));
  CHECK(sat("forall v1 . (P(v1) -> exists v2 . (R(v1,v2) & Q(v2)))"));
  CHECK_FALSE(sat("forall v1 . P(v1)"));
  CHECK(sat("forall v1 . (Q(v1) -> R(v1,v1))"));
}

TEST_CASE("first-order evaluation rejects unknown symbols") {
  KripkeModel m = two_worlds();
  CHECK_THROWS_AS(sat_fol(m, {}, parse_fol("P(v1)")), EvalError);  // unbound
  CHECK_THROWS_AS(sat_fol(m, {{"v1", 0}}, parse_fol("Zz(v1)")), EvalError);
  CHECK_THROWS_AS(sat_fol(m, {{"v1", 0}}, parse_fol("v1 = 'other")),
                  EvalError);
}

TEST_CASE("expansions add predicates and constants") {
  KripkeModel m = two_worlds();
  FolExpansion ex;
  ex.preds.emplace_back("U", std::vector<bool>{true, false});
  ex.consts.emplace_back("here", 1);
  CHECK(sat_fol(m, ex, {}, parse_fol("exists v1 . (U(v1) & P(v1))")));
  CHECK_FALSE(sat_fol(m, ex, {}, parse_fol("exists v1 . (U(v1) & Q(v1))")));
  CHECK(sat_fol(m, ex, {}, parse_fol("exists v1 . (v1 = 'here & Q(v1))")));
  // clashing with the signature is an error, not a shadow
  FolExpansion clash;
  clash.preds.emplace_back("P", std::vector<bool>{true, true});
  CHECK_THROWS_AS(sat_fol(m, clash, {{"v1", 0}}, parse_fol("P(v1)")),
                  EvalError);
}
