#include <string>
#include <vector>

#include "doctest.h"
#include "hybis/fixtures.hpp"
#include "hybis/model.hpp"

using namespace hybis;

namespace {

const char* kTwoWorldDoc = R"({
  "worlds": ["w0", "w1"],
  "rel": [["w0", "w1"], ["w1", "w1"]],
  "prop": {"p": ["w0"], "q": []},
  "nom": {"root": "w0"}
})";

}  // namespace

TEST_CASE("model documents load with inferred signatures") {
  KripkeModel m = load_model(kTwoWorldDoc);
  CHECK(m.num_worlds() == 2);
  CHECK(m.sig().props == std::vector<std::string>{"p", "q"});
  CHECK(m.sig().noms == std::vector<std::string>{"root"});
  CHECK(m.require_world("w1") == 1);
  CHECK(m.has_edge(0, 1));
  CHECK(m.has_edge(1, 1));
  CHECK_FALSE(m.has_edge(1, 0));
  CHECK(m.prop_holds(m.prop_index("p"), 0));
  CHECK_FALSE(m.prop_holds(m.prop_index("p"), 1));
  CHECK(m.nom_target(m.nom_index("root")) == 0);
}

TEST_CASE("save and load round trip") {
  KripkeModel m = load_model(kTwoWorldDoc);
  KripkeModel again = load_model(save_model(m));
  CHECK(save_model(again) == save_model(m));
}

TEST_CASE("an explicit signature overrides document key order") {
  Signature sig{{"q", "p"}, {"root"}};
  KripkeModel m = load_model(kTwoWorldDoc, sig);
  CHECK(m.sig().props == std::vector<std::string>{"q", "p"});
  // a prop missing from the document gets an empty extent
  Signature wider{{"q", "p", "extra"}, {"root"}};
  KripkeModel w = load_model(kTwoWorldDoc, wider);
  CHECK_FALSE(w.prop_holds(w.prop_index("extra"), 0));
  // undeclared prop keys and nominal mismatches are rejected
  Signature narrower{{"p"}, {"root"}};
  CHECK_THROWS_AS(load_model(kTwoWorldDoc, narrower), ModelError);
  Signature wrong_nom{{"p", "q"}, {"start"}};
  CHECK_THROWS_AS(load_model(kTwoWorldDoc, wrong_nom), ModelError);
}

TEST_CASE("malformed documents are rejected") {
  CHECK_THROWS_AS(load_model("not json"), ModelError);
  CHECK_THROWS_AS(load_model("{}"), ModelError);
  CHECK_THROWS_AS(
      load_model(R"({"worlds": ["w", "w"], "rel": [], "prop": {}, "nom": {}})"),
      ModelError);
  CHECK_THROWS_AS(
      load_model(
          R"({"worlds": ["w"], "rel": [["w", "v"]], "prop": {}, "nom": {}})"),
      ModelError);
  CHECK_THROWS_AS(
      load_model(
          R"({"worlds": ["w"], "rel": [], "prop": {"p": ["v"]}, "nom": {}})"),
      ModelError);
  CHECK_THROWS_AS(
      load_model(
          R"({"worlds": ["w"], "rel": [], "prop": {}, "nom": {"s": "v"}})"),
      ModelError);
}

TEST_CASE("world lookups") {
  KripkeModel m = load_model(kTwoWorldDoc);
  CHECK(m.world_index("w0") == 0);
  CHECK(m.world_index("nope") == -1);
  CHECK_THROWS_AS(m.require_world("nope"), ModelError);
  CHECK(PointedModel::at(m, "w1").point == 1);
}

TEST_CASE("reachability is the reflexive transitive closure") {
  KripkeModel chain = fixture_model("fig2_chain", 3);  // m0 -> m1 -> m2
  std::vector<std::vector<bool>> r = reachability(chain);
  CHECK(r[0][0]);
  CHECK(r[0][2]);
  CHECK_FALSE(r[2][0]);
  CHECK_FALSE(r[1][0]);
}

TEST_CASE("disjoint union tags worlds and keeps the left interpretation") {
  KripkeModel a = fixture_model("fig1_m");
  KripkeModel b = fixture_model("fig1_n");
  KripkeModel u = disjoint_union(a, b);
  CHECK(u.num_worlds() == 5);
  CHECK(u.world_index("a:m0") == 0);
  CHECK(u.world_index("b:n0") >= 3);
  CHECK(u.has_edge(u.require_world("a:m0"), u.require_world("a:m1")));
  CHECK(u.has_edge(u.require_world("b:n0"), u.require_world("b:n1")));
  CHECK_FALSE(u.has_edge(u.require_world("a:m0"), u.require_world("b:n1")));
  // nominals point into the left part
  CHECK(u.nom_target(u.nom_index("s")) == u.require_world("a:m0"));
  std::vector<bool> mask = part_mask(u, "a");
  CHECK(mask[u.require_world("a:m2")]);
  CHECK_FALSE(mask[u.require_world("b:n1")]);
}

TEST_CASE("disjoint union requires one signature") {
  KripkeModel a = fixture_model("fig1_m");       // props {p}, noms {s,t}
  KripkeModel c = fixture_model("fig2_cycle");   // props {p}, noms {s}
  CHECK_THROWS_AS(disjoint_union(a, c), ModelError);
}

TEST_CASE("pair relations validate arity worlds and duplicates") {
  KripkeModel m = fixture_model("fig1_m");
  KripkeModel n = fixture_model("fig1_n");
  PairRelation rel = load_pair_relation(
      R"({"k": 1, "pairs": [{"left": ["m0", "m1"], "right": ["n0", "n1"]}]})");
  CHECK(rel.k == 1);
  CHECK_NOTHROW(rel.validate(m, n));
  CHECK(load_pair_relation(save_pair_relation(rel)).pairs == rel.pairs);

  PairRelation bad_arity = rel;
  bad_arity.pairs[0].left = {"m0"};
  CHECK_THROWS_AS(bad_arity.validate(m, n), ModelError);

  PairRelation bad_world = rel;
  bad_world.pairs[0].right = {"n0", "n7"};
  CHECK_THROWS_AS(bad_world.validate(m, n), ModelError);

  PairRelation dup = rel;
  dup.pairs.push_back(dup.pairs[0]);
  CHECK_THROWS_AS(dup.validate(m, n), ModelError);

  CHECK_THROWS_AS(load_pair_relation("[]"), ModelError);
}

TEST_CASE("fixture shapes match their figures") {
  KripkeModel m1 = fixture_model("fig1_m");
  CHECK(m1.worlds() == std::vector<std::string>{"m0", "m1", "m2"});
  CHECK(m1.edges().size() == 2);
  CHECK(m1.nom_target(m1.nom_index("t")) == m1.require_world("m1"));
  // p holds everywhere on every fixture
  for (int w = 0; w < m1.num_worlds(); ++w)
    CHECK(m1.prop_holds(m1.prop_index("p"), w));

  KripkeModel chain = fixture_model("fig2_chain", 4);  // m0 .. m3
  CHECK(chain.num_worlds() == 4);
  CHECK(chain.edges().size() == 3);
  CHECK(chain.successors(chain.require_world("m3")).empty());

  KripkeModel cycle = fixture_model("fig2_cycle");
  CHECK(cycle.has_edge(0, 1));
  CHECK(cycle.has_edge(1, 0));

  // the two-step shortcut m0 -> m2 alongside m0 -> m1 -> m2
  KripkeModel m3 = fixture_model("fig3_m", 5);
  CHECK(m3.has_edge(m3.require_world("m0"), m3.require_world("m2")));
  CHECK(m3.has_edge(m3.require_world("m1"), m3.require_world("m2")));

  KripkeModel n3 = fixture_model("fig3_n", 4);
  CHECK(n3.worlds() == std::vector<std::string>{"n0", "n1", "n2", "n3", "n4"});

  CHECK_THROWS_AS(fixture_model("fig9"), DomainError);
  CHECK_THROWS_AS(fixture_model("fig3_m", 1), DomainError);
}

TEST_CASE("the unravelled fixture is a tree") {
  KripkeModel u = fixture_model("fig3_u", 5);
  // tree shape: every world except the root has exactly one parent
  std::vector<int> parents(static_cast<size_t>(u.num_worlds()), 0);
  for (const auto& [from, to] : u.edges()) parents[static_cast<size_t>(to)]++;
  int roots = 0;
  for (int w = 0; w < u.num_worlds(); ++w) {
    if (parents[static_cast<size_t>(w)] == 0) {
      ++roots;
      CHECK(u.world_name(w) == "u0");
    } else {
      CHECK(parents[static_cast<size_t>(w)] == 1);
    }
  }
  CHECK(roots == 1);
}

TEST_CASE("fixture pairs bundle the dashed relation") {
  FixtureTriple fig1 = fixture_pair("fig1");
  CHECK(fig1.relation.k == 0);
  CHECK(fig1.relation.pairs.size() == 3);
  CHECK_NOTHROW(fig1.relation.validate(fig1.left, fig1.right));

  FixtureTriple fig2 = fixture_pair("fig2", 4);
  CHECK(fig2.relation.pairs.size() == 4);
  CHECK_NOTHROW(fig2.relation.validate(fig2.left, fig2.right));

  for (const char* name : {"fig3_mn", "fig3_un"}) {
    FixtureTriple t = fixture_pair(name, 5);
    CHECK_NOTHROW(t.relation.validate(t.left, t.right));
  }
}
