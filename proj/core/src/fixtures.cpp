#include "hybis/fixtures.hpp"

#include <utility>

#include "hybis/syntax.hpp"

namespace hybis {

namespace {

using Edges = std::vector<std::pair<std::string, std::string>>;
using Noms = std::vector<std::pair<std::string, std::string>>;

KripkeModel build(std::vector<std::string> noms, std::vector<std::string> worlds,
                  Edges edges, Noms targets) {
  Signature sig;
  sig.props = {"p"};
  sig.noms = std::move(noms);
  std::vector<std::string> nom_targets;
  for (const std::string& name : sig.noms)
    for (const auto& [nom, world] : targets)
      if (nom == name) nom_targets.push_back(world);
  // every fixture makes p true everywhere
  std::vector<std::vector<std::string>> valuation = {worlds};
  return KripkeModel(sig, std::move(worlds), std::move(edges),
                     std::move(valuation), std::move(nom_targets));
}

std::vector<std::string> indexed(const std::string& stem, int from, int to) {
  std::vector<std::string> out;
  for (int i = from; i <= to; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

int effective(int param, int fallback, int min_value, const std::string& name) {
  int v = param == 0 ? fallback : param;
  if (v < min_value)
    throw DomainError("fixture " + name + ": parameter must be >= " +
                      std::to_string(min_value));
  return v;
}

KripkeModel fig1_m() {
  return build({"s", "t"}, {"m0", "m1", "m2"}, {{"m0", "m1"}, {"m0", "m2"}},
               {{"s", "m0"}, {"t", "m1"}});
}

KripkeModel fig1_n() {
  return build({"s", "t"}, {"n0", "n1"}, {{"n0", "n1"}},
               {{"s", "n0"}, {"t", "n1"}});
}

KripkeModel fig2_chain(int len) {
  Edges edges;
  for (int i = 0; i + 1 < len; ++i)
    edges.emplace_back("m" + std::to_string(i), "m" + std::to_string(i + 1));
  return build({"s"}, indexed("m", 0, len - 1), std::move(edges), {{"s", "m0"}});
}

KripkeModel fig2_cycle() {
  return build({"s"}, {"n0", "n1"}, {{"n0", "n1"}, {"n1", "n0"}}, {{"s", "n0"}});
}

KripkeModel fig3_m(int depth) {
  Edges edges = {{"m0", "m1"}, {"m0", "m2"}, {"m1", "m2"}};
  for (int i = 2; i < depth; ++i)
    edges.emplace_back("m" + std::to_string(i), "m" + std::to_string(i + 1));
  return build({"s"}, indexed("m", 0, depth), std::move(edges), {{"s", "m0"}});
}

KripkeModel fig3_n(int depth) {
  Edges edges;
  for (int i = 0; i < depth; ++i)
    edges.emplace_back("n" + std::to_string(i), "n" + std::to_string(i + 1));
  return build({"s"}, indexed("n", 0, depth), std::move(edges), {{"s", "n0"}});
}

// Tree unravelling of fig3_m, truncated at path depth D: the long branch
// u0 -> u1 -> ... -> uD follows m0 m1 m2 m3 ..., the short branch
// u0 -> v2 -> ... -> v(D+1) follows m0 m2 m3 ... (worlds named by the base
// world they copy, so the short branch sits one index ahead).
KripkeModel fig3_u(int depth) {
  std::vector<std::string> worlds = {"u0"};
  for (int i = 1; i <= depth; ++i) worlds.push_back("u" + std::to_string(i));
  for (int j = 2; j <= depth + 1; ++j) worlds.push_back("v" + std::to_string(j));
  Edges edges = {{"u0", "u1"}, {"u0", "v2"}};
  for (int i = 1; i < depth; ++i)
    edges.emplace_back("u" + std::to_string(i), "u" + std::to_string(i + 1));
  for (int j = 2; j <= depth; ++j)
    edges.emplace_back("v" + std::to_string(j), "v" + std::to_string(j + 1));
  return build({"s"}, std::move(worlds), std::move(edges), {{"s", "u0"}});
}

PairRelation pairs0(std::vector<std::pair<std::string, std::string>> ps) {
  PairRelation rel;
  rel.k = 0;
  for (auto& [l, r] : ps) rel.pairs.push_back(NamedPair{{l}, {r}});
  return rel;
}

}  // namespace

KripkeModel fixture_model(const std::string& name, int param) {
  if (name == "fig1_m") return fig1_m();
  if (name == "fig1_n") return fig1_n();
  if (name == "fig2_chain") return fig2_chain(effective(param, 4, 1, name));
  if (name == "fig2_cycle") return fig2_cycle();
  if (name == "fig3_m") return fig3_m(effective(param, 5, 2, name));
  if (name == "fig3_n") return fig3_n(effective(param, 5, 2, name));
  if (name == "fig3_u") return fig3_u(effective(param, 5, 2, name));
  throw DomainError("unknown fixture model: " + name);
}

FixtureTriple fixture_pair(const std::string& name, int param) {
  if (name == "fig1") {
    return {fig1_m(), fig1_n(),
            pairs0({{"m0", "n0"}, {"m1", "n1"}, {"m2", "n1"}})};
  }
  if (name == "fig2") {
    int len = effective(param, 4, 1, name);
    std::vector<std::pair<std::string, std::string>> ps;
    for (int i = 0; i < len; ++i)
      ps.emplace_back("m" + std::to_string(i), "n" + std::to_string(i % 2));
    return {fig2_chain(len), fig2_cycle(), pairs0(std::move(ps))};
  }
  if (name == "fig3_mn") {
    int d = effective(param, 5, 2, name);
    std::vector<std::pair<std::string, std::string>> ps = {{"m0", "n0"}};
    for (int i = 1; i <= d; ++i)
      ps.emplace_back("m" + std::to_string(i), "n" + std::to_string(i));
    for (int i = 1; i + 1 <= d; ++i)
      ps.emplace_back("m" + std::to_string(i + 1), "n" + std::to_string(i));
    return {fig3_m(d), fig3_n(d), pairs0(std::move(ps))};
  }
  if (name == "fig3_un") {
    int d = effective(param, 5, 2, name);
    std::vector<std::pair<std::string, std::string>> ps = {{"u0", "n0"}};
    for (int i = 1; i <= d; ++i)
      ps.emplace_back("u" + std::to_string(i), "n" + std::to_string(i));
    for (int i = 1; i <= d; ++i)
      ps.emplace_back("v" + std::to_string(i + 1), "n" + std::to_string(i));
    return {fig3_u(d), fig3_n(d), pairs0(std::move(ps))};
  }
  throw DomainError("unknown fixture pair: " + name);
}

std::vector<std::string> fixture_model_names() {
  return {"fig1_m", "fig1_n", "fig2_chain", "fig2_cycle",
          "fig3_m", "fig3_n", "fig3_u"};
}

std::vector<std::string> fixture_pair_names() {
  return {"fig1", "fig2", "fig3_mn", "fig3_un"};
}

}  // namespace hybis
