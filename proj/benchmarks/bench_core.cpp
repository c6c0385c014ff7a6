// Microbenchmarks for the hot paths: parsing, evaluation, the graded-family
// fixpoint, type-refinement agreement, and formula enumeration.

#include <benchmark/benchmark.h>

#include <string>

#include "hybis/bisim.hpp"
#include "hybis/fixtures.hpp"
#include "hybis/model.hpp"
#include "hybis/oracle.hpp"
#include "hybis/semantics.hpp"
#include "hybis/syntax.hpp"
#include "hybis/translate.hpp"

namespace {

using namespace hybis;

const std::string kFormula =
    "down x . (<> (p & @'s <> ?x) | (exists y . @?y [] (p -> <> ?x)))";

void BM_ParsePrint(benchmark::State& state) {
  const KripkeModel m = fixture_model("fig2_chain", 8);
  for (auto _ : state) {
    const HybridFormula f = parse_hybrid(kFormula, m.sig());
    benchmark::DoNotOptimize(to_string(f));
  }
}
BENCHMARK(BM_ParsePrint);

void BM_Evaluate(benchmark::State& state) {
  const KripkeModel m = fixture_model("fig2_chain", state.range(0));
  const HybridFormula f = parse_hybrid(kFormula, m.sig());
  for (auto _ : state) {
    bool v = false;
    for (int w = 0; w < m.num_worlds(); ++w) v ^= sat_hybrid(m, {}, w, f);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_Evaluate)->Arg(8)->Arg(32);

void BM_StandardTranslation(benchmark::State& state) {
  const KripkeModel m = fixture_model("fig2_chain", 8);
  const HybridFormula f = parse_hybrid(kFormula, m.sig());
  for (auto _ : state) {
    const FolFormula out = st(f);
    benchmark::DoNotOptimize(to_string(out));
  }
}
BENCHMARK(BM_StandardTranslation);

void BM_MaxFamily(benchmark::State& state) {
  const KripkeModel m = fixture_model("fig2_chain", state.range(0));
  const KripkeModel n = fixture_model("fig2_cycle");
  const FeatureSet f = FeatureSet::parse("down");
  for (auto _ : state) {
    const KlFamily fam = max_kl_family(m, n, f, 1, 3);
    benchmark::DoNotOptimize(fam.at(0, 0).pairs.size());
  }
}
BENCHMARK(BM_MaxFamily)->Arg(4)->Arg(8)->Arg(16);

void BM_AgreeUpTo(benchmark::State& state) {
  const PointedModel a =
      PointedModel::at(fixture_model("fig2_chain", state.range(0)), "m0");
  const PointedModel b = PointedModel::at(fixture_model("fig2_cycle"), "n0");
  const FeatureSet f = FeatureSet::parse("down");
  for (auto _ : state) {
    benchmark::DoNotOptimize(agree_up_to(a, b, f, 1, 3));
  }
}
BENCHMARK(BM_AgreeUpTo)->Arg(4)->Arg(8)->Arg(16);

void BM_Enumerate(benchmark::State& state) {
  const KripkeModel m = fixture_model("fig2_chain", 4);
  const KripkeModel n = fixture_model("fig2_cycle");
  const FeatureSet f = FeatureSet::parse("down");
  for (auto _ : state) {
    const Enumeration e =
        enumerate(m, n, f, 1, static_cast<int>(state.range(0)), 2000);
    benchmark::DoNotOptimize(e.strata.back().members.size());
  }
}
BENCHMARK(BM_Enumerate)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
