#pragma once
// Brute-force semantic side of the toolkit: enumerate formulas stratum by
// stratum with deduplication by truth vector, decide bounded-degree agreement
// of two pointed models exactly, extract separating formulas, and build a
// single formula axiomatising a finite class of pointed models up to a degree
// bound.
//
// Everything here is relative to a fixed pair of models sharing a signature,
// a feature selection F, a slot pool x1..xk, and a degree bound L.  The
// formula language is gated by F exactly as in the bisim module: world-
// variable atoms are always available (for k >= 1), nominal atoms need nom,
// @-jumps to slots need at, @-jumps to nominals need at+nom, and the binders
// over slot j need down resp. exists.
//
// Evaluation contexts for width k are all (tuple, current) pairs: first every
// context of the left model, then every context of the right one.  Within a
// side, contexts are ordered by their mixed-radix code (slot 1 varies
// fastest, the current world slowest).  A TruthVector holds one bit per
// context in that order.
//
// agree_up_to is computed by stratified refinement of context types, not by
// enumeration, so it is exact and needs no representative cap; enumeration
// reports cap overflow in-band (an incomplete Enumeration) instead of
// failing, so oversized instances degrade to a best-effort formula list.

#include <cstdint>
#include <optional>
#include <vector>

#include "hybis/model.hpp"
#include "hybis/syntax.hpp"

namespace hybis {

// Bit per evaluation context of the two models under test.  Equal vectors
// mean the formulas are interchangeable on those two models.
struct TruthVector {
  std::vector<std::uint64_t> words;

  bool operator==(const TruthVector& other) const = default;
  bool operator<(const TruthVector& other) const { return words < other.words; }

  bool get(long long context) const {
    return (words[static_cast<size_t>(context >> 6)] >> (context & 63)) & 1u;
  }
};

// One class representative: the first (smallest, earliest-generated) formula
// seen with its vector.
struct Representative {
  HybridFormula formula;
  TruthVector vector;
};

// All distinctions expressible up to one degree; members of stratum d-1 are
// carried into stratum d, so vector sets grow monotonically.
struct Stratum {
  int degree = 0;
  std::vector<Representative> members;
};

struct Enumeration {
  std::vector<Stratum> strata;  // strata[d] covers degree <= d
  // True when every stratum saturated (closing again adds no vectors);
  // false when some stratum stopped at the representative cap.
  bool complete = true;
  int capped_stratum = -1;  // first stratum that hit the cap, or -1
};

// HYBIS_ORACLE_CAP when set to a positive integer, else 200000.
long long default_oracle_cap();

// Evaluates f at every context of the two models (slow path, straight
// through sat_hybrid; the enumeration computes the same bits incrementally).
TruthVector truth_vector(const KripkeModel& m, const KripkeModel& n, int k,
                         const HybridFormula& f);

// Representatives of every truth-vector class reachable in the gated
// language, stratified by degree 0..L.  cap < 0 means default_oracle_cap();
// the cap bounds both the context count and the representatives per stratum.
Enumeration enumerate(const KripkeModel& m, const KripkeModel& n,
                      const FeatureSet& f, int k, int L, long long cap = -1);

// True iff the two points satisfy the same formulas of degree <= L in the
// F-gated language over slots x1..xk, with every slot initially naming the
// point itself.  Exact (type refinement, no enumeration).
bool agree_up_to(const PointedModel& mp, const PointedModel& np,
                 const FeatureSet& f, int k, int L, long long cap = -1);

// Empty iff agree_up_to holds; otherwise a formula of degree <= L whose
// value differs at the two seeds (re-checked through the evaluator).
// Sentences are preferred over open formulas; among sentences, lowest
// stratum first, then smallest.  Falls back to a characteristic formula of
// the left seed when the capped enumeration surfaces no separator.
std::optional<HybridFormula> separating_formula(const PointedModel& mp,
                                                const PointedModel& np,
                                                const FeatureSet& f, int k,
                                                int L, long long cap = -1);

// A single formula satisfied by every member of ks (at its own point, slots
// seeded with the point) such that any pointed model satisfying it agrees
// with some member on all degree-<=L formulas of the gated language.  The
// slot pool is L when a binder feature is on, else 0.  Empty ks yields
// "false".  Built as a disjunction of characteristic formulas, one per
// member; cap bounds the output size in AST nodes.
HybridFormula axiomatise(const std::vector<PointedModel>& ks,
                         const FeatureSet& f, int L, long long cap = -1);

}  // namespace hybis
