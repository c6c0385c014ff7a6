#pragma once

// Graded and width-indexed bisimulations between two Kripke models.
//
// A pair here is always ((m̄, m), (n̄, n)): a length-k tuple of remembered
// worlds plus a current world on each side.  Two families are handled:
//
//  * Level-graded families Z[k][i] for 0 ≤ k ≤ K, 0 ≤ i ≤ L.  Level i
//    means "i steps already used out of L"; i = 0 is the seed level with
//    the full budget.  Local conditions (prop, wvar, and nom when gated)
//    hold at every level.  Stepping conditions (forth, back, bind, ex) send
//    a premise at level i to a witness at level i+1 for i < L; the
//    @-conditions (atv, atn) stay within a level; successive levels are
//    chained by inclusion.  Widths are deliberately independent: Z[k] is
//    the greatest fixpoint for the k-variable language on its own, which is
//    exactly what ties constant-tuple membership at level 0 to agreement on
//    all degree-bounded formulas over x1..xk (the toolkit's master
//    invariant, cross-checked against the enumeration oracle).  A
//    width-coupling deletion rule would force the appended-variable
//    conditions onto feature sets without binders and provably breaks that
//    agreement, so tuple extension is not part of this family shape.
//
//  * Width-indexed families B_k without levels (the ω-shape), where all
//    conditions live inside one B_k except extension (ext), which steps
//    from B_k into B_{k+1} and is checked for k below the family's width
//    bound.
//
// The feature set F controls which non-base conditions apply, via the
// cond(F) mapping: nominal features gate (nom), the binder gates (bind),
// @ gates (atv) and — together with nominals — (atn), and ∃ gates the two
// (ex) conditions plus (bind), since the binder is definable from ∃.

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hybis/model.hpp"
#include "hybis/syntax.hpp"

namespace hybis {

enum class Cond {
  Prop,
  WVar,
  Forth,
  Back,
  Nom,
  Bind,
  AtV,
  AtN,
  ExF,
  ExB,
  Ext,
  Chain,
  Seed,
};

std::string to_string(Cond c);

// The cond(F) mapping: which of {nom, bind, atv, atn, ex_f, ex_b} apply.
// Base conditions (prop, wvar, forth, back) always apply and are not part
// of the result.
std::set<Cond> gated_conds(const FeatureSet& f);

// Z[k][i] family; levels[k][i] holds the width-k relation at level i.
struct KlFamily {
  int K = 0;
  int L = 0;
  std::vector<std::vector<PairRelation>> levels;

  static KlFamily empty(int K, int L);
  const PairRelation& at(int k, int i) const;
  PairRelation& at(int k, int i);
};

// Width-indexed family: index k holds the width-k relation.
using OmegaFamily = std::vector<PairRelation>;

struct Violation {
  Cond cond;
  int k = 0;
  int level = -1;  // -1 when the family has no levels
  NamedPair pair;  // offending pair; empty tuples for family-wide findings
  std::string detail;
};

struct VerifyReport {
  bool ok = true;
  std::vector<Violation> violations;

  void add(Cond c, int k, int level, NamedPair pair, std::string detail);
};

// Cap for the total pair-space size of fixpoint computations, read from
// HYBIS_MAX_PAIRS when set (default 5,000,000).
long long default_pair_cap();

// Greatest family satisfying all level-graded conditions for F, computed
// per width by removal-only refinement from the locally-valid full
// relation.  Deterministic: pairs are ordered by declared world order.
// Throws ResourceError when (|M|·|N|)^(K+1)·(L+1) exceeds the cap
// (cap < 0 selects default_pair_cap()).
KlFamily max_kl_family(const KripkeModel& m, const KripkeModel& n,
                       const FeatureSet& f, int K, int L, long long cap = -1);

// Checks a stored family against the level-graded conditions for F:
// local conditions everywhere, chain inclusions, stepping and @-conditions,
// and — when a seed pair of world names is supplied — membership of the
// constant tuples over the seed in Z[k][0] for every k ≤ K.
// Throws DomainError/ModelError on malformed input (wrong tuple lengths,
// unknown worlds); condition failures go into the report.
VerifyReport verify_kl_family(
    const KripkeModel& m, const KripkeModel& n, const KlFamily& fam,
    const FeatureSet& f,
    const std::optional<std::pair<std::string, std::string>>& seed =
        std::nullopt);

// True iff the constant tuples over the two points lie in Z[k][0] of the
// maximal family for every k ≤ K, which coincides with agreement on all
// F-formulas of degree ≤ L with variables among x1..xK under the constant
// assignment.  K defaults to L when F contains a binder (down or exists)
// and to 0 otherwise: without a binder, sentences cannot use world
// variables, so width 0 already decides sentence agreement.
bool decide_equiv(const PointedModel& mp, const PointedModel& np,
                  const FeatureSet& f, int L,
                  std::optional<int> K = std::nullopt, long long cap = -1);

// Per-width union of the strongest (deepest, index-0) levels of the given
// families, which must share K.  On finite models the levels stabilize as L
// grows, and the union of stabilized relations drops the grading.
OmegaFamily union_family(const std::vector<KlFamily>& fams);

// Checks a width-indexed family against the ω-shape conditions for F
// (base + cond(F) inside each B_k, ext from B_k into B_{k+1} for
// k < size-1) and nonemptiness.  When depth_below is given, only pairs
// all of whose worlds lie at BFS depth < depth_below from each model's
// first-declared world are checked as premises (witnesses may be any
// stored pair); this makes the frontier of depth-truncated models exempt
// from stepping requirements they cannot meet.
VerifyReport verify_omega_family(
    const KripkeModel& m, const KripkeModel& n, const OmegaFamily& b,
    const FeatureSet& f, std::optional<int> depth_below = std::nullopt);

// Plain state bisimulation (width 0): prop, forth, back, plus nom when
// with_nom is set.
VerifyReport verify_plain_bisim(const KripkeModel& m, const KripkeModel& n,
                                const PairRelation& b, bool with_nom);

// True iff b is a plain bisimulation and quasi-injective: whenever one
// state has two distinct partners, the partners cannot reach each other.
bool is_quasi_injective(const KripkeModel& m, const KripkeModel& n,
                        const PairRelation& b);

// Lifts a quasi-injective bisimulation to the width-indexed family
// B_k = { ((m̄,m),(n̄,n)) : (m,n) ∈ B, every (m̄(j), n̄(j)) ∈ B,
//         m ∈ R*(m̄(j)) and n ∈ R*(n̄(j)) for all j }   for k = 0..K.
// Throws DomainError when b is not quasi-injective.
OmegaFamily qinj_to_family(const KripkeModel& m, const KripkeModel& n,
                           const PairRelation& b, int K);

// The branch-merge structure of depth D, its chain companion, and the
// width-indexed family built from the allowed-pair recursion
//   allowed(0,0)   = {(m0,n0)}
//   allowed(i,i)   = {(m0,n0)} ∪ {(mj,nj)     : 1 ≤ j ≤ i}
//   allowed(i+1,i) = {(m0,n0)} ∪ {(mj+1,nj)   : 1 ≤ j ≤ i}
// with B_k = all pairs whose current worlds form an allowed index pattern
// and whose tuple slots all lie in the pattern's allowed set.  The family
// meets every width-indexed condition for binder features but fails the
// @-shift condition (atv) at width ≥ 2.
struct Example46 {
  KripkeModel m;
  KripkeModel n;
  OmegaFamily family;
};
Example46 example46_family(int depth, int kbound);

// JSON: a level family is {"K": int, "L": int, "levels": {"k,i": relation}}
// and a width family is {"K": int, "levels": {"k": relation}}, where
// relation is the PairRelation schema of hybis/model.hpp.
std::string save_kl_family(const KlFamily& fam);
KlFamily load_kl_family(const std::string& text);
std::string save_omega_family(const OmegaFamily& fam);
OmegaFamily load_omega_family(const std::string& text);

}  // namespace hybis
