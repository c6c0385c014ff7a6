#pragma once

// Satisfaction for both languages over the same Kripke models.
//
// Hybrid formulas are evaluated at a point under an assignment of world
// variables.  The assignment is an ordered list; later entries shadow
// earlier ones, which is exactly how the binders push bindings.  `down x`
// binds x to the current point and stays there; `exists x` rebinds x to
// some world while the evaluation point stays put; `@place` jumps to the
// denotation of the place (nominal interpretation or current binding) and
// binds nothing.
//
// First-order formulas are evaluated over the model seen as a relational
// structure: one unary predicate per proposition (capitalised name), the
// binary predicate R for the accessibility relation, one constant per
// nominal.  An optional expansion supplies extra unary predicates and
// constants (used by relativisation); a symbol defined by both the
// signature and the expansion is an error rather than a silent shadow.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hybis/model.hpp"
#include "hybis/syntax.hpp"

namespace hybis {

// Raised when evaluation meets a symbol the model cannot interpret
// (unbound variable, undeclared proposition, uninterpreted predicate, ...).
class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

// Ordered world-variable assignment; lookup scans from the back so the
// innermost binding wins.
using WvarAssignment = std::vector<std::pair<std::string, int>>;

// Canonical name of tuple slot j (1-based): "x1", "x2", ...
std::string slot_name(int j);

// Assignment mapping x1..xk to the given worlds.
WvarAssignment slot_assignment(const std::vector<int>& tuple);

bool sat_hybrid(const KripkeModel& m, const WvarAssignment& env, int point,
                const HybridFormula& f);

// Extra interpretation material beyond the model's own signature.
struct FolExpansion {
  std::vector<std::pair<std::string, std::vector<bool>>> preds;  // unary
  std::vector<std::pair<std::string, int>> consts;

  const std::vector<bool>* find_pred(const std::string& name) const;
  const int* find_const(const std::string& name) const;
};

// Ordered first-order variable assignment, same shadowing rule as above.
using FolValuation = std::vector<std::pair<std::string, int>>;

bool sat_fol(const KripkeModel& m, const FolExpansion& expansion,
             const FolValuation& valuation, const FolFormula& f);

inline bool sat_fol(const KripkeModel& m, const FolValuation& valuation,
                    const FolFormula& f) {
  return sat_fol(m, FolExpansion{}, valuation, f);
}

}  // namespace hybis
