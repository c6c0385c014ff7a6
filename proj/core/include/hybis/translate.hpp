#pragma once

// Translations between the hybrid language and first-order logic over the
// correspondence signature, plus the relativisation machinery used by the
// satisfiability reduction.
//
// The standard translation `st` renders a hybrid formula as a first-order
// formula with (at most) one free designated variable — "stx" when the
// target is X, "sty" when it is Y — swapping targets under modal and @
// steps.  Propositions become capitalised unary predicates, the
// accessibility relation becomes R, nominals become constants.  The @ and
// exists clauses are the satisfaction-preserving forms: @ re-quantifies the
// opposite designated variable onto the named world, and exists quantifies
// the bound slot without moving the target.  Correctness is the evaluation
// equivalence checked exhaustively by the test suite, not a syntactic echo
// of any particular table.
//
// `back_translate` is the inverse mapping F on Σ°-formulas (predicates of
// proposition shape, R, equality, constants-as-nominals); `sbt` wraps it
// for formulas with at most one free variable: SBT(φ(v)) = ∃v (v ∧ F(φ)),
// and SBT(ψ) = F(ψ) when ψ is closed (closed inputs arise from translating
// @-rooted sentences, whose standard translations do not mention the
// target).  Variables whose names are reserved in the hybrid language are
// renamed first so the output is always printable and re-parseable.

#include <string>

#include "hybis/syntax.hpp"

namespace hybis {

inline constexpr const char* kDesignatedX = "stx";
inline constexpr const char* kDesignatedY = "sty";

enum class StTarget { X, Y };

// Standard translation.  Throws DomainError if the formula itself uses a
// designated variable name, or contains the proposition "r" (whose
// predicate form would collide with the accessibility predicate R).
FolFormula st(const HybridFormula& f, StTarget target = StTarget::X);

// The clause-wise back translation F.  Requires Σ° input: every predicate
// other than R must be the capitalised form of a proposition.
HybridFormula back_translate(const FolFormula& f);

// ∃v (v ∧ F(φ)) for one free variable v, F(φ) for closed φ; two or more
// free variables are rejected.
HybridFormula sbt(const FolFormula& f);

// Bound every quantifier by the unary predicate `pred` (∃v ψ becomes
// ∃v (P(v) ∧ ψ), ∀v ψ becomes ∀v (P(v) → ψ)); atoms are untouched.
// `pred` must be a fresh unary predicate name not occurring in f.
FolFormula relativise(const FolFormula& f, const std::string& pred);

// The reduction formula  φ_S(x) ∨ (∃x P(x) → relativise(σ, P))  for a
// closed σ and a φ_S with exactly one free variable.
FolFormula psi_sigma(const FolFormula& sigma, const FolFormula& phi_s,
                     const std::string& pred = "P");

}  // namespace hybis
