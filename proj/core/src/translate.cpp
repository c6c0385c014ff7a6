#include "hybis/translate.hpp"

#include <map>
#include <set>
#include <utility>
#include <vector>

namespace hybis {

namespace {

bool is_designated(const std::string& name) {
  return name == kDesignatedX || name == kDesignatedY;
}

std::string target_var(StTarget t) {
  return t == StTarget::X ? kDesignatedX : kDesignatedY;
}

StTarget flipped(StTarget t) {
  return t == StTarget::X ? StTarget::Y : StTarget::X;
}

void check_st_input(const HybridFormula& f) {
  switch (f.kind()) {
    case HKind::Bot:
    case HKind::Top:
    case HKind::Nom:
      return;
    case HKind::Prop:
      if (f.name() == "r")
        throw DomainError(
            "proposition r would collide with the accessibility predicate R");
      return;
    case HKind::WVar:
      if (is_designated(f.name()))
        throw DomainError("designated variable used in formula: " + f.name());
      return;
    case HKind::Not:
    case HKind::Dia:
    case HKind::Box:
      check_st_input(f.child());
      return;
    case HKind::Down:
    case HKind::Exists:
      if (is_designated(f.name()))
        throw DomainError("designated variable bound in formula: " + f.name());
      check_st_input(f.child());
      return;
    case HKind::At:
      if (!f.at_place_is_nom() && is_designated(f.name()))
        throw DomainError("designated variable used in formula: " + f.name());
      check_st_input(f.child());
      return;
    case HKind::Or:
    case HKind::And:
    case HKind::Implies:
      check_st_input(f.left());
      check_st_input(f.right());
      return;
  }
}

FolTerm place_term(const HybridFormula& at_formula) {
  return at_formula.at_place_is_nom() ? FolTerm::constant(at_formula.name())
                                      : FolTerm::var(at_formula.name());
}

FolFormula st_rec(const HybridFormula& f, StTarget t) {
  const FolTerm here = FolTerm::var(target_var(t));
  const std::string other = target_var(flipped(t));
  switch (f.kind()) {
    case HKind::Bot:
      return FolFormula::bot();
    case HKind::Top:
      return FolFormula::top();
    case HKind::Prop:
      return FolFormula::pred(prop_predicate(f.name()), here);
    case HKind::Nom:
      return FolFormula::eq(FolTerm::constant(f.name()), here);
    case HKind::WVar:
      return FolFormula::eq(FolTerm::var(f.name()), here);
    case HKind::Not:
      return FolFormula::neg(st_rec(f.child(), t));
    case HKind::Or:
      return FolFormula::disj(st_rec(f.left(), t), st_rec(f.right(), t));
    case HKind::And:
      return FolFormula::conj(st_rec(f.left(), t), st_rec(f.right(), t));
    case HKind::Implies:
      return FolFormula::implies(st_rec(f.left(), t), st_rec(f.right(), t));
    case HKind::Dia:
      return FolFormula::exists(
          other, FolFormula::conj(FolFormula::rel(here, FolTerm::var(other)),
                                  st_rec(f.child(), flipped(t))));
    case HKind::Box:
      return FolFormula::forall(
          other, FolFormula::implies(FolFormula::rel(here, FolTerm::var(other)),
                                     st_rec(f.child(), flipped(t))));
    case HKind::Down:
      return FolFormula::exists(
          f.name(), FolFormula::conj(FolFormula::eq(FolTerm::var(f.name()), here),
                                     st_rec(f.child(), t)));
    case HKind::Exists:
      return FolFormula::exists(f.name(), st_rec(f.child(), t));
    case HKind::At:
      // Jump clause: re-quantify the opposite designated variable onto the
      // named world.  This keeps the translation of @-formulas independent
      // of the current target, matching the jump semantics of @ exactly.
      return FolFormula::exists(
          other, FolFormula::conj(FolFormula::eq(FolTerm::var(other), place_term(f)),
                                  st_rec(f.child(), flipped(t))));
  }
  throw DomainError("unreachable formula kind");
}

HybridFormula term_atom(const FolTerm& t) {
  return t.kind == TermKind::Var ? HybridFormula::wvar(t.name)
                                 : HybridFormula::nom(t.name);
}

HybridFormula at_wrap(const FolTerm& t, const HybridFormula& body) {
  return t.kind == TermKind::Var ? HybridFormula::at_wvar(t.name, body)
                                 : HybridFormula::at_nom(t.name, body);
}

// Renames every variable whose name is reserved in the hybrid language to a
// fresh one, so the back translation of machine-produced formulas (which
// use the designated names stx/sty) prints as valid hybrid syntax.
class HybridSafeRenamer {
 public:
  explicit HybridSafeRenamer(const FolFormula& f) { collect(f); }

  FolFormula run(const FolFormula& f) { return rec(f); }

 private:
  void collect(const FolFormula& f) {
    switch (f.kind()) {
      case FKind::Pred:
        note(f.term1());
        return;
      case FKind::Rel:
      case FKind::Eq:
        note(f.term1());
        note(f.term2());
        return;
      case FKind::Exists:
      case FKind::Forall:
        used_.insert(f.name());
        collect(f.child());
        return;
      case FKind::Not:
        collect(f.child());
        return;
      case FKind::Or:
      case FKind::And:
      case FKind::Implies:
        collect(f.left());
        collect(f.right());
        return;
      default:
        return;
    }
  }

  void note(const FolTerm& t) {
    if (t.kind == TermKind::Var) used_.insert(t.name);
  }

  std::string fresh() {
    for (int i = 1;; ++i) {
      std::string c = "v" + std::to_string(i);
      if (!used_.count(c)) {
        used_.insert(c);
        return c;
      }
    }
  }

  FolTerm map_term(const FolTerm& t) {
    if (t.kind != TermKind::Var) return t;
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
      if (it->first == t.name) return FolTerm::var(it->second);
    if (!is_reserved_name(t.name)) return t;
    auto [it, inserted] = free_.try_emplace(t.name);
    if (inserted) it->second = fresh();
    return FolTerm::var(it->second);
  }

  FolFormula rec(const FolFormula& f) {
    switch (f.kind()) {
      case FKind::Bot:
        return FolFormula::bot();
      case FKind::Top:
        return FolFormula::top();
      case FKind::Pred:
        return FolFormula::pred(f.name(), map_term(f.term1()));
      case FKind::Rel:
        return FolFormula::rel(map_term(f.term1()), map_term(f.term2()));
      case FKind::Eq:
        return FolFormula::eq(map_term(f.term1()), map_term(f.term2()));
      case FKind::Not:
        return FolFormula::neg(rec(f.child()));
      case FKind::Or:
        return FolFormula::disj(rec(f.left()), rec(f.right()));
      case FKind::And:
        return FolFormula::conj(rec(f.left()), rec(f.right()));
      case FKind::Implies:
        return FolFormula::implies(rec(f.left()), rec(f.right()));
      case FKind::Exists:
      case FKind::Forall: {
        std::string name = is_reserved_name(f.name()) ? fresh() : f.name();
        bound_.emplace_back(f.name(), name);
        FolFormula body = rec(f.child());
        bound_.pop_back();
        return f.kind() == FKind::Exists ? FolFormula::exists(name, body)
                                         : FolFormula::forall(name, body);
      }
    }
    throw DomainError("unreachable formula kind");
  }

  std::set<std::string> used_;
  std::map<std::string, std::string> free_;
  std::vector<std::pair<std::string, std::string>> bound_;
};

}  // namespace

FolFormula st(const HybridFormula& f, StTarget target) {
  check_st_input(f);
  return st_rec(f, target);
}

HybridFormula back_translate(const FolFormula& f) {
  switch (f.kind()) {
    case FKind::Bot:
      return HybridFormula::bot();
    case FKind::Top:
      return HybridFormula::top();
    case FKind::Pred: {
      std::string prop = predicate_prop(f.name());
      if (prop.empty() || f.name() == "R")
        throw DomainError("predicate outside the correspondence signature: " +
                          f.name());
      return at_wrap(f.term1(), HybridFormula::prop(prop));
    }
    case FKind::Rel:
      return at_wrap(f.term1(), HybridFormula::dia(term_atom(f.term2())));
    case FKind::Eq:
      return at_wrap(f.term1(), term_atom(f.term2()));
    case FKind::Not:
      return HybridFormula::neg(back_translate(f.child()));
    case FKind::Or:
      return HybridFormula::disj(back_translate(f.left()),
                                 back_translate(f.right()));
    case FKind::And:
      return HybridFormula::conj(back_translate(f.left()),
                                 back_translate(f.right()));
    case FKind::Implies:
      return HybridFormula::implies(back_translate(f.left()),
                                    back_translate(f.right()));
    case FKind::Exists:
      return HybridFormula::exists(f.name(), back_translate(f.child()));
    case FKind::Forall:
      return HybridFormula::neg(HybridFormula::exists(
          f.name(), HybridFormula::neg(back_translate(f.child()))));
  }
  throw DomainError("unreachable formula kind");
}

HybridFormula sbt(const FolFormula& f) {
  FolFormula clean = HybridSafeRenamer(f).run(f);
  std::set<std::string> fv = free_vars(clean);
  if (fv.size() > 1) {
    std::string names;
    for (const auto& v : fv) names += (names.empty() ? "" : ", ") + v;
    throw DomainError("back translation needs at most one free variable, got " +
                      names);
  }
  HybridFormula body = back_translate(clean);
  if (fv.empty()) return body;
  const std::string& v = *fv.begin();
  return HybridFormula::exists(
      v, HybridFormula::conj(HybridFormula::wvar(v), body));
}

FolFormula relativise(const FolFormula& f, const std::string& pred) {
  if (pred.empty() || pred[0] < 'A' || pred[0] > 'Z' || pred == "R")
    throw DomainError("relativisation needs a fresh unary predicate name");
  if (predicates(f).count(pred))
    throw DomainError("predicate " + pred + " already occurs in the formula");
  struct Rec {
    const std::string& p;
    FolFormula run(const FolFormula& g) {
      switch (g.kind()) {
        case FKind::Bot:
        case FKind::Top:
        case FKind::Pred:
        case FKind::Rel:
        case FKind::Eq:
          return g;
        case FKind::Not:
          return FolFormula::neg(run(g.child()));
        case FKind::Or:
          return FolFormula::disj(run(g.left()), run(g.right()));
        case FKind::And:
          return FolFormula::conj(run(g.left()), run(g.right()));
        case FKind::Implies:
          return FolFormula::implies(run(g.left()), run(g.right()));
        case FKind::Exists:
          return FolFormula::exists(
              g.name(),
              FolFormula::conj(FolFormula::pred(p, FolTerm::var(g.name())),
                               run(g.child())));
        case FKind::Forall:
          return FolFormula::forall(
              g.name(),
              FolFormula::implies(FolFormula::pred(p, FolTerm::var(g.name())),
                                  run(g.child())));
      }
      throw DomainError("unreachable formula kind");
    }
  };
  return Rec{pred}.run(f);
}

FolFormula psi_sigma(const FolFormula& sigma, const FolFormula& phi_s,
                     const std::string& pred) {
  if (!free_vars(sigma).empty())
    throw DomainError("the reduced formula must be closed");
  std::set<std::string> fv = free_vars(phi_s);
  if (fv.size() != 1)
    throw DomainError("the frame formula must have exactly one free variable");
  if (predicates(phi_s).count(pred))
    throw DomainError("predicate " + pred + " already occurs in the frame formula");
  const std::string& x = *fv.begin();
  return FolFormula::disj(
      phi_s,
      FolFormula::implies(
          FolFormula::exists(x, FolFormula::pred(pred, FolTerm::var(x))),
          relativise(sigma, pred)));
}

}  // namespace hybis
