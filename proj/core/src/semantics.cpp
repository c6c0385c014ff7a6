#include "hybis/semantics.hpp"

namespace hybis {

namespace {

int lookup_wvar(const WvarAssignment& env, const std::string& name) {
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->first == name) return it->second;
  throw EvalError("unbound world variable: " + name);
}

bool sat_h(const KripkeModel& m, WvarAssignment& env, int point,
           const HybridFormula& f) {
  switch (f.kind()) {
    case HKind::Bot:
      return false;
    case HKind::Top:
      return true;
    case HKind::Prop: {
      int p = m.prop_index(f.name());
      if (p < 0) throw EvalError("proposition not in model signature: " + f.name());
      return m.prop_holds(p, point);
    }
    case HKind::Nom: {
      int n = m.nom_index(f.name());
      if (n < 0) throw EvalError("nominal not in model signature: " + f.name());
      return m.nom_target(n) == point;
    }
    case HKind::WVar:
      return lookup_wvar(env, f.name()) == point;
    case HKind::Not:
      return !sat_h(m, env, point, f.child());
    case HKind::Or:
      return sat_h(m, env, point, f.left()) || sat_h(m, env, point, f.right());
    case HKind::And:
      return sat_h(m, env, point, f.left()) && sat_h(m, env, point, f.right());
    case HKind::Implies:
      return !sat_h(m, env, point, f.left()) || sat_h(m, env, point, f.right());
    case HKind::Dia: {
      for (int w : m.successors(point))
        if (sat_h(m, env, w, f.child())) return true;
      return false;
    }
    case HKind::Box: {
      for (int w : m.successors(point))
        if (!sat_h(m, env, w, f.child())) return false;
      return true;
    }
    case HKind::Down: {
      env.emplace_back(f.name(), point);
      bool r = sat_h(m, env, point, f.child());
      env.pop_back();
      return r;
    }
    case HKind::Exists: {
      env.emplace_back(f.name(), -1);
      bool r = false;
      for (int w = 0; w < m.num_worlds() && !r; ++w) {
        env.back().second = w;
        r = sat_h(m, env, point, f.child());
      }
      env.pop_back();
      return r;
    }
    case HKind::At: {
      int target;
      if (f.at_place_is_nom()) {
        int n = m.nom_index(f.name());
        if (n < 0) throw EvalError("nominal not in model signature: " + f.name());
        target = m.nom_target(n);
      } else {
        target = lookup_wvar(env, f.name());
      }
      return sat_h(m, env, target, f.child());
    }
  }
  throw EvalError("unreachable formula kind");
}

int resolve_term(const KripkeModel& m, const FolExpansion& exp,
                 const FolValuation& val, const FolTerm& t) {
  if (t.kind == TermKind::Var) {
    for (auto it = val.rbegin(); it != val.rend(); ++it)
      if (it->first == t.name) return it->second;
    throw EvalError("unbound first-order variable: " + t.name);
  }
  int n = m.nom_index(t.name);
  const int* c = exp.find_const(t.name);
  if (n >= 0 && c) throw EvalError("constant interpreted twice: " + t.name);
  if (n >= 0) return m.nom_target(n);
  if (c) return *c;
  throw EvalError("uninterpreted constant: " + t.name);
}

bool sat_f(const KripkeModel& m, const FolExpansion& exp, FolValuation& val,
           const FolFormula& f) {
  switch (f.kind()) {
    case FKind::Bot:
      return false;
    case FKind::Top:
      return true;
    case FKind::Pred: {
      int w = resolve_term(m, exp, val, f.term1());
      std::string prop = predicate_prop(f.name());
      int p = prop.empty() ? -1 : m.prop_index(prop);
      const std::vector<bool>* e = exp.find_pred(f.name());
      if (p >= 0 && e) throw EvalError("predicate interpreted twice: " + f.name());
      if (p >= 0) return m.prop_holds(p, w);
      if (e) return (*e)[static_cast<size_t>(w)];
      throw EvalError("uninterpreted predicate: " + f.name());
    }
    case FKind::Rel:
      return m.has_edge(resolve_term(m, exp, val, f.term1()),
                        resolve_term(m, exp, val, f.term2()));
    case FKind::Eq:
      return resolve_term(m, exp, val, f.term1()) ==
             resolve_term(m, exp, val, f.term2());
    case FKind::Not:
      return !sat_f(m, exp, val, f.child());
    case FKind::Or:
      return sat_f(m, exp, val, f.left()) || sat_f(m, exp, val, f.right());
    case FKind::And:
      return sat_f(m, exp, val, f.left()) && sat_f(m, exp, val, f.right());
    case FKind::Implies:
      return !sat_f(m, exp, val, f.left()) || sat_f(m, exp, val, f.right());
    case FKind::Exists: {
      val.emplace_back(f.name(), -1);
      bool r = false;
      for (int w = 0; w < m.num_worlds() && !r; ++w) {
        val.back().second = w;
        r = sat_f(m, exp, val, f.child());
      }
      val.pop_back();
      return r;
    }
    case FKind::Forall: {
      val.emplace_back(f.name(), -1);
      bool r = true;
      for (int w = 0; w < m.num_worlds() && r; ++w) {
        val.back().second = w;
        r = sat_f(m, exp, val, f.child());
      }
      val.pop_back();
      return r;
    }
  }
  throw EvalError("unreachable formula kind");
}

}  // namespace

std::string slot_name(int j) { return "x" + std::to_string(j); }

WvarAssignment slot_assignment(const std::vector<int>& tuple) {
  WvarAssignment env;
  env.reserve(tuple.size());
  for (size_t j = 0; j < tuple.size(); ++j)
    env.emplace_back(slot_name(static_cast<int>(j) + 1), tuple[j]);
  return env;
}

bool sat_hybrid(const KripkeModel& m, const WvarAssignment& env, int point,
                const HybridFormula& f) {
  if (point < 0 || point >= m.num_worlds())
    throw EvalError("evaluation point out of range");
  for (const auto& [name, w] : env)
    if (w < 0 || w >= m.num_worlds())
      throw EvalError("assignment sends " + name + " out of range");
  WvarAssignment scratch = env;
  return sat_h(m, scratch, point, f);
}

const std::vector<bool>* FolExpansion::find_pred(const std::string& name) const {
  for (const auto& [n, v] : preds)
    if (n == name) return &v;
  return nullptr;
}

const int* FolExpansion::find_const(const std::string& name) const {
  for (const auto& [n, v] : consts)
    if (n == name) return &v;
  return nullptr;
}

bool sat_fol(const KripkeModel& m, const FolExpansion& expansion,
             const FolValuation& valuation, const FolFormula& f) {
  for (const auto& [name, w] : valuation)
    if (w < 0 || w >= m.num_worlds())
      throw EvalError("valuation sends " + name + " out of range");
  for (const auto& [name, v] : expansion.preds)
    if (v.size() != static_cast<size_t>(m.num_worlds()))
      throw EvalError("expansion predicate " + name + " has wrong extent size");
  for (const auto& [name, w] : expansion.consts)
    if (w < 0 || w >= m.num_worlds())
      throw EvalError("expansion constant " + name + " out of range");
  FolValuation scratch = valuation;
  return sat_f(m, expansion, scratch, f);
}

}  // namespace hybis
