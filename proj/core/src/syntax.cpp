#include "hybis/syntax.hpp"

#include <algorithm>
#include <cctype>

namespace hybis {

namespace {

bool is_ident(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::islower(c) || std::isdigit(c) || c == '_';
  });
}

}  // namespace

bool is_reserved_name(const std::string& name) {
  return name == "false" || name == "true" || name == "down" ||
         name == "exists" || name == "forall" || name == "stx" ||
         name == "sty";
}

// ---------------------------------------------------------------------------
// Signature

bool Signature::has_prop(const std::string& name) const {
  return std::find(props.begin(), props.end(), name) != props.end();
}

bool Signature::has_nom(const std::string& name) const {
  return std::find(noms.begin(), noms.end(), name) != noms.end();
}

void Signature::validate() const {
  auto check_list = [](const std::vector<std::string>& names, const char* what) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (!is_ident(names[i]))
        throw DomainError(std::string("malformed ") + what + " name: '" +
                          names[i] + "'");
      if (is_reserved_name(names[i]))
        throw DomainError(std::string("reserved word used as ") + what +
                          " name: '" + names[i] + "'");
      for (std::size_t j = i + 1; j < names.size(); ++j)
        if (names[i] == names[j])
          throw DomainError(std::string("duplicate ") + what + " name: '" +
                            names[i] + "'");
    }
  };
  check_list(props, "proposition");
  check_list(noms, "nominal");
  for (const auto& p : props) {
    if (p == "r")
      throw DomainError(
          "proposition name 'r' is not allowed: its first-order predicate "
          "would collide with the accessibility relation R");
    if (has_nom(p))
      throw DomainError("name '" + p + "' is both a proposition and a nominal");
  }
}

// ---------------------------------------------------------------------------
// FeatureSet

FeatureSet FeatureSet::parse(const std::string& text) {
  FeatureSet f;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    // trim
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front())))
      item.erase(item.begin());
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back())))
      item.pop_back();
    if (item == "nom") f.nom = true;
    else if (item == "down") f.down = true;
    else if (item == "at") f.at = true;
    else if (item == "exists") f.exists = true;
    else if (!item.empty())
      throw DomainError("unknown feature '" + item +
                        "' (expected nom, down, at, exists)");
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return f;
}

bool FeatureSet::subset_of(const FeatureSet& other) const {
  return (!nom || other.nom) && (!down || other.down) && (!at || other.at) &&
         (!exists || other.exists);
}

std::string FeatureSet::to_string() const {
  std::string out;
  auto add = [&out](const char* name) {
    if (!out.empty()) out += ',';
    out += name;
  };
  if (at) add("at");
  if (down) add("down");
  if (exists) add("exists");
  if (nom) add("nom");
  return out;
}

// ---------------------------------------------------------------------------
// HybridFormula

bool is_sugar(HKind k) {
  return k == HKind::Top || k == HKind::And || k == HKind::Implies ||
         k == HKind::Box;
}

HybridFormula HybridFormula::make(Node n) {
  n.size = 1 + (n.a ? n.a->size : 0) + (n.b ? n.b->size : 0);
  switch (n.kind) {
    case HKind::Bot:
    case HKind::Top:
    case HKind::Prop:
    case HKind::Nom:
    case HKind::WVar:
      n.degree = 0;
      break;
    case HKind::Not:
    case HKind::At:
      n.degree = n.a->degree;
      break;
    case HKind::Or:
    case HKind::And:
    case HKind::Implies:
      n.degree = std::max(n.a->degree, n.b->degree);
      break;
    case HKind::Dia:
    case HKind::Box:
    case HKind::Down:
    case HKind::Exists:
      n.degree = n.a->degree + 1;
      break;
  }
  return HybridFormula(std::make_shared<const Node>(std::move(n)));
}

HybridFormula HybridFormula::bot() { return make({HKind::Bot}); }
HybridFormula HybridFormula::top() { return make({HKind::Top}); }
HybridFormula HybridFormula::prop(std::string name) {
  return make({HKind::Prop, std::move(name)});
}
HybridFormula HybridFormula::nom(std::string name) {
  return make({HKind::Nom, std::move(name)});
}
HybridFormula HybridFormula::wvar(std::string name) {
  return make({HKind::WVar, std::move(name)});
}
HybridFormula HybridFormula::neg(HybridFormula f) {
  return make({HKind::Not, "", false, std::move(f.node_)});
}
HybridFormula HybridFormula::disj(HybridFormula l, HybridFormula r) {
  return make({HKind::Or, "", false, std::move(l.node_), std::move(r.node_)});
}
HybridFormula HybridFormula::conj(HybridFormula l, HybridFormula r) {
  return make({HKind::And, "", false, std::move(l.node_), std::move(r.node_)});
}
HybridFormula HybridFormula::implies(HybridFormula l, HybridFormula r) {
  return make(
      {HKind::Implies, "", false, std::move(l.node_), std::move(r.node_)});
}
HybridFormula HybridFormula::dia(HybridFormula f) {
  return make({HKind::Dia, "", false, std::move(f.node_)});
}
HybridFormula HybridFormula::box(HybridFormula f) {
  return make({HKind::Box, "", false, std::move(f.node_)});
}
HybridFormula HybridFormula::down(std::string var, HybridFormula f) {
  return make({HKind::Down, std::move(var), false, std::move(f.node_)});
}
HybridFormula HybridFormula::at_nom(std::string name, HybridFormula f) {
  return make({HKind::At, std::move(name), true, std::move(f.node_)});
}
HybridFormula HybridFormula::at_wvar(std::string name, HybridFormula f) {
  return make({HKind::At, std::move(name), false, std::move(f.node_)});
}
HybridFormula HybridFormula::exists(std::string var, HybridFormula f) {
  return make({HKind::Exists, std::move(var), false, std::move(f.node_)});
}

bool HybridFormula::is_atom() const {
  switch (kind()) {
    case HKind::Bot:
    case HKind::Top:
    case HKind::Prop:
    case HKind::Nom:
    case HKind::WVar:
      return true;
    default:
      return false;
  }
}

bool HybridFormula::is_unary() const {
  switch (kind()) {
    case HKind::Not:
    case HKind::Dia:
    case HKind::Box:
    case HKind::At:
      return true;
    default:
      return false;
  }
}

bool HybridFormula::is_binary() const {
  switch (kind()) {
    case HKind::Or:
    case HKind::And:
    case HKind::Implies:
      return true;
    default:
      return false;
  }
}

bool HybridFormula::is_binder() const {
  return kind() == HKind::Down || kind() == HKind::Exists;
}

HybridFormula HybridFormula::child() const { return wrap(node_->a); }
HybridFormula HybridFormula::left() const { return wrap(node_->a); }
HybridFormula HybridFormula::right() const { return wrap(node_->b); }

namespace {

bool h_equal(const HybridFormula& x, const HybridFormula& y) {
  if (x.kind() != y.kind() || x.size() != y.size()) return false;
  switch (x.kind()) {
    case HKind::Bot:
    case HKind::Top:
      return true;
    case HKind::Prop:
    case HKind::Nom:
    case HKind::WVar:
      return x.name() == y.name();
    case HKind::Not:
    case HKind::Dia:
    case HKind::Box:
      return h_equal(x.child(), y.child());
    case HKind::At:
      return x.at_place_is_nom() == y.at_place_is_nom() &&
             x.name() == y.name() && h_equal(x.child(), y.child());
    case HKind::Down:
    case HKind::Exists:
      return x.name() == y.name() && h_equal(x.child(), y.child());
    case HKind::Or:
    case HKind::And:
    case HKind::Implies:
      return h_equal(x.left(), y.left()) && h_equal(x.right(), y.right());
  }
  return false;
}

}  // namespace

bool HybridFormula::operator==(const HybridFormula& other) const {
  if (node_ == other.node_) return true;
  return h_equal(*this, other);
}

int degree(const HybridFormula& f) { return f.degree(); }

namespace {

void collect_free_wvars(const HybridFormula& f, std::vector<std::string>& bound,
                        std::set<std::string>& out) {
  switch (f.kind()) {
    case HKind::WVar:
      if (std::find(bound.begin(), bound.end(), f.name()) == bound.end())
        out.insert(f.name());
      return;
    case HKind::At:
      if (!f.at_place_is_nom() &&
          std::find(bound.begin(), bound.end(), f.name()) == bound.end())
        out.insert(f.name());
      collect_free_wvars(f.child(), bound, out);
      return;
    case HKind::Down:
    case HKind::Exists:
      bound.push_back(f.name());
      collect_free_wvars(f.child(), bound, out);
      bound.pop_back();
      return;
    case HKind::Not:
    case HKind::Dia:
    case HKind::Box:
      collect_free_wvars(f.child(), bound, out);
      return;
    case HKind::Or:
    case HKind::And:
    case HKind::Implies:
      collect_free_wvars(f.left(), bound, out);
      collect_free_wvars(f.right(), bound, out);
      return;
    default:
      return;
  }
}

}  // namespace

std::set<std::string> free_wvars(const HybridFormula& f) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free_wvars(f, bound, out);
  return out;
}

bool is_sentence(const HybridFormula& f) { return free_wvars(f).empty(); }

FeatureSet features(const HybridFormula& f) {
  FeatureSet out;
  switch (f.kind()) {
    case HKind::Nom:
      out.nom = true;
      return out;
    case HKind::At: {
      out = features(f.child());
      out.at = true;
      if (f.at_place_is_nom()) out.nom = true;
      return out;
    }
    case HKind::Down: {
      out = features(f.child());
      out.down = true;
      return out;
    }
    case HKind::Exists: {
      out = features(f.child());
      out.exists = true;
      return out;
    }
    case HKind::Not:
    case HKind::Dia:
    case HKind::Box:
      return features(f.child());
    case HKind::Or:
    case HKind::And:
    case HKind::Implies: {
      FeatureSet l = features(f.left()), r = features(f.right());
      return {l.nom || r.nom, l.down || r.down, l.at || r.at,
              l.exists || r.exists};
    }
    default:
      return out;
  }
}

HybridFormula desugar(const HybridFormula& f) {
  using H = HybridFormula;
  switch (f.kind()) {
    case HKind::Top:
      return H::neg(H::bot());
    case HKind::And:
      return H::neg(
          H::disj(H::neg(desugar(f.left())), H::neg(desugar(f.right()))));
    case HKind::Implies:
      return H::disj(H::neg(desugar(f.left())), desugar(f.right()));
    case HKind::Box:
      return H::neg(H::dia(H::neg(desugar(f.child()))));
    case HKind::Not:
      return H::neg(desugar(f.child()));
    case HKind::Dia:
      return H::dia(desugar(f.child()));
    case HKind::Or:
      return H::disj(desugar(f.left()), desugar(f.right()));
    case HKind::Down:
      return H::down(f.name(), desugar(f.child()));
    case HKind::Exists:
      return H::exists(f.name(), desugar(f.child()));
    case HKind::At:
      return f.at_place_is_nom() ? H::at_nom(f.name(), desugar(f.child()))
                                 : H::at_wvar(f.name(), desugar(f.child()));
    default:
      return f;
  }
}

void check_signature(const HybridFormula& f, const Signature& sig) {
  switch (f.kind()) {
    case HKind::Prop:
      if (!sig.has_prop(f.name()))
        throw DomainError("unknown proposition '" + f.name() + "'");
      return;
    case HKind::Nom:
      if (!sig.has_nom(f.name()))
        throw DomainError("unknown nominal '" + f.name() + "'");
      return;
    case HKind::At:
      if (f.at_place_is_nom() && !sig.has_nom(f.name()))
        throw DomainError("unknown nominal '" + f.name() + "'");
      check_signature(f.child(), sig);
      return;
    case HKind::Not:
    case HKind::Dia:
    case HKind::Box:
    case HKind::Down:
    case HKind::Exists:
      check_signature(f.child(), sig);
      return;
    case HKind::Or:
    case HKind::And:
    case HKind::Implies:
      check_signature(f.left(), sig);
      check_signature(f.right(), sig);
      return;
    default:
      return;
  }
}

// ---------------------------------------------------------------------------
// Printer (hybrid)
//
// Precedence levels: 0 = implication/binder body, 1 = |, 2 = &, 3 = unary
// and atoms.  A subformula is parenthesized when its own level is below the
// level its position requires.  Binder bodies are parenthesized exactly when
// they are binary (canonical form, e.g. "exists x . (?x & <> ?x)").

namespace {

int h_level(const HybridFormula& f) {
  switch (f.kind()) {
    case HKind::Implies:
      return 0;
    case HKind::Down:
    case HKind::Exists:
      return 0;  // extends maximally right
    case HKind::Or:
      return 1;
    case HKind::And:
      return 2;
    default:
      return 3;
  }
}

void h_print(const HybridFormula& f, int min_level, std::string& out) {
  if (h_level(f) < min_level) {
    out += '(';
    h_print(f, 0, out);
    out += ')';
    return;
  }
  switch (f.kind()) {
    case HKind::Bot:
      out += "false";
      return;
    case HKind::Top:
      out += "true";
      return;
    case HKind::Prop:
      out += f.name();
      return;
    case HKind::Nom:
      out += '\'';
      out += f.name();
      return;
    case HKind::WVar:
      out += '?';
      out += f.name();
      return;
    case HKind::Not:
      out += '~';
      h_print(f.child(), 3, out);
      return;
    case HKind::Dia:
      out += "<> ";
      h_print(f.child(), 3, out);
      return;
    case HKind::Box:
      out += "[] ";
      h_print(f.child(), 3, out);
      return;
    case HKind::At:
      out += '@';
      out += f.at_place_is_nom() ? '\'' : '?';
      out += f.name();
      out += ' ';
      h_print(f.child(), 3, out);
      return;
    case HKind::Down:
    case HKind::Exists: {
      out += f.kind() == HKind::Down ? "down " : "exists ";
      out += f.name();
      out += " . ";
      const HybridFormula& body = f.child();
      if (body.is_binary()) {
        out += '(';
        h_print(body, 0, out);
        out += ')';
      } else {
        h_print(body, 0, out);
      }
      return;
    }
    case HKind::Or:
      h_print(f.left(), 1, out);
      out += " | ";
      h_print(f.right(), 2, out);
      return;
    case HKind::And:
      h_print(f.left(), 2, out);
      out += " & ";
      h_print(f.right(), 3, out);
      return;
    case HKind::Implies:
      h_print(f.left(), 1, out);
      out += " -> ";
      h_print(f.right(), 0, out);
      return;
  }
}

}  // namespace

std::string to_string(const HybridFormula& f) {
  std::string out;
  h_print(f, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// FolFormula

FolFormula FolFormula::make(Node n) {
  n.size = 1 + (n.a ? n.a->size : 0) + (n.b ? n.b->size : 0);
  return FolFormula(std::make_shared<const Node>(std::move(n)));
}

FolFormula FolFormula::bot() { return make({FKind::Bot}); }
FolFormula FolFormula::top() { return make({FKind::Top}); }
FolFormula FolFormula::pred(std::string pred_name, FolTerm t) {
  return make({FKind::Pred, std::move(pred_name), std::move(t)});
}
FolFormula FolFormula::rel(FolTerm t1, FolTerm t2) {
  return make({FKind::Rel, "", std::move(t1), std::move(t2)});
}
FolFormula FolFormula::eq(FolTerm t1, FolTerm t2) {
  return make({FKind::Eq, "", std::move(t1), std::move(t2)});
}
FolFormula FolFormula::neg(FolFormula f) {
  Node n{FKind::Not};
  n.a = std::move(f.node_);
  return make(std::move(n));
}
FolFormula FolFormula::disj(FolFormula l, FolFormula r) {
  Node n{FKind::Or};
  n.a = std::move(l.node_);
  n.b = std::move(r.node_);
  return make(std::move(n));
}
FolFormula FolFormula::conj(FolFormula l, FolFormula r) {
  Node n{FKind::And};
  n.a = std::move(l.node_);
  n.b = std::move(r.node_);
  return make(std::move(n));
}
FolFormula FolFormula::implies(FolFormula l, FolFormula r) {
  Node n{FKind::Implies};
  n.a = std::move(l.node_);
  n.b = std::move(r.node_);
  return make(std::move(n));
}
FolFormula FolFormula::exists(std::string var, FolFormula f) {
  Node n{FKind::Exists, std::move(var)};
  n.a = std::move(f.node_);
  return make(std::move(n));
}
FolFormula FolFormula::forall(std::string var, FolFormula f) {
  Node n{FKind::Forall, std::move(var)};
  n.a = std::move(f.node_);
  return make(std::move(n));
}

bool FolFormula::is_atom() const {
  switch (kind()) {
    case FKind::Bot:
    case FKind::Top:
    case FKind::Pred:
    case FKind::Rel:
    case FKind::Eq:
      return true;
    default:
      return false;
  }
}

bool FolFormula::is_binary() const {
  switch (kind()) {
    case FKind::Or:
    case FKind::And:
    case FKind::Implies:
      return true;
    default:
      return false;
  }
}

bool FolFormula::is_quantifier() const {
  return kind() == FKind::Exists || kind() == FKind::Forall;
}

FolFormula FolFormula::child() const { return FolFormula(node_->a); }
FolFormula FolFormula::left() const { return FolFormula(node_->a); }
FolFormula FolFormula::right() const { return FolFormula(node_->b); }

namespace {

bool f_equal(const FolFormula& x, const FolFormula& y) {
  if (x.kind() != y.kind() || x.size() != y.size()) return false;
  switch (x.kind()) {
    case FKind::Bot:
    case FKind::Top:
      return true;
    case FKind::Pred:
      return x.name() == y.name() && x.term1() == y.term1();
    case FKind::Rel:
    case FKind::Eq:
      return x.term1() == y.term1() && x.term2() == y.term2();
    case FKind::Not:
      return f_equal(x.child(), y.child());
    case FKind::Exists:
    case FKind::Forall:
      return x.name() == y.name() && f_equal(x.child(), y.child());
    case FKind::Or:
    case FKind::And:
    case FKind::Implies:
      return f_equal(x.left(), y.left()) && f_equal(x.right(), y.right());
  }
  return false;
}

void collect_fol(const FolFormula& f, std::vector<std::string>& bound,
                 std::set<std::string>* vars, std::set<std::string>* preds,
                 std::set<std::string>* consts) {
  auto term = [&](const FolTerm& t) {
    if (t.kind == TermKind::Var) {
      if (vars && std::find(bound.begin(), bound.end(), t.name) == bound.end())
        vars->insert(t.name);
    } else if (consts) {
      consts->insert(t.name);
    }
  };
  switch (f.kind()) {
    case FKind::Pred:
      if (preds) preds->insert(f.name());
      term(f.term1());
      return;
    case FKind::Rel:
    case FKind::Eq:
      term(f.term1());
      term(f.term2());
      return;
    case FKind::Not:
      collect_fol(f.child(), bound, vars, preds, consts);
      return;
    case FKind::Exists:
    case FKind::Forall:
      bound.push_back(f.name());
      collect_fol(f.child(), bound, vars, preds, consts);
      bound.pop_back();
      return;
    case FKind::Or:
    case FKind::And:
    case FKind::Implies:
      collect_fol(f.left(), bound, vars, preds, consts);
      collect_fol(f.right(), bound, vars, preds, consts);
      return;
    default:
      return;
  }
}

}  // namespace

bool FolFormula::operator==(const FolFormula& other) const {
  if (node_ == other.node_) return true;
  return f_equal(*this, other);
}

std::set<std::string> free_vars(const FolFormula& f) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_fol(f, bound, &out, nullptr, nullptr);
  return out;
}

std::set<std::string> predicates(const FolFormula& f) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_fol(f, bound, nullptr, &out, nullptr);
  return out;
}

std::set<std::string> constants(const FolFormula& f) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_fol(f, bound, nullptr, nullptr, &out);
  return out;
}

// ---------------------------------------------------------------------------
// Printer (FOL) — same precedence scheme as the hybrid printer.

std::string to_string(const FolTerm& t) {
  return t.kind == TermKind::Const ? "'" + t.name : t.name;
}

namespace {

int f_level(const FolFormula& f) {
  switch (f.kind()) {
    case FKind::Implies:
      return 0;
    case FKind::Exists:
    case FKind::Forall:
      return 0;
    case FKind::Or:
      return 1;
    case FKind::And:
      return 2;
    default:
      return 3;
  }
}

void f_print(const FolFormula& f, int min_level, std::string& out) {
  if (f_level(f) < min_level) {
    out += '(';
    f_print(f, 0, out);
    out += ')';
    return;
  }
  switch (f.kind()) {
    case FKind::Bot:
      out += "false";
      return;
    case FKind::Top:
      out += "true";
      return;
    case FKind::Pred:
      out += f.name();
      out += '(';
      out += to_string(f.term1());
      out += ')';
      return;
    case FKind::Rel:
      out += "R(";
      out += to_string(f.term1());
      out += ',';
      out += to_string(f.term2());
      out += ')';
      return;
    case FKind::Eq:
      out += to_string(f.term1());
      out += " = ";
      out += to_string(f.term2());
      return;
    case FKind::Not:
      out += '~';
      f_print(f.child(), 3, out);
      return;
    case FKind::Exists:
    case FKind::Forall: {
      out += f.kind() == FKind::Exists ? "exists " : "forall ";
      out += f.name();
      out += " . ";
      const FolFormula& body = f.child();
      if (body.is_binary()) {
        out += '(';
        f_print(body, 0, out);
        out += ')';
      } else {
        f_print(body, 0, out);
      }
      return;
    }
    case FKind::Or:
      f_print(f.left(), 1, out);
      out += " | ";
      f_print(f.right(), 2, out);
      return;
    case FKind::And:
      f_print(f.left(), 2, out);
      out += " & ";
      f_print(f.right(), 3, out);
      return;
    case FKind::Implies:
      f_print(f.left(), 1, out);
      out += " -> ";
      f_print(f.right(), 0, out);
      return;
  }
}

}  // namespace

std::string to_string(const FolFormula& f) {
  std::string out;
  f_print(f, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Proposition <-> predicate names

std::string prop_predicate(const std::string& prop) {
  if (prop.empty()) throw DomainError("empty proposition name");
  std::string out = prop;
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

std::string predicate_prop(const std::string& pred_name) {
  if (pred_name.empty() ||
      !std::isupper(static_cast<unsigned char>(pred_name[0])))
    return "";
  std::string out = pred_name;
  out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
  return out;
}

}  // namespace hybis
