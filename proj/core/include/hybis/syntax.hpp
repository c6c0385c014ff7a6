#pragma once

// Syntax for a hybrid modal language and its first-order correspondence
// language.
//
// Hybrid formulas (core grammar):
//
//   phi ::= false | p | 's | ?x | ~phi | phi | psi | <> phi
//         | down x . phi | @'s phi | @?x phi | exists x . phi
//
// Sugar (true, &, ->, []) is kept in the tree and flagged as derived;
// desugar() eliminates it.  The first-order language has one binary
// relation symbol R, unary predicates (capitalized proposition names),
// constants (nominals plus declared extras), and equality.

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hybis {

// ---------------------------------------------------------------------------
// Errors

// Parse failure with the byte offset of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Violation of a semantic precondition (unknown symbol, arity, reserved
// name, malformed structure).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation refused to start because its configured size budget
// (pair-space cap, enumeration cap) would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Signature and feature sets

// Finite vocabulary: ordered, duplicate-free proposition and nominal names.
// The two name sets are disjoint.  World-variable names are unconstrained
// (any identifier) and not part of the signature.
struct Signature {
  std::vector<std::string> props;
  std::vector<std::string> noms;

  bool has_prop(const std::string& name) const;
  bool has_nom(const std::string& name) const;

  // Throws DomainError on duplicates, overlap, malformed or reserved names.
  void validate() const;

  bool operator==(const Signature&) const = default;
};

// Which operators beyond the modal base a language fragment admits.
struct FeatureSet {
  bool nom = false;     // nominal atoms
  bool down = false;    // the binder  down x . phi
  bool at = false;      // the jump    @place phi
  bool exists = false;  // the binder  exists x . phi

  static FeatureSet none() { return {}; }
  static FeatureSet full() { return {true, true, true, true}; }
  // Parses a comma-separated list, e.g. "down,nom"; "" is the empty set.
  static FeatureSet parse(const std::string& text);

  bool subset_of(const FeatureSet& other) const;
  std::string to_string() const;  // canonical "at,down,exists,nom" order

  bool operator==(const FeatureSet&) const = default;
};

// ---------------------------------------------------------------------------
// Hybrid formulas

enum class HKind : std::uint8_t {
  Bot,
  Prop,
  Nom,
  WVar,
  Not,
  Or,
  Dia,
  Down,
  At,
  Exists,
  // sugar
  Top,
  And,
  Implies,
  Box,
};

bool is_sugar(HKind k);

// Immutable shared tree.  Value type; structural equality.
class HybridFormula {
 public:
  // Factories (the only way to build formulas).
  static HybridFormula bot();
  static HybridFormula top();
  static HybridFormula prop(std::string name);
  static HybridFormula nom(std::string name);
  static HybridFormula wvar(std::string name);
  static HybridFormula neg(HybridFormula f);
  static HybridFormula disj(HybridFormula l, HybridFormula r);
  static HybridFormula conj(HybridFormula l, HybridFormula r);
  static HybridFormula implies(HybridFormula l, HybridFormula r);
  static HybridFormula dia(HybridFormula f);
  static HybridFormula box(HybridFormula f);
  static HybridFormula down(std::string var, HybridFormula f);
  static HybridFormula at_nom(std::string name, HybridFormula f);
  static HybridFormula at_wvar(std::string name, HybridFormula f);
  static HybridFormula exists(std::string var, HybridFormula f);

  HKind kind() const { return node_->kind; }
  // Atom name, binder variable, or @-place name (see at_place_is_nom()).
  const std::string& name() const { return node_->name; }
  // For At nodes: whether the place is a nominal (else a world variable).
  bool at_place_is_nom() const { return node_->place_is_nom; }

  bool is_atom() const;
  bool is_unary() const;   // Not, Dia, Box, At
  bool is_binary() const;  // Or, And, Implies
  bool is_binder() const;  // Down, Exists

  HybridFormula child() const;  // unary and binder nodes
  HybridFormula left() const;   // binary nodes
  HybridFormula right() const;

  // Number of AST nodes (@ places and binder variables are part of their
  // node).  Cached at construction.
  int size() const { return node_->size; }
  // Degree: 0 on atoms, unchanged by ~ and @, max over binary connectives,
  // +1 for <>, [], down, exists.  Cached at construction.
  int degree() const { return node_->degree; }

  bool operator==(const HybridFormula& other) const;
  bool operator!=(const HybridFormula& other) const { return !(*this == other); }

 private:
  struct Node {
    HKind kind;
    std::string name;
    bool place_is_nom = false;
    std::shared_ptr<const Node> a, b;
    int size = 1;
    int degree = 0;
  };
  using Ptr = std::shared_ptr<const Node>;

  explicit HybridFormula(Ptr node) : node_(std::move(node)) {}
  static HybridFormula make(Node n);
  static HybridFormula wrap(const Ptr& p) { return HybridFormula(p); }

  Ptr node_;
};

// dg(phi); equals phi.degree().
int degree(const HybridFormula& f);

// World variables with at least one free occurrence.  down x / exists x
// bind x; @?x does not bind.
std::set<std::string> free_wvars(const HybridFormula& f);

bool is_sentence(const HybridFormula& f);

// Syntactic feature scan: nom iff a nominal occurs (as atom or @-place),
// down iff a down binder occurs, at iff @ occurs, exists iff an exists
// binder occurs.
FeatureSet features(const HybridFormula& f);

// Eliminates sugar: true -> ~false, a & b -> ~(~a | ~b), a -> b -> ~a | b,
// [] f -> ~<>~f.  Preserves degree, free variables, and features.
HybridFormula desugar(const HybridFormula& f);

// Throws DomainError if an atom is outside the signature.
void check_signature(const HybridFormula& f, const Signature& sig);

// Canonical concrete syntax; parse_hybrid(to_string(f), sig) == f.
std::string to_string(const HybridFormula& f);

// ---------------------------------------------------------------------------
// First-order formulas over the correspondence signature

enum class TermKind : std::uint8_t { Var, Const };

struct FolTerm {
  TermKind kind;
  std::string name;

  static FolTerm var(std::string name) { return {TermKind::Var, std::move(name)}; }
  static FolTerm constant(std::string name) {
    return {TermKind::Const, std::move(name)};
  }
  bool operator==(const FolTerm&) const = default;
};

enum class FKind : std::uint8_t {
  Bot,
  Pred,  // unary predicate application
  Rel,   // R(t1, t2)
  Eq,    // t1 = t2
  Not,
  Or,
  Exists,
  Forall,
  // sugar
  Top,
  And,
  Implies,
};

class FolFormula {
 public:
  static FolFormula bot();
  static FolFormula top();
  static FolFormula pred(std::string pred_name, FolTerm t);
  static FolFormula rel(FolTerm t1, FolTerm t2);
  static FolFormula eq(FolTerm t1, FolTerm t2);
  static FolFormula neg(FolFormula f);
  static FolFormula disj(FolFormula l, FolFormula r);
  static FolFormula conj(FolFormula l, FolFormula r);
  static FolFormula implies(FolFormula l, FolFormula r);
  static FolFormula exists(std::string var, FolFormula f);
  static FolFormula forall(std::string var, FolFormula f);

  FKind kind() const { return node_->kind; }
  // Predicate name (Pred) or quantified variable (Exists/Forall).
  const std::string& name() const { return node_->name; }
  const FolTerm& term1() const { return node_->t1; }  // Pred, Rel, Eq
  const FolTerm& term2() const { return node_->t2; }  // Rel, Eq

  bool is_atom() const;
  bool is_binary() const;
  bool is_quantifier() const;

  FolFormula child() const;  // Not and quantifier nodes
  FolFormula left() const;
  FolFormula right() const;

  int size() const { return node_->size; }

  bool operator==(const FolFormula& other) const;
  bool operator!=(const FolFormula& other) const { return !(*this == other); }

 private:
  struct Node {
    FKind kind;
    std::string name;
    FolTerm t1{TermKind::Var, ""}, t2{TermKind::Var, ""};
    std::shared_ptr<const Node> a, b;
    int size = 1;
  };
  using Ptr = std::shared_ptr<const Node>;

  explicit FolFormula(Ptr node) : node_(std::move(node)) {}
  static FolFormula make(Node n);

  Ptr node_;
};

std::set<std::string> free_vars(const FolFormula& f);

// Unary predicate names occurring in f (not R).
std::set<std::string> predicates(const FolFormula& f);

// Constant names occurring in f.
std::set<std::string> constants(const FolFormula& f);

std::string to_string(const FolTerm& t);
std::string to_string(const FolFormula& f);

// Proposition name -> predicate name (capitalize first letter: p -> P,
// foo -> Foo) and its inverse.  "r" is rejected as a proposition name by
// Signature::validate because its predicate would collide with R.
std::string prop_predicate(const std::string& prop);
// Returns "" if pred_name is not of the prop_predicate form.
std::string predicate_prop(const std::string& pred_name);

// ---------------------------------------------------------------------------
// Parsers
//
// Hybrid grammar (whitespace-insensitive; binders extend maximally right):
//
//   formula := binder | impl
//   binder  := ("down" | "exists") var "." formula     var: bare or ?-sigiled
//   impl    := disj ["->" formula]
//   disj    := conj {"|" conj}
//   conj    := unary {"&" unary}
//   unary   := "~" unary | "<>" unary | "[]" unary | "@" place unary | atom
//   atom    := "false" | "true" | PROP | NOM | WVAR | "(" formula ")"
//   place   := NOM | WVAR
//   PROP = [a-z][a-z0-9_]*     NOM = "'" ident     WVAR = "?" ident
//
// FOL grammar: same connective layer; "forall v . f" / "exists v . f" at the
// formula level; atoms "false", "true", "Pred(t)", "R(t,t)", "t = t"; terms
// are bare lowercase variables or 'name constants.  Predicate names start
// with an uppercase letter; R is the binary accessibility relation, all
// other predicates are unary.

// Throws ParseError (syntax) or reports unknown propositions/nominals
// against sig as ParseError with the atom's offset.  World-variable names
// are unrestricted except the reserved designated pair (stx, sty).
HybridFormula parse_hybrid(const std::string& text, const Signature& sig);

// Syntax-only parse; names are not checked against any signature.
FolFormula parse_fol(const std::string& text);

// Keywords and reserved names ("false", "true", "down", "exists", "forall",
// "stx", "sty").
bool is_reserved_name(const std::string& name);

}  // namespace hybis
