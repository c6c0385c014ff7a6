#include <cctype>
#include <cstddef>
#include <string>
#include <vector>

#include "hybis/syntax.hpp"

// Recursive-descent parsers for the hybrid and first-order concrete syntax
// documented in syntax.hpp.  One token stream serves both languages; the
// parsers differ only above the lexer.

namespace hybis {

namespace {

enum class Tok {
  End,
  Ident,   // lowercase identifier (also keywords)
  UIdent,  // uppercase-initial identifier (FOL predicate)
  Nom,     // 'name
  WVar,    // ?name
  LParen,
  RParen,
  Dot,
  Comma,
  Equals,
  Tilde,
  Amp,
  Bar,
  Arrow,
  Dia,
  Box,
  AtSign,
};

struct Token {
  Tok kind;
  std::string text;  // identifier payload (without sigil)
  std::size_t offset;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t offset) const {
    throw ParseError(msg, offset);
  }

  std::string ident(bool allow_upper_start) {
    std::size_t start = pos_;
    unsigned char c0 = static_cast<unsigned char>(text_[pos_]);
    if (!(std::islower(c0) || (allow_upper_start && std::isupper(c0))))
      fail("expected identifier", pos_);
    ++pos_;
    while (pos_ < text_.size()) {
      unsigned char c = static_cast<unsigned char>(text_[pos_]);
      if (std::islower(c) || std::isdigit(c) || c == '_' ||
          (allow_upper_start && std::isupper(c)))
        ++pos_;
      else
        break;
    }
    return text_.substr(start, pos_ - start);
  }

  void advance() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    current_.offset = pos_;
    if (pos_ >= text_.size()) {
      current_.kind = Tok::End;
      current_.text.clear();
      return;
    }
    char c = text_[pos_];
    unsigned char uc = static_cast<unsigned char>(c);
    if (std::islower(uc)) {
      current_.kind = Tok::Ident;
      current_.text = ident(false);
      return;
    }
    if (std::isupper(uc)) {
      current_.kind = Tok::UIdent;
      current_.text = ident(true);
      return;
    }
    switch (c) {
      case '\'':
        ++pos_;
        if (pos_ >= text_.size() ||
            !std::islower(static_cast<unsigned char>(text_[pos_])))
          fail("expected nominal name after '", pos_);
        current_.kind = Tok::Nom;
        current_.text = ident(false);
        return;
      case '?':
        ++pos_;
        if (pos_ >= text_.size() ||
            !std::islower(static_cast<unsigned char>(text_[pos_])))
          fail("expected world-variable name after ?", pos_);
        current_.kind = Tok::WVar;
        current_.text = ident(false);
        return;
      case '(':
        ++pos_;
        current_.kind = Tok::LParen;
        return;
      case ')':
        ++pos_;
        current_.kind = Tok::RParen;
        return;
      case '.':
        ++pos_;
        current_.kind = Tok::Dot;
        return;
      case ',':
        ++pos_;
        current_.kind = Tok::Comma;
        return;
      case '=':
        ++pos_;
        current_.kind = Tok::Equals;
        return;
      case '~':
        ++pos_;
        current_.kind = Tok::Tilde;
        return;
      case '&':
        ++pos_;
        current_.kind = Tok::Amp;
        return;
      case '|':
        ++pos_;
        current_.kind = Tok::Bar;
        return;
      case '@':
        ++pos_;
        current_.kind = Tok::AtSign;
        return;
      case '-':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          pos_ += 2;
          current_.kind = Tok::Arrow;
          return;
        }
        fail("expected '->'", pos_);
      case '<':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          pos_ += 2;
          current_.kind = Tok::Dia;
          return;
        }
        fail("expected '<>'", pos_);
      case '[':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == ']') {
          pos_ += 2;
          current_.kind = Tok::Box;
          return;
        }
        fail("expected '[]'", pos_);
      default:
        fail(std::string("unexpected character '") + c + "'", pos_);
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  Token current_;
};

// ---------------------------------------------------------------------------
// Hybrid parser

class HybridParser {
 public:
  HybridParser(const std::string& text, const Signature& sig)
      : lex_(text), sig_(sig) {}

  HybridFormula run() {
    HybridFormula f = formula();
    const Token& t = lex_.peek();
    if (t.kind != Tok::End) throw ParseError("trailing input", t.offset);
    return f;
  }

 private:
  bool peek_keyword(const char* kw) const {
    const Token& t = lex_.peek();
    return t.kind == Tok::Ident && t.text == kw;
  }

  void expect(Tok kind, const char* what) {
    const Token& t = lex_.peek();
    if (t.kind != kind)
      throw ParseError(std::string("expected ") + what, t.offset);
    lex_.take();
  }

  std::string binder_var() {
    Token t = lex_.take();
    if (t.kind != Tok::Ident && t.kind != Tok::WVar)
      throw ParseError("expected world-variable name after binder", t.offset);
    if (is_reserved_name(t.text))
      throw ParseError("reserved world-variable name '" + t.text + "'",
                       t.offset);
    return t.text;
  }

  HybridFormula formula() {
    if (peek_keyword("down")) {
      lex_.take();
      std::string var = binder_var();
      expect(Tok::Dot, "'.' after binder variable");
      return HybridFormula::down(std::move(var), formula());
    }
    if (peek_keyword("exists")) {
      lex_.take();
      std::string var = binder_var();
      expect(Tok::Dot, "'.' after binder variable");
      return HybridFormula::exists(std::move(var), formula());
    }
    return impl();
  }

  HybridFormula impl() {
    HybridFormula l = disj();
    if (lex_.peek().kind == Tok::Arrow) {
      lex_.take();
      return HybridFormula::implies(std::move(l), formula());
    }
    return l;
  }

  HybridFormula disj() {
    HybridFormula l = conj();
    while (lex_.peek().kind == Tok::Bar) {
      lex_.take();
      l = HybridFormula::disj(std::move(l), conj());
    }
    return l;
  }

  HybridFormula conj() {
    HybridFormula l = unary();
    while (lex_.peek().kind == Tok::Amp) {
      lex_.take();
      l = HybridFormula::conj(std::move(l), unary());
    }
    return l;
  }

  HybridFormula unary() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Tilde:
        lex_.take();
        return HybridFormula::neg(unary());
      case Tok::Dia:
        lex_.take();
        return HybridFormula::dia(unary());
      case Tok::Box:
        lex_.take();
        return HybridFormula::box(unary());
      case Tok::AtSign: {
        lex_.take();
        Token place = lex_.take();
        if (place.kind == Tok::Nom) {
          if (!sig_.has_nom(place.text))
            throw ParseError("unknown nominal '" + place.text + "'",
                             place.offset);
          return HybridFormula::at_nom(place.text, unary());
        }
        if (place.kind == Tok::WVar) {
          if (is_reserved_name(place.text))
            throw ParseError("reserved world-variable name '" + place.text + "'",
                             place.offset);
          return HybridFormula::at_wvar(place.text, unary());
        }
        throw ParseError("expected nominal or world variable after @",
                         place.offset);
      }
      default:
        return atom();
    }
  }

  HybridFormula atom() {
    Token t = lex_.take();
    switch (t.kind) {
      case Tok::Ident:
        if (t.text == "false") return HybridFormula::bot();
        if (t.text == "true") return HybridFormula::top();
        if (is_reserved_name(t.text))
          throw ParseError("unexpected keyword '" + t.text + "'", t.offset);
        if (!sig_.has_prop(t.text))
          throw ParseError("unknown proposition '" + t.text + "'", t.offset);
        return HybridFormula::prop(t.text);
      case Tok::Nom:
        if (!sig_.has_nom(t.text))
          throw ParseError("unknown nominal '" + t.text + "'", t.offset);
        return HybridFormula::nom(t.text);
      case Tok::WVar:
        if (is_reserved_name(t.text))
          throw ParseError("reserved world-variable name '" + t.text + "'",
                           t.offset);
        return HybridFormula::wvar(t.text);
      case Tok::LParen: {
        HybridFormula f = formula();
        expect(Tok::RParen, "')'");
        return f;
      }
      default:
        throw ParseError("expected formula", t.offset);
    }
  }

  Lexer lex_;
  const Signature& sig_;
};

// ---------------------------------------------------------------------------
// First-order parser

class FolParser {
 public:
  explicit FolParser(const std::string& text) : lex_(text) {}

  FolFormula run() {
    FolFormula f = formula();
    const Token& t = lex_.peek();
    if (t.kind != Tok::End) throw ParseError("trailing input", t.offset);
    return f;
  }

 private:
  bool peek_keyword(const char* kw) const {
    const Token& t = lex_.peek();
    return t.kind == Tok::Ident && t.text == kw;
  }

  void expect(Tok kind, const char* what) {
    const Token& t = lex_.peek();
    if (t.kind != kind)
      throw ParseError(std::string("expected ") + what, t.offset);
    lex_.take();
  }

  std::string quant_var() {
    Token t = lex_.take();
    if (t.kind != Tok::Ident)
      throw ParseError("expected variable name after quantifier", t.offset);
    if (t.text == "false" || t.text == "true" || t.text == "forall" ||
        t.text == "exists" || t.text == "down")
      throw ParseError("keyword cannot be a variable name", t.offset);
    return t.text;
  }

  FolFormula formula() {
    if (peek_keyword("forall")) {
      lex_.take();
      std::string var = quant_var();
      expect(Tok::Dot, "'.' after quantified variable");
      return FolFormula::forall(std::move(var), formula());
    }
    if (peek_keyword("exists")) {
      lex_.take();
      std::string var = quant_var();
      expect(Tok::Dot, "'.' after quantified variable");
      return FolFormula::exists(std::move(var), formula());
    }
    return impl();
  }

  FolFormula impl() {
    FolFormula l = disj();
    if (lex_.peek().kind == Tok::Arrow) {
      lex_.take();
      return FolFormula::implies(std::move(l), formula());
    }
    return l;
  }

  FolFormula disj() {
    FolFormula l = conj();
    while (lex_.peek().kind == Tok::Bar) {
      lex_.take();
      l = FolFormula::disj(std::move(l), conj());
    }
    return l;
  }

  FolFormula conj() {
    FolFormula l = unary();
    while (lex_.peek().kind == Tok::Amp) {
      lex_.take();
      l = FolFormula::conj(std::move(l), unary());
    }
    return l;
  }

  FolFormula unary() {
    if (lex_.peek().kind == Tok::Tilde) {
      lex_.take();
      return FolFormula::neg(unary());
    }
    return atom();
  }

  FolTerm term() {
    Token t = lex_.take();
    if (t.kind == Tok::Ident) {
      if (t.text == "false" || t.text == "true" || t.text == "forall" ||
          t.text == "exists")
        throw ParseError("keyword cannot be a term", t.offset);
      return FolTerm::var(t.text);
    }
    if (t.kind == Tok::Nom) return FolTerm::constant(t.text);
    throw ParseError("expected term (variable or 'constant)", t.offset);
  }

  FolFormula atom() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Ident:
        if (t.text == "false") {
          lex_.take();
          return FolFormula::bot();
        }
        if (t.text == "true") {
          lex_.take();
          return FolFormula::top();
        }
        [[fallthrough]];
      case Tok::Nom: {
        FolTerm lhs = term();
        expect(Tok::Equals, "'=' after term");
        return FolFormula::eq(std::move(lhs), term());
      }
      case Tok::UIdent: {
        Token p = lex_.take();
        expect(Tok::LParen, "'(' after predicate name");
        FolTerm first = term();
        if (p.text == "R") {
          expect(Tok::Comma, "',' (the accessibility relation R is binary)");
          FolTerm second = term();
          expect(Tok::RParen, "')'");
          return FolFormula::rel(std::move(first), std::move(second));
        }
        if (lex_.peek().kind == Tok::Comma)
          throw ParseError(
              "predicate " + p.text + " is unary (only R is binary)",
              lex_.peek().offset);
        expect(Tok::RParen, "')'");
        return FolFormula::pred(p.text, std::move(first));
      }
      case Tok::LParen: {
        lex_.take();
        FolFormula f = formula();
        expect(Tok::RParen, "')'");
        return f;
      }
      default:
        throw ParseError("expected formula", t.offset);
    }
  }

  Lexer lex_;
};

}  // namespace

HybridFormula parse_hybrid(const std::string& text, const Signature& sig) {
  return HybridParser(text, sig).run();
}

FolFormula parse_fol(const std::string& text) { return FolParser(text).run(); }

}  // namespace hybis
