#include "polylet/parser.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <string>
#include <utility>
#include <vector>

namespace polylet {

namespace {

enum class Tok {
  Int,
  Str,
  Ident,
  Let,
  In,
  Fun,
  Ref,
  Rset,
  LParen,
  RParen,
  LBrack,
  RBrack,
  Comma,
  Semi,
  Plus,
  ColonColon,
  Colon,
  Arrow,
  Equals,
  Bang,
  Percent,
  BracketOpen,   // .<
  BracketClose,  // >.
  EscapeMark,    // .~
  Underscore,
  AtAt,
  End,
};

std::string_view describe(Tok t) {
  switch (t) {
    case Tok::Int: return "integer";
    case Tok::Str: return "string";
    case Tok::Ident: return "identifier";
    case Tok::Let: return "'let'";
    case Tok::In: return "'in'";
    case Tok::Fun: return "'fun'";
    case Tok::Ref: return "'ref'";
    case Tok::Rset: return "'rset'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Plus: return "'+'";
    case Tok::ColonColon: return "'::'";
    case Tok::Colon: return "':'";
    case Tok::Arrow: return "'->'";
    case Tok::Equals: return "'='";
    case Tok::Bang: return "'!'";
    case Tok::Percent: return "'%'";
    case Tok::BracketOpen: return "'.<'";
    case Tok::BracketClose: return "'>.'";
    case Tok::EscapeMark: return "'.~'";
    case Tok::Underscore: return "'_'";
    case Tok::AtAt: return "'@@'";
    case Tok::End: return "end of input";
  }
  return "token";
}

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t number = 0;
  SourceLoc loc;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) return out;
    }
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  SourceLoc here() const { return {pos_, line_, col_}; }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  [[noreturn]] void error(const std::string& msg, SourceLoc loc) const {
    fail(DiagnosticKind::ParseError, msg, loc);
  }

  void skip_space() {
    for (;;) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(peek()))) advance();
      if (peek() == '(' && peek(1) == '*') {
        const SourceLoc start = here();
        int depth = 0;
        do {
          if (pos_ >= text_.size()) error("unterminated comment", start);
          if (peek() == '(' && peek(1) == '*') {
            ++depth;
            advance();
            advance();
          } else if (peek() == '*' && peek(1) == ')') {
            --depth;
            advance();
            advance();
          } else {
            advance();
          }
        } while (depth > 0);
        continue;
      }
      return;
    }
  }

  Token make(Tok kind, SourceLoc loc, std::size_t width) {
    for (std::size_t i = 0; i < width; ++i) advance();
    return Token{kind, {}, 0, loc};
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  Token next() {
    const SourceLoc loc = here();
    if (pos_ >= text_.size()) return Token{Tok::End, {}, 0, loc};
    const char c = peek();

    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      const std::size_t start = pos_;
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      Token t{Tok::Int, std::string(text_.substr(start, pos_ - start)), 0, loc};
      const auto* first = t.text.data();
      const auto [ptr, ec] = std::from_chars(first, first + t.text.size(), t.number);
      if (ec != std::errc{} || ptr != first + t.text.size()) {
        error(fmt::format("integer literal out of range: {}", t.text), loc);
      }
      return t;
    }
    if (c == '"') return string_literal(loc);
    if (ident_start(c)) {
      const std::size_t start = pos_;
      while (ident_char(peek())) advance();
      std::string word(text_.substr(start, pos_ - start));
      if (word == "_") return Token{Tok::Underscore, word, 0, loc};
      if (word == "let") return Token{Tok::Let, word, 0, loc};
      if (word == "in") return Token{Tok::In, word, 0, loc};
      if (word == "fun") return Token{Tok::Fun, word, 0, loc};
      if (word == "ref") return Token{Tok::Ref, word, 0, loc};
      if (word == "rset") return Token{Tok::Rset, word, 0, loc};
      return Token{Tok::Ident, std::move(word), 0, loc};
    }
    switch (c) {
      case '(': return make(Tok::LParen, loc, 1);
      case ')': return make(Tok::RParen, loc, 1);
      case '[': return make(Tok::LBrack, loc, 1);
      case ']': return make(Tok::RBrack, loc, 1);
      case ',': return make(Tok::Comma, loc, 1);
      case ';': return make(Tok::Semi, loc, 1);
      case '+': return make(Tok::Plus, loc, 1);
      case '=': return make(Tok::Equals, loc, 1);
      case '!': return make(Tok::Bang, loc, 1);
      case '%': return make(Tok::Percent, loc, 1);
      case ':': return peek(1) == ':' ? make(Tok::ColonColon, loc, 2) : make(Tok::Colon, loc, 1);
      case '-':
        if (peek(1) == '>') return make(Tok::Arrow, loc, 2);
        break;
      case '.':
        if (peek(1) == '<') return make(Tok::BracketOpen, loc, 2);
        if (peek(1) == '~') return make(Tok::EscapeMark, loc, 2);
        break;
      case '>':
        if (peek(1) == '.') return make(Tok::BracketClose, loc, 2);
        break;
      case '@':
        if (peek(1) == '@') return make(Tok::AtAt, loc, 2);
        break;
      default: break;
    }
    error(fmt::format("unexpected character '{}'", c), loc);
  }

  Token string_literal(SourceLoc loc) {
    advance();  // opening quote
    std::string value;
    for (;;) {
      if (pos_ >= text_.size()) error("unterminated string literal", loc);
      const char c = peek();
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        const char e = peek();
        switch (e) {
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          case 'r': value += '\r'; break;
          case '"': value += '"'; break;
          case '\\': value += '\\'; break;
          default: error(fmt::format("unknown escape '\\{}'", e), here());
        }
        advance();
        continue;
      }
      value += c;
      advance();
    }
    return Token{Tok::Str, std::move(value), 0, loc};
  }
};

enum class Mode { Source, Plain, Target };

class Parser {
 public:
  Parser(std::string_view text, Mode mode) : toks_(Lexer(text).run()), mode_(mode) {}

  SourceExpr parse_program() {
    SourceExpr e = expr();
    if (cur().kind != Tok::End) {
      error(fmt::format("unexpected {} after expression", describe(cur().kind)), cur().loc);
    }
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Mode mode_;
  int level_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at(Tok k) const { return cur().kind == k; }

  [[noreturn]] static void error(const std::string& msg, SourceLoc loc) {
    fail(DiagnosticKind::ParseError, msg, loc);
  }

  const Token& expect(Tok k) {
    if (!at(k)) {
      error(fmt::format("expected {} but found {}", describe(k), describe(cur().kind)), cur().loc);
    }
    return take();
  }

  void require_staging(const Token& t) const {
    if (mode_ != Mode::Source) {
      error(fmt::format("staging form {} is not allowed here", describe(t.kind)), t.loc);
    }
  }

  SourceExpr expr() {
    if (at(Tok::Let)) {
      const SourceLoc loc = take().loc;
      std::string name = expect(Tok::Ident).text;
      expect(Tok::Equals);
      SourceExpr rhs = expr();
      expect(Tok::In);
      SourceExpr body = expr();
      return src::let(std::move(name), std::move(rhs), std::move(body), loc);
    }
    if (at(Tok::Fun)) {
      const SourceLoc loc = take().loc;
      Pattern param = pattern();
      expect(Tok::Arrow);
      SourceExpr body = expr();
      return src::fun(std::move(param), std::move(body), loc);
    }
    SourceExpr lhs = sum();
    if (at(Tok::AtAt)) {
      const SourceLoc loc = take().loc;
      if (mode_ != Mode::Target) error("'@@' is only available in combinator programs", loc);
      return src::app(std::move(lhs), expr(), loc);
    }
    return lhs;
  }

  Pattern pattern() {
    if (at(Tok::Ident)) return Pattern::named(take().text);
    if (at(Tok::Underscore)) {
      take();
      return Pattern::wildcard();
    }
    if (at(Tok::LParen)) {
      const SourceLoc loc = take().loc;
      if (at(Tok::RParen)) {
        take();
        return Pattern::unit();
      }
      if (mode_ == Mode::Target && at(Tok::Underscore)) {
        take();
        expect(Tok::Colon);
        const Token& unit_tok = expect(Tok::Ident);
        const Token& cod_tok = expect(Tok::Ident);
        if (unit_tok.text != "unit" || cod_tok.text != "cod") {
          error("only the '(_ : unit cod)' annotation is supported", loc);
        }
        expect(Tok::RParen);
        return Pattern::unit_code();
      }
      error("expected '()' pattern", loc);
    }
    error(fmt::format("expected a binder but found {}", describe(cur().kind)), cur().loc);
  }

  SourceExpr sum() {
    SourceExpr e = cons();
    while (at(Tok::Plus)) {
      const SourceLoc loc = take().loc;
      e = src::add(std::move(e), cons(), loc);
    }
    return e;
  }

  SourceExpr cons() {
    SourceExpr head = application();
    if (at(Tok::ColonColon)) {
      const SourceLoc loc = take().loc;
      return src::cons(std::move(head), cons(), loc);
    }
    return head;
  }

  bool starts_prefix() const {
    switch (cur().kind) {
      case Tok::Int:
      case Tok::Str:
      case Tok::Ident:
      case Tok::LParen:
      case Tok::LBrack:
      case Tok::BracketOpen:
      case Tok::Bang:
      case Tok::Percent:
      case Tok::EscapeMark:
      case Tok::Ref:
      case Tok::Rset: return true;
      default: return false;
    }
  }

  SourceExpr application() {
    SourceExpr head = prefix();
    while (starts_prefix()) {
      const SourceLoc loc = cur().loc;
      head = src::app(std::move(head), prefix(), loc);
    }
    return head;
  }

  SourceExpr prefix() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Bang: {
        const SourceLoc loc = take().loc;
        return src::ref_get(prefix(), loc);
      }
      case Tok::Ref: {
        const SourceLoc loc = take().loc;
        return src::ref_new(prefix(), loc);
      }
      case Tok::Rset: {
        const SourceLoc loc = take().loc;
        SourceExpr cell = prefix();
        SourceExpr value = prefix();
        return src::rset(std::move(cell), std::move(value), loc);
      }
      case Tok::Percent: {
        require_staging(t);
        const SourceLoc loc = take().loc;
        if (level_ == 0) error("CSP at level 0: '%' is only allowed inside a bracket", loc);
        return src::csp(at_level(0, [&] { return prefix(); }), loc);
      }
      case Tok::EscapeMark: {
        require_staging(t);
        const SourceLoc loc = take().loc;
        if (level_ == 0) error("escape at level 0: '.~' is only allowed inside a bracket", loc);
        return src::escape(at_level(0, [&] { return prefix(); }), loc);
      }
      default: return atom();
    }
  }

  template <typename F>
  SourceExpr at_level(int level, F&& body) {
    const int saved = level_;
    level_ = level;
    SourceExpr e = body();
    level_ = saved;
    return e;
  }

  SourceExpr atom() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Int: {
        const Token& tok = take();
        return src::int_lit(tok.number, tok.loc);
      }
      case Tok::Str: {
        const Token& tok = take();
        return src::str_lit(tok.text, tok.loc);
      }
      case Tok::Ident: {
        const Token& tok = take();
        return src::var(tok.text, tok.loc);
      }
      case Tok::LBrack: {
        const SourceLoc loc = take().loc;
        std::vector<SourceExpr> items;
        if (!at(Tok::RBrack)) {
          items.push_back(expr());
          while (at(Tok::Semi)) {
            take();
            items.push_back(expr());
          }
        }
        const SourceLoc end = expect(Tok::RBrack).loc;
        SourceExpr list = src::nil(items.empty() ? loc : end);
        for (auto it = items.rbegin(); it != items.rend(); ++it) list = src::cons(*it, std::move(list), loc);
        return list;
      }
      case Tok::BracketOpen: {
        require_staging(t);
        const SourceLoc loc = take().loc;
        if (level_ != 0) error("nested bracket: brackets may not nest", loc);
        SourceExpr body = at_level(1, [&] { return expr(); });
        expect(Tok::BracketClose);
        return src::bracket(std::move(body), loc);
      }
      case Tok::LParen: {
        const SourceLoc loc = take().loc;
        if (at(Tok::RParen)) {
          take();
          return src::unit(loc);
        }
        SourceExpr first = expr();
        if (at(Tok::Comma)) {
          take();
          SourceExpr second = expr();
          if (at(Tok::Comma)) error("only pairs are supported, not longer tuples", cur().loc);
          expect(Tok::RParen);
          return src::pair(std::move(first), std::move(second), loc);
        }
        expect(Tok::RParen);
        return first;
      }
      default:
        error(fmt::format("expected an expression but found {}", describe(t.kind)), t.loc);
    }
  }
};

// Rebuilds a parsed combinator program as a TargetTerm, folding saturated
// applications of combinator names that are not shadowed by a binder.
class Lowering {
 public:
  TargetTerm run(const SourceExpr& e) { return lower(e); }

 private:
  std::vector<std::string> bound_;

  bool is_bound(const std::string& name) const {
    for (const auto& b : bound_) {
      if (b == name) return true;
    }
    return false;
  }

  std::optional<Combinator> combinator_head(const SourceExpr& e) const {
    if (e->kind != SourceKind::Var || is_bound(e->text)) return std::nullopt;
    return combinator_from_name(e->text);
  }

  TargetTerm lower(const SourceExpr& e) {
    const auto& n = *e;
    const SourceLoc loc = n.loc;
    switch (n.kind) {
      case SourceKind::Var: {
        if (auto c = combinator_head(e)) {
          if (combinator_arity(*c) == 0) return tgt::comb(*c, {}, loc);
          fail(DiagnosticKind::ParseError,
               fmt::format("combinator '{}' expects {} argument(s)", n.text, combinator_arity(*c)),
               loc);
        }
        return tgt::var(n.text, loc);
      }
      case SourceKind::Int: return tgt::int_lit(n.number, loc);
      case SourceKind::Str: return tgt::str_lit(n.text, loc);
      case SourceKind::Nil: return tgt::nil(loc);
      case SourceKind::Unit: return tgt::unit(loc);
      case SourceKind::Add: return tgt::add(lower(n.kids[0]), lower(n.kids[1]), loc);
      case SourceKind::Pair: return tgt::pair(lower(n.kids[0]), lower(n.kids[1]), loc);
      case SourceKind::Cons: return tgt::cons(lower(n.kids[0]), lower(n.kids[1]), loc);
      case SourceKind::RefNew: return tgt::ref_new(lower(n.kids[0]), loc);
      case SourceKind::RefGet: return tgt::ref_get(lower(n.kids[0]), loc);
      case SourceKind::Rset:
        return tgt::comb(Combinator::Rset, {lower(n.kids[0]), lower(n.kids[1])}, loc);
      case SourceKind::App: return application(e);
      case SourceKind::Fun: {
        const bool pushes = n.param.kind == PatternKind::Name;
        if (pushes) bound_.push_back(n.param.name);
        TargetTerm body = lower(n.kids[0]);
        if (pushes) bound_.pop_back();
        return tgt::fun(n.param, std::move(body), loc);
      }
      case SourceKind::Let: {
        TargetTerm rhs = lower(n.kids[0]);
        bound_.push_back(n.text);
        TargetTerm body = lower(n.kids[1]);
        bound_.pop_back();
        return tgt::let(n.text, std::move(rhs), std::move(body), loc);
      }
      case SourceKind::Bracket:
      case SourceKind::Escape:
      case SourceKind::Csp:
      case SourceKind::Persist: break;
    }
    fail(DiagnosticKind::ParseError, "staging forms are not allowed in combinator programs", loc);
  }

  TargetTerm application(const SourceExpr& e) {
    std::vector<SourceExpr> args;
    SourceExpr head = e;
    while (head->kind == SourceKind::App) {
      args.push_back(head->kids[1]);
      head = head->kids[0];
    }
    std::reverse(args.begin(), args.end());

    auto c = combinator_head(head);
    if (!c) {
      TargetTerm fn = lower(head);
      for (const auto& a : args) fn = tgt::app(std::move(fn), lower(a), e->loc);
      return fn;
    }
    const auto arity = static_cast<std::size_t>(combinator_arity(*c));
    if (args.size() < arity) {
      fail(DiagnosticKind::ParseError,
           fmt::format("combinator '{}' expects {} argument(s) but got {}",
                       combinator_name(*c), arity, args.size()),
           head->loc);
    }
    std::vector<TargetTerm> lowered;
    for (std::size_t i = 0; i < arity; ++i) lowered.push_back(lower(args[i]));
    TargetTerm t = tgt::comb(*c, std::move(lowered), head->loc);
    for (std::size_t i = arity; i < args.size(); ++i) t = tgt::app(std::move(t), lower(args[i]), e->loc);
    return t;
  }
};

void validate(const SourceExpr& e, int level) {
  const auto& n = *e;
  switch (n.kind) {
    case SourceKind::Bracket:
      if (level != 0) fail(DiagnosticKind::ParseError, "nested bracket", n.loc);
      validate(n.kids[0], 1);
      return;
    case SourceKind::Escape:
      if (level != 1) fail(DiagnosticKind::ParseError, "escape at level 0", n.loc);
      validate(n.kids[0], 0);
      return;
    case SourceKind::Csp:
      if (level != 1) fail(DiagnosticKind::ParseError, "CSP at level 0", n.loc);
      validate(n.kids[0], 0);
      return;
    case SourceKind::Var:
    case SourceKind::Let:
      if (n.text.empty()) fail(DiagnosticKind::ParseError, "empty identifier", n.loc);
      break;
    case SourceKind::Fun:
      if (n.param.kind == PatternKind::UnitCode) {
        fail(DiagnosticKind::ParseError, "'(_ : unit cod)' is not a source pattern", n.loc);
      }
      if (n.param.kind == PatternKind::Name && n.param.name.empty()) {
        fail(DiagnosticKind::ParseError, "empty binder", n.loc);
      }
      break;
    case SourceKind::Persist:
      fail(DiagnosticKind::ParseError, "embedded values cannot appear in source programs", n.loc);
    default: break;
  }
  for (const auto& k : n.kids) validate(k, level);
}

}  // namespace

SourceExpr parse_source(std::string_view text) { return Parser(text, Mode::Source).parse_program(); }

SourceExpr parse_plain(std::string_view text) { return Parser(text, Mode::Plain).parse_program(); }

TargetTerm parse_target(std::string_view text) {
  return Lowering{}.run(Parser(text, Mode::Target).parse_program());
}

void validate_source(const SourceExpr& e) { validate(e, 0); }

bool uses_combinators(const SourceExpr& e) {
  for (const auto& name : free_vars(e)) {
    if (combinator_from_name(name)) return true;
  }
  return false;
}

}  // namespace polylet
