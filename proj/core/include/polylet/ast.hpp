#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "polylet/diagnostic.hpp"

namespace polylet {

/// A present-stage value embedded in generated code by cross-stage
/// persistence. The AST only needs to render and compare it; the engine
/// owns the concrete representation.
class Persisted {
 public:
  virtual ~Persisted() = default;

  /// Structural rendering, e.g. `ref [1]` or `<fun>`.
  virtual std::string describe() const = 0;

  /// Address of the mutable object behind the value, or nullptr when the
  /// value has no observable identity.
  virtual const void* identity() const = 0;
};
using PersistedPtr = std::shared_ptr<const Persisted>;

enum class PatternKind : std::uint8_t {
  Name,
  Wildcard,  // `_`
  Unit,      // `()`
  UnitCode,  // target only: `(_ : unit cod)`, the image of a quoted `()` binder
};

struct Pattern {
  PatternKind kind = PatternKind::Name;
  std::string name;

  static Pattern named(std::string n) { return {PatternKind::Name, std::move(n)}; }
  static Pattern wildcard() { return {PatternKind::Wildcard, {}}; }
  static Pattern unit() { return {PatternKind::Unit, {}}; }
  static Pattern unit_code() { return {PatternKind::UnitCode, {}}; }

  bool binds(std::string_view n) const { return kind == PatternKind::Name && name == n; }

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

// ---------------------------------------------------------------------------
// Source language: two-stage ML subset with brackets, escapes and CSP.

enum class SourceKind : std::uint8_t {
  Var,
  Int,
  Str,
  Nil,
  Unit,
  Add,
  Pair,
  Cons,
  RefNew,
  RefGet,
  Rset,
  App,
  Fun,
  Let,
  Bracket,
  Escape,
  Csp,
  Persist,  // only produced by the quotation backend, never parsed
};

struct SourceNode;
using SourceExpr = std::shared_ptr<const SourceNode>;

struct SourceNode {
  SourceKind kind = SourceKind::Unit;
  std::string text;  // variable name, let binder or string literal
  std::int64_t number = 0;
  Pattern param;  // Fun
  std::vector<SourceExpr> kids;
  PersistedPtr persisted;
  SourceLoc loc;
};

namespace src {
SourceExpr var(std::string name, SourceLoc loc = {});
SourceExpr int_lit(std::int64_t value, SourceLoc loc = {});
SourceExpr str_lit(std::string value, SourceLoc loc = {});
SourceExpr nil(SourceLoc loc = {});
SourceExpr unit(SourceLoc loc = {});
SourceExpr add(SourceExpr a, SourceExpr b, SourceLoc loc = {});
SourceExpr pair(SourceExpr a, SourceExpr b, SourceLoc loc = {});
SourceExpr cons(SourceExpr head, SourceExpr tail, SourceLoc loc = {});
SourceExpr ref_new(SourceExpr init, SourceLoc loc = {});
SourceExpr ref_get(SourceExpr cell, SourceLoc loc = {});
SourceExpr rset(SourceExpr cell, SourceExpr value, SourceLoc loc = {});
SourceExpr app(SourceExpr fn, SourceExpr arg, SourceLoc loc = {});
SourceExpr fun(Pattern param, SourceExpr body, SourceLoc loc = {});
SourceExpr fun(std::string param, SourceExpr body, SourceLoc loc = {});
SourceExpr let(std::string name, SourceExpr rhs, SourceExpr body, SourceLoc loc = {});
SourceExpr bracket(SourceExpr body, SourceLoc loc = {});
SourceExpr escape(SourceExpr body, SourceLoc loc = {});
SourceExpr csp(SourceExpr body, SourceLoc loc = {});
SourceExpr persist(PersistedPtr value, SourceLoc loc = {});
}  // namespace src

// ---------------------------------------------------------------------------
// Target language: plain lambda terms over code-generating combinators.

enum class Combinator : std::uint8_t {
  Int,
  Str,
  Add,
  Lam,
  App,
  Pair,
  Nil,
  Cons,
  Ref,
  Rget,
  Rset,
  Csp,
  NewScope,
  Genlet,
  NewFunscope,
  Genletfun,
};

std::string_view combinator_name(Combinator c);
std::optional<Combinator> combinator_from_name(std::string_view name);
int combinator_arity(Combinator c);

enum class TargetKind : std::uint8_t {
  Var,
  Int,
  Str,
  Nil,
  Unit,
  Add,
  Pair,
  Cons,
  RefNew,
  RefGet,
  Rset,
  App,
  Fun,
  Let,
  Comb,  // saturated combinator application
  Persist,
};

struct TargetNode;
using TargetTerm = std::shared_ptr<const TargetNode>;

struct TargetNode {
  TargetKind kind = TargetKind::Unit;
  std::string text;
  std::int64_t number = 0;
  Pattern param;
  Combinator comb = Combinator::Nil;
  std::vector<TargetTerm> kids;
  PersistedPtr persisted;
  SourceLoc loc;
};

namespace tgt {
TargetTerm var(std::string name, SourceLoc loc = {});
TargetTerm int_lit(std::int64_t value, SourceLoc loc = {});
TargetTerm str_lit(std::string value, SourceLoc loc = {});
TargetTerm nil(SourceLoc loc = {});
TargetTerm unit(SourceLoc loc = {});
TargetTerm add(TargetTerm a, TargetTerm b, SourceLoc loc = {});
TargetTerm pair(TargetTerm a, TargetTerm b, SourceLoc loc = {});
TargetTerm cons(TargetTerm head, TargetTerm tail, SourceLoc loc = {});
TargetTerm ref_new(TargetTerm init, SourceLoc loc = {});
TargetTerm ref_get(TargetTerm cell, SourceLoc loc = {});
TargetTerm rset(TargetTerm cell, TargetTerm value, SourceLoc loc = {});
TargetTerm app(TargetTerm fn, TargetTerm arg, SourceLoc loc = {});
TargetTerm fun(Pattern param, TargetTerm body, SourceLoc loc = {});
TargetTerm fun(std::string param, TargetTerm body, SourceLoc loc = {});
TargetTerm let(std::string name, TargetTerm rhs, TargetTerm body, SourceLoc loc = {});
TargetTerm comb(Combinator c, std::vector<TargetTerm> args, SourceLoc loc = {});
TargetTerm persist(PersistedPtr value, SourceLoc loc = {});
}  // namespace tgt

// ---------------------------------------------------------------------------

std::set<std::string> free_vars(const SourceExpr& e);
std::set<std::string> free_vars(const TargetTerm& t);

/// Decides equality of embedded present-stage values during alpha_equal.
using PersistedEq = std::function<bool(const Persisted&, const Persisted&)>;

/// Identity for mutable values, structural rendering otherwise.
bool same_persisted(const Persisted& a, const Persisted& b);

bool alpha_equal(const SourceExpr& a, const SourceExpr& b,
                 const PersistedEq& persisted_eq = same_persisted);
bool alpha_equal(const TargetTerm& a, const TargetTerm& b,
                 const PersistedEq& persisted_eq = same_persisted);

std::string pretty(const SourceExpr& e);
std::string pretty(const TargetTerm& t);
std::string pretty(const Pattern& p);

/// Escapes a string literal the way OCaml's String.escaped does, with quotes.
std::string quote_string(std::string_view s);

bool contains_staging(const SourceExpr& e);
bool contains_bracket(const SourceExpr& e);
std::size_t node_count(const SourceExpr& e);

}  // namespace polylet
