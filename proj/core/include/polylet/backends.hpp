#pragma once

#include <memory>
#include <string>
#include <vector>

#include "polylet/ast.hpp"
#include "polylet/engine.hpp"
#include "polylet/value.hpp"

namespace polylet {

struct EvalCode;
using EvalCodePtr = std::shared_ptr<const EvalCode>;

/// A delayed computation built by the eval backend. Forcing walks the tree.
struct EvalCode {
  enum class Kind : std::uint8_t { Const, Add, Pair, Cons, Ref, Rget, Rset, App, Lam, DynRef, Let };
  Kind kind = Kind::Const;
  Value constant;
  int var = 0;  // Lam, DynRef, Let
  std::vector<EvalCodePtr> kids;
};

struct CodeValue {
  BackendId backend = BackendId::Eval;
  std::string text;     // String
  bool open = false;    // String: text is a `fun`/`let` and needs parentheses as an operand
  SourceExpr tree;      // Quote
  EvalCodePtr delayed;  // Eval
};

Value make_string_code(std::string text, bool open = false);
Value make_quote_code(SourceExpr tree);
Value make_eval_code(EvalCodePtr delayed);

const CodeValue& as_code(const Value& v, BackendId expected);

/// Runs eval-backend code. Each force re-executes the code.
Value force_code(Session& s, const Value& code);

/// ScopeExtrusion unless the rebuilt tree is closed.
void check_scope(const SourceExpr& tree);

/// Applies check_scope to every quoted code value inside `v`.
void check_scopes_in(const Value& v);

/// Renders a ground value as plain syntax; CspSerialization otherwise.
std::string serialize_ground(const Value& v);

/// Evaluates `t` with the chosen backend. Quote results are scope-checked.
Value generate(Session& s, const TargetTerm& t, EnvPtr env = nullptr);

/// Renders generated code for display: string text, pretty-printed tree, or
/// `<code>` for delayed code. Other values go through show_value with any
/// nested code rendered the same way.
std::string show_generated(const Value& v);

}  // namespace polylet
