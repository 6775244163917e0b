#include "polylet/ast.hpp"

#include <fmt/format.h>

#include <array>
#include <type_traits>
#include <utility>

namespace polylet {

namespace {

template <typename Node, typename Kind>
std::shared_ptr<const Node> make_node(Kind kind, SourceLoc loc,
                                      std::vector<std::shared_ptr<const Node>> kids = {}) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->loc = loc;
  n->kids = std::move(kids);
  return n;
}

}  // namespace

namespace src {

SourceExpr var(std::string name, SourceLoc loc) {
  auto n = std::make_shared<SourceNode>();
  n->kind = SourceKind::Var;
  n->text = std::move(name);
  n->loc = loc;
  return n;
}

SourceExpr int_lit(std::int64_t value, SourceLoc loc) {
  auto n = std::make_shared<SourceNode>();
  n->kind = SourceKind::Int;
  n->number = value;
  n->loc = loc;
  return n;
}

SourceExpr str_lit(std::string value, SourceLoc loc) {
  auto n = std::make_shared<SourceNode>();
  n->kind = SourceKind::Str;
  n->text = std::move(value);
  n->loc = loc;
  return n;
}

SourceExpr nil(SourceLoc loc) { return make_node<SourceNode>(SourceKind::Nil, loc); }
SourceExpr unit(SourceLoc loc) { return make_node<SourceNode>(SourceKind::Unit, loc); }

SourceExpr add(SourceExpr a, SourceExpr b, SourceLoc loc) {
  return make_node<SourceNode>(SourceKind::Add, loc, {std::move(a), std::move(b)});
}
SourceExpr pair(SourceExpr a, SourceExpr b, SourceLoc loc) {
  return make_node<SourceNode>(SourceKind::Pair, loc, {std::move(a), std::move(b)});
}
SourceExpr cons(SourceExpr head, SourceExpr tail, SourceLoc loc) {
  return make_node<SourceNode>(SourceKind::Cons, loc, {std::move(head), std::move(tail)});
}
SourceExpr ref_new(SourceExpr init, SourceLoc loc) {
  return make_node<SourceNode>(SourceKind::RefNew, loc, {std::move(init)});
}
SourceExpr ref_get(SourceExpr cell, SourceLoc loc) {
  return make_node<SourceNode>(SourceKind::RefGet, loc, {std::move(cell)});
}
SourceExpr rset(SourceExpr cell, SourceExpr value, SourceLoc loc) {
  return make_node<SourceNode>(SourceKind::Rset, loc, {std::move(cell), std::move(value)});
}
SourceExpr app(SourceExpr fn, SourceExpr arg, SourceLoc loc) {
  return make_node<SourceNode>(SourceKind::App, loc, {std::move(fn), std::move(arg)});
}

SourceExpr fun(Pattern param, SourceExpr body, SourceLoc loc) {
  auto n = std::make_shared<SourceNode>();
  n->kind = SourceKind::Fun;
  n->param = std::move(param);
  n->kids = {std::move(body)};
  n->loc = loc;
  return n;
}

SourceExpr fun(std::string param, SourceExpr body, SourceLoc loc) {
  return fun(Pattern::named(std::move(param)), std::move(body), loc);
}

SourceExpr let(std::string name, SourceExpr rhs, SourceExpr body, SourceLoc loc) {
  auto n = std::make_shared<SourceNode>();
  n->kind = SourceKind::Let;
  n->text = std::move(name);
  n->kids = {std::move(rhs), std::move(body)};
  n->loc = loc;
  return n;
}

SourceExpr bracket(SourceExpr body, SourceLoc loc) {
  return make_node<SourceNode>(SourceKind::Bracket, loc, {std::move(body)});
}
SourceExpr escape(SourceExpr body, SourceLoc loc) {
  return make_node<SourceNode>(SourceKind::Escape, loc, {std::move(body)});
}
SourceExpr csp(SourceExpr body, SourceLoc loc) {
  return make_node<SourceNode>(SourceKind::Csp, loc, {std::move(body)});
}

SourceExpr persist(PersistedPtr value, SourceLoc loc) {
  auto n = std::make_shared<SourceNode>();
  n->kind = SourceKind::Persist;
  n->persisted = std::move(value);
  n->loc = loc;
  return n;
}

}  // namespace src

// ---------------------------------------------------------------------------

namespace {

struct CombinatorInfo {
  Combinator comb;
  std::string_view name;
  int arity;
};

constexpr std::array<CombinatorInfo, 16> kCombinators{{
    {Combinator::Int, "int", 1},
    {Combinator::Str, "str", 1},
    {Combinator::Add, "add", 2},
    {Combinator::Lam, "lam", 1},
    {Combinator::App, "app", 2},
    {Combinator::Pair, "pair", 2},
    {Combinator::Nil, "nil", 0},
    {Combinator::Cons, "cons", 2},
    {Combinator::Ref, "ref_", 1},
    {Combinator::Rget, "rget", 1},
    {Combinator::Rset, "rset", 2},
    {Combinator::Csp, "csp", 1},
    {Combinator::NewScope, "new_scope", 1},
    {Combinator::Genlet, "genlet", 2},
    {Combinator::NewFunscope, "new_funscope", 1},
    {Combinator::Genletfun, "genletfun", 2},
}};

const CombinatorInfo& info(Combinator c) { return kCombinators[static_cast<std::size_t>(c)]; }

}  // namespace

std::string_view combinator_name(Combinator c) { return info(c).name; }
int combinator_arity(Combinator c) { return info(c).arity; }

std::optional<Combinator> combinator_from_name(std::string_view name) {
  for (const auto& entry : kCombinators) {
    if (entry.name == name) return entry.comb;
  }
  return std::nullopt;
}

namespace tgt {

TargetTerm var(std::string name, SourceLoc loc) {
  auto n = std::make_shared<TargetNode>();
  n->kind = TargetKind::Var;
  n->text = std::move(name);
  n->loc = loc;
  return n;
}

TargetTerm int_lit(std::int64_t value, SourceLoc loc) {
  auto n = std::make_shared<TargetNode>();
  n->kind = TargetKind::Int;
  n->number = value;
  n->loc = loc;
  return n;
}

TargetTerm str_lit(std::string value, SourceLoc loc) {
  auto n = std::make_shared<TargetNode>();
  n->kind = TargetKind::Str;
  n->text = std::move(value);
  n->loc = loc;
  return n;
}

TargetTerm nil(SourceLoc loc) { return make_node<TargetNode>(TargetKind::Nil, loc); }
TargetTerm unit(SourceLoc loc) { return make_node<TargetNode>(TargetKind::Unit, loc); }

TargetTerm add(TargetTerm a, TargetTerm b, SourceLoc loc) {
  return make_node<TargetNode>(TargetKind::Add, loc, {std::move(a), std::move(b)});
}
TargetTerm pair(TargetTerm a, TargetTerm b, SourceLoc loc) {
  return make_node<TargetNode>(TargetKind::Pair, loc, {std::move(a), std::move(b)});
}
TargetTerm cons(TargetTerm head, TargetTerm tail, SourceLoc loc) {
  return make_node<TargetNode>(TargetKind::Cons, loc, {std::move(head), std::move(tail)});
}
TargetTerm ref_new(TargetTerm init, SourceLoc loc) {
  return make_node<TargetNode>(TargetKind::RefNew, loc, {std::move(init)});
}
TargetTerm ref_get(TargetTerm cell, SourceLoc loc) {
  return make_node<TargetNode>(TargetKind::RefGet, loc, {std::move(cell)});
}
TargetTerm rset(TargetTerm cell, TargetTerm value, SourceLoc loc) {
  return make_node<TargetNode>(TargetKind::Rset, loc, {std::move(cell), std::move(value)});
}
TargetTerm app(TargetTerm fn, TargetTerm arg, SourceLoc loc) {
  return make_node<TargetNode>(TargetKind::App, loc, {std::move(fn), std::move(arg)});
}

TargetTerm fun(Pattern param, TargetTerm body, SourceLoc loc) {
  auto n = std::make_shared<TargetNode>();
  n->kind = TargetKind::Fun;
  n->param = std::move(param);
  n->kids = {std::move(body)};
  n->loc = loc;
  return n;
}

TargetTerm fun(std::string param, TargetTerm body, SourceLoc loc) {
  return fun(Pattern::named(std::move(param)), std::move(body), loc);
}

TargetTerm let(std::string name, TargetTerm rhs, TargetTerm body, SourceLoc loc) {
  auto n = std::make_shared<TargetNode>();
  n->kind = TargetKind::Let;
  n->text = std::move(name);
  n->kids = {std::move(rhs), std::move(body)};
  n->loc = loc;
  return n;
}

TargetTerm comb(Combinator c, std::vector<TargetTerm> args, SourceLoc loc) {
  auto n = std::make_shared<TargetNode>();
  n->kind = TargetKind::Comb;
  n->comb = c;
  n->kids = std::move(args);
  n->loc = loc;
  return n;
}

TargetTerm persist(PersistedPtr value, SourceLoc loc) {
  auto n = std::make_shared<TargetNode>();
  n->kind = TargetKind::Persist;
  n->persisted = std::move(value);
  n->loc = loc;
  return n;
}

}  // namespace tgt

// ---------------------------------------------------------------------------
// Traversals shared by both languages. Binding structure is identical: Fun
// binds its pattern in the body, Let binds its name in the body only.

namespace {

template <typename Ptr>
struct Shape;

template <>
struct Shape<SourceExpr> {
  static bool is_var(const SourceNode& n) { return n.kind == SourceKind::Var; }
  static bool is_fun(const SourceNode& n) { return n.kind == SourceKind::Fun; }
  static bool is_let(const SourceNode& n) { return n.kind == SourceKind::Let; }
  static bool is_persist(const SourceNode& n) { return n.kind == SourceKind::Persist; }
  static bool same_head(const SourceNode&, const SourceNode&) { return true; }
};

template <>
struct Shape<TargetTerm> {
  static bool is_var(const TargetNode& n) { return n.kind == TargetKind::Var; }
  static bool is_fun(const TargetNode& n) { return n.kind == TargetKind::Fun; }
  static bool is_let(const TargetNode& n) { return n.kind == TargetKind::Let; }
  static bool is_persist(const TargetNode& n) { return n.kind == TargetKind::Persist; }
  static bool same_head(const TargetNode& a, const TargetNode& b) {
    return a.kind != TargetKind::Comb || a.comb == b.comb;
  }
};

template <typename Ptr>
void collect_free(const Ptr& e, std::vector<std::string>& bound, std::set<std::string>& out) {
  using S = Shape<Ptr>;
  const auto& n = *e;
  if (S::is_var(n)) {
    for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
      if (*it == n.text) return;
    }
    out.insert(n.text);
    return;
  }
  if (S::is_fun(n)) {
    const bool pushes = n.param.kind == PatternKind::Name;
    if (pushes) bound.push_back(n.param.name);
    collect_free(n.kids[0], bound, out);
    if (pushes) bound.pop_back();
    return;
  }
  if (S::is_let(n)) {
    collect_free(n.kids[0], bound, out);
    bound.push_back(n.text);
    collect_free(n.kids[1], bound, out);
    bound.pop_back();
    return;
  }
  for (const auto& k : n.kids) collect_free(k, bound, out);
}

// Binder correspondence: each frame pairs the left and right names bound at
// that depth; a variable pair matches if both resolve to the same depth.
struct BinderStack {
  std::vector<std::pair<std::string, std::string>> frames;

  static constexpr long kFree = -1;

  long depth_left(const std::string& name) const {
    for (long i = static_cast<long>(frames.size()) - 1; i >= 0; --i) {
      if (frames[static_cast<std::size_t>(i)].first == name) return i;
    }
    return kFree;
  }
  long depth_right(const std::string& name) const {
    for (long i = static_cast<long>(frames.size()) - 1; i >= 0; --i) {
      if (frames[static_cast<std::size_t>(i)].second == name) return i;
    }
    return kFree;
  }
};

template <typename Ptr>
bool alpha_rec(const Ptr& a, const Ptr& b, BinderStack& env, const PersistedEq& peq) {
  using S = Shape<Ptr>;
  if (a->kind != b->kind || !S::same_head(*a, *b)) return false;
  if (S::is_var(*a)) {
    const long da = env.depth_left(a->text);
    const long db = env.depth_right(b->text);
    if (da != db) return false;
    return da != BinderStack::kFree || a->text == b->text;
  }
  if (S::is_persist(*a)) {
    if (!a->persisted || !b->persisted) return a->persisted == b->persisted;
    return peq(*a->persisted, *b->persisted);
  }
  if (S::is_fun(*a)) {
    if (a->param.kind != b->param.kind) return false;
    if (a->param.kind != PatternKind::Name) return alpha_rec(a->kids[0], b->kids[0], env, peq);
    env.frames.emplace_back(a->param.name, b->param.name);
    const bool ok = alpha_rec(a->kids[0], b->kids[0], env, peq);
    env.frames.pop_back();
    return ok;
  }
  if (S::is_let(*a)) {
    if (!alpha_rec(a->kids[0], b->kids[0], env, peq)) return false;
    env.frames.emplace_back(a->text, b->text);
    const bool ok = alpha_rec(a->kids[1], b->kids[1], env, peq);
    env.frames.pop_back();
    return ok;
  }
  if (a->number != b->number || a->text != b->text) return false;
  if (a->kids.size() != b->kids.size()) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i) {
    if (!alpha_rec(a->kids[i], b->kids[i], env, peq)) return false;
  }
  return true;
}

}  // namespace

std::set<std::string> free_vars(const SourceExpr& e) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(e, bound, out);
  return out;
}

std::set<std::string> free_vars(const TargetTerm& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(t, bound, out);
  return out;
}

bool same_persisted(const Persisted& a, const Persisted& b) {
  if (a.identity() != nullptr || b.identity() != nullptr) return a.identity() == b.identity();
  return a.describe() == b.describe();
}

bool alpha_equal(const SourceExpr& a, const SourceExpr& b, const PersistedEq& persisted_eq) {
  BinderStack env;
  return alpha_rec(a, b, env, persisted_eq);
}

bool alpha_equal(const TargetTerm& a, const TargetTerm& b, const PersistedEq& persisted_eq) {
  BinderStack env;
  return alpha_rec(a, b, env, persisted_eq);
}

// ---------------------------------------------------------------------------
// Printing. Add, Cons and Pair always carry their own parentheses; binding
// forms are parenthesized whenever they are not in a tail position.

std::string quote_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string pretty(const Pattern& p) {
  switch (p.kind) {
    case PatternKind::Name: return p.name;
    case PatternKind::Wildcard: return "_";
    case PatternKind::Unit: return "()";
    case PatternKind::UnitCode: return "(_ : unit cod)";
  }
  return "?";
}

namespace {

enum class Ctx { Tail, Operand, Arg, Head };

std::string paren(std::string s) { return "(" + std::move(s) + ")"; }

std::string print(const SourceExpr& e, Ctx ctx);

std::string print_source_inner(const SourceExpr& e) {
  const auto& n = *e;
  switch (n.kind) {
    case SourceKind::Var: return n.text;
    case SourceKind::Int: return std::to_string(n.number);
    case SourceKind::Str: return quote_string(n.text);
    case SourceKind::Nil: return "[]";
    case SourceKind::Unit: return "()";
    case SourceKind::Add:
      return paren(print(n.kids[0], Ctx::Operand) + " + " + print(n.kids[1], Ctx::Operand));
    case SourceKind::Cons:
      return paren(print(n.kids[0], Ctx::Operand) + " :: " + print(n.kids[1], Ctx::Operand));
    case SourceKind::Pair:
      return paren(print(n.kids[0], Ctx::Operand) + ", " + print(n.kids[1], Ctx::Operand));
    case SourceKind::RefNew: return "ref " + print(n.kids[0], Ctx::Arg);
    case SourceKind::RefGet: return "!" + print(n.kids[0], Ctx::Arg);
    case SourceKind::Rset:
      return "rset " + print(n.kids[0], Ctx::Arg) + " " + print(n.kids[1], Ctx::Arg);
    case SourceKind::App: return print(n.kids[0], Ctx::Head) + " " + print(n.kids[1], Ctx::Arg);
    case SourceKind::Fun: return "fun " + pretty(n.param) + " -> " + print(n.kids[0], Ctx::Tail);
    case SourceKind::Let:
      return "let " + n.text + " = " + print(n.kids[0], Ctx::Tail) + " in " +
             print(n.kids[1], Ctx::Tail);
    case SourceKind::Bracket: return ".<" + print(n.kids[0], Ctx::Tail) + ">.";
    case SourceKind::Escape: return ".~" + print(n.kids[0], Ctx::Arg);
    case SourceKind::Csp: return "%" + print(n.kids[0], Ctx::Arg);
    case SourceKind::Persist:
      return "(* CSP *) " + (n.persisted ? n.persisted->describe() : std::string("?"));
  }
  return "?";
}

bool needs_paren(SourceKind k, Ctx ctx) {
  switch (ctx) {
    case Ctx::Tail: return false;
    case Ctx::Operand: return k == SourceKind::Fun || k == SourceKind::Let;
    case Ctx::Arg:
      return k == SourceKind::Fun || k == SourceKind::Let || k == SourceKind::App ||
             k == SourceKind::RefNew || k == SourceKind::Rset || k == SourceKind::Persist;
    case Ctx::Head:
      return k == SourceKind::Fun || k == SourceKind::Let || k == SourceKind::RefNew ||
             k == SourceKind::Rset || k == SourceKind::Persist;
  }
  return false;
}

std::string print(const SourceExpr& e, Ctx ctx) {
  std::string s = print_source_inner(e);
  if (e->kind == SourceKind::Int && e->number < 0 && ctx != Ctx::Tail) return paren(std::move(s));
  return needs_paren(e->kind, ctx) ? paren(std::move(s)) : s;
}

std::string print(const TargetTerm& t, Ctx ctx);

std::string print_target_inner(const TargetTerm& t) {
  const auto& n = *t;
  switch (n.kind) {
    case TargetKind::Var: return n.text;
    case TargetKind::Int: return std::to_string(n.number);
    case TargetKind::Str: return quote_string(n.text);
    case TargetKind::Nil: return "[]";
    case TargetKind::Unit: return "()";
    case TargetKind::Add:
      return paren(print(n.kids[0], Ctx::Operand) + " + " + print(n.kids[1], Ctx::Operand));
    case TargetKind::Cons:
      return paren(print(n.kids[0], Ctx::Operand) + " :: " + print(n.kids[1], Ctx::Operand));
    case TargetKind::Pair:
      return paren(print(n.kids[0], Ctx::Operand) + ", " + print(n.kids[1], Ctx::Operand));
    case TargetKind::RefNew: return "ref " + print(n.kids[0], Ctx::Arg);
    case TargetKind::RefGet: return "!" + print(n.kids[0], Ctx::Arg);
    case TargetKind::Rset:
      // `rset` names the combinator in target syntax; the host primitive is
      // printed qualified.
      return "Host.rset " + print(n.kids[0], Ctx::Arg) + " " + print(n.kids[1], Ctx::Arg);
    case TargetKind::App: return print(n.kids[0], Ctx::Head) + " " + print(n.kids[1], Ctx::Arg);
    case TargetKind::Fun: return "fun " + pretty(n.param) + " -> " + print(n.kids[0], Ctx::Tail);
    case TargetKind::Let:
      return "let " + n.text + " = " + print(n.kids[0], Ctx::Tail) + " in " +
             print(n.kids[1], Ctx::Tail);
    case TargetKind::Comb: {
      std::string s(combinator_name(n.comb));
      for (const auto& k : n.kids) s += " " + print(k, Ctx::Arg);
      return s;
    }
    case TargetKind::Persist:
      return "(* CSP *) " + (n.persisted ? n.persisted->describe() : std::string("?"));
  }
  return "?";
}

bool needs_paren(const TargetNode& n, Ctx ctx) {
  const TargetKind k = n.kind;
  const bool applied_comb = k == TargetKind::Comb && !n.kids.empty();
  switch (ctx) {
    case Ctx::Tail: return false;
    case Ctx::Operand: return k == TargetKind::Fun || k == TargetKind::Let;
    case Ctx::Arg:
      return k == TargetKind::Fun || k == TargetKind::Let || k == TargetKind::App ||
             k == TargetKind::RefNew || k == TargetKind::Rset || k == TargetKind::Persist ||
             applied_comb;
    case Ctx::Head:
      return k == TargetKind::Fun || k == TargetKind::Let || k == TargetKind::RefNew ||
             k == TargetKind::Rset || k == TargetKind::Persist || applied_comb;
  }
  return false;
}

std::string print(const TargetTerm& t, Ctx ctx) {
  std::string s = print_target_inner(t);
  if (t->kind == TargetKind::Int && t->number < 0 && ctx != Ctx::Tail) return paren(std::move(s));
  return needs_paren(*t, ctx) ? paren(std::move(s)) : s;
}

}  // namespace

std::string pretty(const SourceExpr& e) { return print(e, Ctx::Tail); }
std::string pretty(const TargetTerm& t) { return print(t, Ctx::Tail); }

bool contains_staging(const SourceExpr& e) {
  switch (e->kind) {
    case SourceKind::Bracket:
    case SourceKind::Escape:
    case SourceKind::Csp: return true;
    default: break;
  }
  for (const auto& k : e->kids) {
    if (contains_staging(k)) return true;
  }
  return false;
}

bool contains_bracket(const SourceExpr& e) {
  if (e->kind == SourceKind::Bracket) return true;
  for (const auto& k : e->kids) {
    if (contains_bracket(k)) return true;
  }
  return false;
}

std::size_t node_count(const SourceExpr& e) {
  std::size_t n = 1;
  for (const auto& k : e->kids) n += node_count(k);
  return n;
}

}  // namespace polylet
