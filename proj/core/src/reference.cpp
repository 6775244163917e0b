#include "polylet/reference.hpp"

#include <fmt/format.h>

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "polylet/diagnostic.hpp"

namespace polylet {

namespace {

struct RVal;
using RPtr = std::shared_ptr<const RVal>;

struct RCell {
  RPtr contents;
};

struct REnvNode;
using REnv = std::shared_ptr<const REnvNode>;

struct RClosure {
  Pattern param;
  SourceExpr body;
  REnv env;
};

struct RList {
  std::vector<RPtr> items;  // head first
};
struct RPair {
  RPtr first, second;
};
struct RUnit {};

struct RVal {
  std::variant<RUnit, std::int64_t, std::string, RList, RPair, RClosure, std::shared_ptr<RCell>,
               SourceExpr>
      v;
};

// A level-0 binding holds a value, a level-1 binding the renamed binder.
struct REnvNode {
  std::string name;
  bool future = false;
  RPtr value;
  std::string renamed;
  REnv next;
};

RPtr mk(auto x) { return std::make_shared<const RVal>(RVal{std::move(x)}); }

std::string show(const RPtr& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RUnit>) {
          return "()";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return quote_string(x);
        } else if constexpr (std::is_same_v<T, RList>) {
          std::string out = "[";
          for (std::size_t i = 0; i < x.items.size(); ++i) {
            if (i) out += "; ";
            out += show(x.items[i]);
          }
          return out + "]";
        } else if constexpr (std::is_same_v<T, RPair>) {
          return "(" + show(x.first) + ", " + show(x.second) + ")";
        } else if constexpr (std::is_same_v<T, RClosure>) {
          return "<fun>";
        } else if constexpr (std::is_same_v<T, std::shared_ptr<RCell>>) {
          return "ref " + show(x->contents);
        } else {
          return "<code>";
        }
      },
      v->v);
}

class RefPersisted final : public Persisted {
 public:
  explicit RefPersisted(RPtr v) : v_(std::move(v)) {}
  std::string describe() const override { return show(v_); }
  const void* identity() const override {
    if (const auto* c = std::get_if<std::shared_ptr<RCell>>(&v_->v)) return c->get();
    if (std::holds_alternative<RClosure>(v_->v) || std::holds_alternative<SourceExpr>(v_->v)) {
      return v_.get();
    }
    return nullptr;
  }

 private:
  RPtr v_;
};

SourceExpr lift(const RPtr& v) {
  const auto& x = v->v;
  if (std::holds_alternative<RUnit>(x)) return src::unit();
  if (const auto* i = std::get_if<std::int64_t>(&x)) return src::int_lit(*i);
  if (const auto* s = std::get_if<std::string>(&x)) return src::str_lit(*s);
  if (const auto* l = std::get_if<RList>(&x)) {
    SourceExpr out = src::nil();
    for (auto it = l->items.rbegin(); it != l->items.rend(); ++it) out = src::cons(lift(*it), out);
    return out;
  }
  if (const auto* p = std::get_if<RPair>(&x)) return src::pair(lift(p->first), lift(p->second));
  return src::persist(std::make_shared<RefPersisted>(v));
}

[[noreturn]] void bad(const std::string& what) { fail(DiagnosticKind::RuntimeError, what); }

class Interp {
 public:
  RPtr eval(const SourceExpr& e, const REnv& env) {
    const auto& n = *e;
    switch (n.kind) {
      case SourceKind::Var: {
        const REnvNode* b = lookup(env, n.text);
        if (!b || b->future) fail(DiagnosticKind::UnboundVar, "unbound variable " + n.text, n.loc);
        return b->value;
      }
      case SourceKind::Int: return mk(n.number);
      case SourceKind::Str: return mk(n.text);
      case SourceKind::Nil: return mk(RList{});
      case SourceKind::Unit: return mk(RUnit{});
      case SourceKind::Add: {
        RPtr b = eval(n.kids[1], env);
        RPtr a = eval(n.kids[0], env);
        return mk(as_int(a) + as_int(b));
      }
      case SourceKind::Pair: {
        RPtr b = eval(n.kids[1], env);
        RPtr a = eval(n.kids[0], env);
        return mk(RPair{a, b});
      }
      case SourceKind::Cons: {
        RPtr tl = eval(n.kids[1], env);
        RPtr hd = eval(n.kids[0], env);
        const auto* l = std::get_if<RList>(&tl->v);
        if (!l) bad("'::' expects a list");
        RList out{{hd}};
        out.items.insert(out.items.end(), l->items.begin(), l->items.end());
        return mk(std::move(out));
      }
      case SourceKind::RefNew:
        return mk(std::make_shared<RCell>(RCell{eval(n.kids[0], env)}));
      case SourceKind::RefGet: return as_cell(eval(n.kids[0], env))->contents;
      case SourceKind::Rset: {
        RPtr v = eval(n.kids[1], env);
        auto cell = as_cell(eval(n.kids[0], env));
        const auto* l = std::get_if<RList>(&cell->contents->v);
        if (!l) bad("rset expects a cell holding a list");
        RList out{{v}};
        out.items.insert(out.items.end(), l->items.begin(), l->items.end());
        cell->contents = mk(std::move(out));
        return cell->contents;
      }
      case SourceKind::App: {
        RPtr arg = eval(n.kids[1], env);
        RPtr fn = eval(n.kids[0], env);
        const auto* c = std::get_if<RClosure>(&fn->v);
        if (!c) bad("cannot apply a non-function");
        REnv inner = c->env;
        if (c->param.kind == PatternKind::Name) inner = bind(inner, c->param.name, arg);
        return eval(c->body, inner);
      }
      case SourceKind::Fun: return mk(RClosure{n.param, n.kids[0], env});
      case SourceKind::Let: {
        RPtr rhs = eval(n.kids[0], env);
        return eval(n.kids[1], bind(env, n.text, rhs));
      }
      case SourceKind::Bracket: return mk(build(n.kids[0], env));
      default: break;
    }
    bad("staging form outside a bracket");
  }

  SourceExpr build(const SourceExpr& e, const REnv& env) {
    const auto& n = *e;
    switch (n.kind) {
      case SourceKind::Var: {
        const REnvNode* b = lookup(env, n.text);
        if (!b || !b->future) fail(DiagnosticKind::UnboundVar, "unbound variable " + n.text, n.loc);
        return src::var(b->renamed);
      }
      case SourceKind::Int: return src::int_lit(n.number);
      case SourceKind::Str: return src::str_lit(n.text);
      case SourceKind::Nil: return src::nil();
      case SourceKind::Unit: return src::unit();
      case SourceKind::Add: {
        auto [a, b] = build2(n, env);
        return src::add(a, b);
      }
      case SourceKind::Pair: {
        auto [a, b] = build2(n, env);
        return src::pair(a, b);
      }
      case SourceKind::Cons: {
        auto [a, b] = build2(n, env);
        return src::cons(a, b);
      }
      case SourceKind::RefNew: return src::ref_new(build(n.kids[0], env));
      case SourceKind::RefGet: return src::ref_get(build(n.kids[0], env));
      case SourceKind::Rset: {
        auto [a, b] = build2(n, env);
        return src::rset(a, b);
      }
      case SourceKind::App: {
        auto [a, b] = build2(n, env);
        return src::app(a, b);
      }
      case SourceKind::Fun: {
        if (n.param.kind != PatternKind::Name) return src::fun(n.param, build(n.kids[0], env));
        const std::string x = fresh("x");
        return src::fun(x, build(n.kids[0], bind_future(env, n.param.name, x)));
      }
      case SourceKind::Let: {
        const bool function_let = n.kids[0]->kind == SourceKind::Fun;
        if (function_let && !free_vars(n.kids[1]).count(n.text)) return build(n.kids[1], env);
        SourceExpr rhs = build(n.kids[0], env);
        const std::string t = fresh("t");
        return src::let(t, rhs, build(n.kids[1], bind_future(env, n.text, t)));
      }
      case SourceKind::Escape: {
        RPtr v = eval(n.kids[0], env);
        const auto* code = std::get_if<SourceExpr>(&v->v);
        if (!code) bad("escape of a non-code value");
        return *code;
      }
      case SourceKind::Csp: return lift(eval(n.kids[0], env));
      case SourceKind::Persist: return e;
      case SourceKind::Bracket: bad("nested bracket");
    }
    bad("malformed term");
  }

 private:
  int counter_ = 0;

  std::string fresh(const char* prefix) { return fmt::format("{}_{}", prefix, ++counter_); }

  std::pair<SourceExpr, SourceExpr> build2(const SourceNode& n, const REnv& env) {
    SourceExpr b = build(n.kids[1], env);
    SourceExpr a = build(n.kids[0], env);
    return {a, b};
  }

  static const REnvNode* lookup(const REnv& env, const std::string& name) {
    for (const REnvNode* p = env.get(); p; p = p->next.get()) {
      if (p->name == name) return p;
    }
    return nullptr;
  }
  static REnv bind(REnv env, const std::string& name, RPtr v) {
    return std::make_shared<const REnvNode>(REnvNode{name, false, std::move(v), {}, std::move(env)});
  }
  static REnv bind_future(REnv env, const std::string& name, const std::string& renamed) {
    return std::make_shared<const REnvNode>(REnvNode{name, true, nullptr, renamed, std::move(env)});
  }
  static std::int64_t as_int(const RPtr& v) {
    const auto* i = std::get_if<std::int64_t>(&v->v);
    if (!i) bad("'+' expects an int");
    return *i;
  }
  static std::shared_ptr<RCell> as_cell(const RPtr& v) {
    const auto* c = std::get_if<std::shared_ptr<RCell>>(&v->v);
    if (!c) bad("expected a reference cell");
    return *c;
  }
};

}  // namespace

ReferenceOutcome reference_eval(const SourceExpr& e) {
  Interp interp;
  RPtr v = interp.eval(e, nullptr);
  ReferenceOutcome out;
  out.shown = show(v);
  if (const auto* code = std::get_if<SourceExpr>(&v->v)) {
    out.is_code = true;
    out.code = *code;
  }
  return out;
}

bool PersistedMatcher::operator()(const Persisted& a, const Persisted& b) {
  if (a.describe() != b.describe()) return false;
  const void* x = a.identity();
  const void* y = b.identity();
  if (!x && !y) return true;
  if (!x || !y) return false;
  auto f = forward_.find(x);
  auto g = backward_.find(y);
  if (f == forward_.end() && g == backward_.end()) {
    forward_[x] = y;
    backward_[y] = x;
    return true;
  }
  return f != forward_.end() && g != backward_.end() && f->second == y && g->second == x;
}

}  // namespace polylet
