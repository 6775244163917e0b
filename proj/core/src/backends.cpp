#include "polylet/backends.hpp"

#include <fmt/format.h>

#include "polylet/diagnostic.hpp"

namespace polylet {

Value make_string_code(std::string text, bool open) {
  auto c = std::make_shared<CodeValue>();
  c->backend = BackendId::String;
  c->text = std::move(text);
  c->open = open;
  return Value(CodePtr(std::move(c)));
}

Value make_quote_code(SourceExpr tree) {
  auto c = std::make_shared<CodeValue>();
  c->backend = BackendId::Quote;
  c->tree = std::move(tree);
  return Value(CodePtr(std::move(c)));
}

Value make_eval_code(EvalCodePtr delayed) {
  auto c = std::make_shared<CodeValue>();
  c->backend = BackendId::Eval;
  c->delayed = std::move(delayed);
  return Value(CodePtr(std::move(c)));
}

const CodeValue& as_code(const Value& v, BackendId expected) {
  const auto* c = v.get<CodePtr>();
  if (!c) {
    fail(DiagnosticKind::RuntimeError, "expected a code value, got " + show_value(v));
  }
  if ((*c)->backend != expected) {
    fail(DiagnosticKind::RuntimeError,
         fmt::format("code value of the {} backend used with the {} backend",
                     to_string((*c)->backend), to_string(expected)));
  }
  return **c;
}

void check_scope(const SourceExpr& tree) {
  const auto free = free_vars(tree);
  if (free.empty()) return;
  std::string names;
  for (const auto& n : free) names += (names.empty() ? "" : ", ") + n;
  fail(DiagnosticKind::ScopeExtrusion,
       fmt::format("generated code has unbound variable(s) {}: {}", names, pretty(tree)));
}

void check_scopes_in(const Value& v) {
  switch (v.tag()) {
    case ValueTag::Code: {
      const auto& c = **v.get<CodePtr>();
      if (c.backend == BackendId::Quote) check_scope(c.tree);
      return;
    }
    case ValueTag::Pair: {
      const auto& p = **v.get<PairPtr>();
      check_scopes_in(p.first);
      check_scopes_in(p.second);
      return;
    }
    case ValueTag::List:
      for (const auto& item : list_items(*v.get<ListV>())) check_scopes_in(item);
      return;
    default: return;
  }
}

std::string serialize_ground(const Value& v) {
  if (!is_ground(v)) {
    fail(DiagnosticKind::CspSerialization,
         fmt::format("cannot serialize the {} value {} into generated text", to_string(v.tag()),
                     show_value(v)));
  }
  if (const auto* i = v.get<std::int64_t>(); i && *i < 0) return fmt::format("({})", *i);
  return pretty(ground_to_source(v));
}

namespace {

EvalCodePtr node(EvalCode::Kind kind, std::vector<EvalCodePtr> kids = {}, int var = 0) {
  auto n = std::make_shared<EvalCode>();
  n->kind = kind;
  n->kids = std::move(kids);
  n->var = var;
  return n;
}

EvalCodePtr constant(Value v) {
  auto n = std::make_shared<EvalCode>();
  n->kind = EvalCode::Kind::Const;
  n->constant = std::move(v);
  return n;
}

Value force(Session& s, const EvalCodePtr& code);

Value force_lam(Session& s, const EvalCodePtr& code) {
  const DynEnv denv = s.denv_get();
  const int var = code->var;
  const EvalCodePtr body = code->kids[0];
  return make_native("<generated fun>", [denv, var, body](Machine& m, const Value& arg) {
    Session& session = m.session();
    m.ret(session.dlet(denv, var, arg, [&] { return force(session, body); }));
  });
}

Value force(Session& s, const EvalCodePtr& code) {
  using K = EvalCode::Kind;
  const auto& k = code->kids;
  switch (code->kind) {
    case K::Const: return code->constant;
    case K::DynRef: return s.dref(code->var);
    case K::Add: {
      Value b = force(s, k[1]);
      Value a = force(s, k[0]);
      const auto* x = a.get<std::int64_t>();
      const auto* y = b.get<std::int64_t>();
      if (!x || !y) fail(DiagnosticKind::RuntimeError, "'+' expects ints");
      return make_int(*x + *y);
    }
    case K::Pair: {
      Value b = force(s, k[1]);
      Value a = force(s, k[0]);
      return make_pair(std::move(a), std::move(b));
    }
    case K::Cons: {
      Value tail = force(s, k[1]);
      Value head = force(s, k[0]);
      const auto* l = tail.get<ListV>();
      if (!l) fail(DiagnosticKind::RuntimeError, "'::' expects a list");
      return cons_value(std::move(head), *l);
    }
    case K::Ref: return make_cell(force(s, k[0]));
    case K::Rget: {
      Value c = force(s, k[0]);
      const auto* cell = c.get<CellPtr>();
      if (!cell) fail(DiagnosticKind::RuntimeError, "'!' expects a reference");
      return (*cell)->contents;
    }
    case K::Rset: {
      Value v = force(s, k[1]);
      Value c = force(s, k[0]);
      return rset_runtime(c, v);
    }
    case K::App: {
      Value arg = force(s, k[1]);
      Value fn = force(s, k[0]);
      return s.apply(fn, arg);
    }
    case K::Lam: return force_lam(s, code);
    case K::Let: {
      Value v = force(s, k[0]);
      return s.dlet(s.denv_get(), code->var, std::move(v), [&] { return force(s, k[1]); });
    }
  }
  return make_unit();
}

// The binder pattern a host function was written with, when it can be seen.
const Pattern* visible_pattern(const Value& fn) {
  if (const auto* c = fn.get<ClosurePtr>()) return &(*c)->param;
  return nullptr;
}

class StringBackend final : public Backend {
 public:
  BackendId id() const override { return BackendId::String; }

  Value pure(Session&, Combinator c, const std::vector<Value>& args) override {
    auto op = [&](std::size_t i) {
      const auto& code = as_code(args[i], BackendId::String);
      return code.open ? "(" + code.text + ")" : code.text;
    };
    switch (c) {
      case Combinator::Int: {
        const auto i = *args[0].get<std::int64_t>();
        return make_string_code(i < 0 ? fmt::format("({})", i) : std::to_string(i));
      }
      case Combinator::Str: return make_string_code(quote_string(*args[0].get<std::string>()));
      case Combinator::Add: return make_string_code("(" + op(0) + " + " + op(1) + ")");
      case Combinator::App: return make_string_code("(" + op(0) + " " + op(1) + ")");
      case Combinator::Pair: return make_string_code("(" + op(0) + ", " + op(1) + ")");
      case Combinator::Nil: return make_string_code("[]");
      case Combinator::Cons: return make_string_code("(" + op(0) + " :: " + op(1) + ")");
      case Combinator::Ref: return make_string_code("(ref " + op(0) + ")");
      case Combinator::Rget: return make_string_code("(!" + op(0) + ")");
      case Combinator::Rset: return make_string_code("(rset " + op(0) + " " + op(1) + ")");
      case Combinator::Csp: return make_string_code(serialize_ground(args[0]));
      default: break;
    }
    fail(DiagnosticKind::RuntimeError, "not a pure combinator");
  }

  void lam(Machine& m, const Value& body) override {
    const Pattern* p = visible_pattern(body);
    std::string binder;
    Value arg;
    if (p && p->kind == PatternKind::Wildcard) {
      binder = "_";
      arg = make_string_code("()");
    } else if (p && p->kind == PatternKind::UnitCode) {
      binder = "()";
      arg = make_string_code("()");
    } else {
      binder = m.session().gensym("x");
      arg = make_string_code(binder);
    }
    m.push_native([binder](Machine& m2, const Value& result) {
      m2.ret(make_string_code("fun " + binder + " -> " + as_code(result, BackendId::String).text,
                              true));
    });
    m.apply(body, arg);
  }

  void genlet(Machine& m, int prompt, const Value& code) override {
    const std::string rhs = as_code(code, BackendId::String).text;
    m.capture(prompt, [rhs](Machine& m2, const Value& k) {
      const std::string name = m2.session().gensym("t");
      m2.push_native([name, rhs](Machine& m3, const Value& result) {
        m3.ret(make_string_code(
            "let " + name + " = " + rhs + " in " + as_code(result, BackendId::String).text, true));
      });
      m2.apply(k, make_string_code(name));
    });
  }
};

class QuoteBackend final : public Backend {
 public:
  BackendId id() const override { return BackendId::Quote; }

  Value pure(Session&, Combinator c, const std::vector<Value>& args) override {
    auto q = [&](std::size_t i) { return as_code(args[i], BackendId::Quote).tree; };
    switch (c) {
      case Combinator::Int: return make_quote_code(src::int_lit(*args[0].get<std::int64_t>()));
      case Combinator::Str: return make_quote_code(src::str_lit(*args[0].get<std::string>()));
      case Combinator::Add: return make_quote_code(src::add(q(0), q(1)));
      case Combinator::App: return make_quote_code(src::app(q(0), q(1)));
      case Combinator::Pair: return make_quote_code(src::pair(q(0), q(1)));
      case Combinator::Nil: return make_quote_code(src::nil());
      case Combinator::Cons: return make_quote_code(src::cons(q(0), q(1)));
      case Combinator::Ref: return make_quote_code(src::ref_new(q(0)));
      case Combinator::Rget: return make_quote_code(src::ref_get(q(0)));
      case Combinator::Rset: return make_quote_code(src::rset(q(0), q(1)));
      case Combinator::Csp: return make_quote_code(ground_to_source(args[0]));
      default: break;
    }
    fail(DiagnosticKind::RuntimeError, "not a pure combinator");
  }

  void lam(Machine& m, const Value& body) override {
    const Pattern* p = visible_pattern(body);
    Pattern binder;
    Value arg;
    if (p && p->kind == PatternKind::Wildcard) {
      binder = Pattern::wildcard();
      arg = make_quote_code(src::unit());
    } else if (p && p->kind == PatternKind::UnitCode) {
      binder = Pattern::unit();
      arg = make_quote_code(src::unit());
    } else {
      binder = Pattern::named(m.session().gensym("x"));
      arg = make_quote_code(src::var(binder.name));
    }
    m.push_native([binder](Machine& m2, const Value& result) {
      m2.ret(make_quote_code(src::fun(binder, as_code(result, BackendId::Quote).tree)));
    });
    m.apply(body, arg);
  }

  void genlet(Machine& m, int prompt, const Value& code) override {
    const SourceExpr rhs = as_code(code, BackendId::Quote).tree;
    m.capture(prompt, [rhs](Machine& m2, const Value& k) {
      const std::string name = m2.session().gensym("t");
      m2.push_native([name, rhs](Machine& m3, const Value& result) {
        m3.ret(make_quote_code(src::let(name, rhs, as_code(result, BackendId::Quote).tree)));
      });
      m2.apply(k, make_quote_code(src::var(name)));
    });
  }
};

class EvalBackend final : public Backend {
 public:
  BackendId id() const override { return BackendId::Eval; }

  Value pure(Session&, Combinator c, const std::vector<Value>& args) override {
    using K = EvalCode::Kind;
    auto d = [&](std::size_t i) { return as_code(args[i], BackendId::Eval).delayed; };
    switch (c) {
      case Combinator::Int:
      case Combinator::Str:
      case Combinator::Csp: return make_eval_code(constant(args[0]));
      case Combinator::Nil: return make_eval_code(constant(Value(ListV{})));
      case Combinator::Add: return make_eval_code(node(K::Add, {d(0), d(1)}));
      case Combinator::App: return make_eval_code(node(K::App, {d(0), d(1)}));
      case Combinator::Pair: return make_eval_code(node(K::Pair, {d(0), d(1)}));
      case Combinator::Cons: return make_eval_code(node(K::Cons, {d(0), d(1)}));
      case Combinator::Ref: return make_eval_code(node(K::Ref, {d(0)}));
      case Combinator::Rget: return make_eval_code(node(K::Rget, {d(0)}));
      case Combinator::Rset: return make_eval_code(node(K::Rset, {d(0), d(1)}));
      default: break;
    }
    fail(DiagnosticKind::RuntimeError, "not a pure combinator");
  }

  void lam(Machine& m, const Value& body) override {
    const int var = m.session().dnew();
    m.push_native([var](Machine& m2, const Value& result) {
      m2.ret(make_eval_code(node(EvalCode::Kind::Lam, {as_code(result, BackendId::Eval).delayed}, var)));
    });
    m.apply(body, make_eval_code(node(EvalCode::Kind::DynRef, {}, var)));
  }

  void genlet(Machine& m, int prompt, const Value& code) override {
    const EvalCodePtr rhs = as_code(code, BackendId::Eval).delayed;
    m.capture(prompt, [rhs](Machine& m2, const Value& k) {
      const int var = m2.session().dnew();
      m2.push_native([var, rhs](Machine& m3, const Value& result) {
        m3.ret(make_eval_code(
            node(EvalCode::Kind::Let, {rhs, as_code(result, BackendId::Eval).delayed}, var)));
      });
      m2.apply(k, make_eval_code(node(EvalCode::Kind::DynRef, {}, var)));
    });
  }
};

}  // namespace

std::unique_ptr<Backend> make_backend(BackendId id) {
  switch (id) {
    case BackendId::String: return std::make_unique<StringBackend>();
    case BackendId::Quote: return std::make_unique<QuoteBackend>();
    case BackendId::Eval: return std::make_unique<EvalBackend>();
  }
  return nullptr;
}

Value force_code(Session& s, const Value& code) {
  return force(s, as_code(code, BackendId::Eval).delayed);
}

Value generate(Session& s, const TargetTerm& t, EnvPtr env) {
  Value v = s.eval(t, std::move(env));
  if (s.backend_id() == BackendId::Quote) check_scopes_in(v);
  return v;
}

std::string show_generated(const Value& v) {
  switch (v.tag()) {
    case ValueTag::Code: {
      const auto& c = **v.get<CodePtr>();
      switch (c.backend) {
        case BackendId::String: return c.text;
        case BackendId::Quote: return pretty(c.tree);
        case BackendId::Eval: return "<code>";
      }
      return "<code>";
    }
    case ValueTag::Pair: {
      const auto& p = **v.get<PairPtr>();
      return "(" + show_generated(p.first) + ", " + show_generated(p.second) + ")";
    }
    case ValueTag::List: {
      std::string out = "[";
      bool first = true;
      for (const auto& item : list_items(*v.get<ListV>())) {
        out += (first ? "" : "; ") + show_generated(item);
        first = false;
      }
      return out + "]";
    }
    default: return show_value(v);
  }
}

}  // namespace polylet
