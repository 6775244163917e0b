#include "polylet/typecheck.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "polylet/diagnostic.hpp"

namespace polylet {

std::string_view to_string(GenPolicy p) {
  switch (p) {
    case GenPolicy::StrictValue: return "value";
    case GenPolicy::NonExpansive: return "nonexpansive";
    case GenPolicy::Relaxed: return "relaxed";
  }
  return "?";
}

std::optional<GenPolicy> gen_policy_from_name(std::string_view name) {
  if (name == "value") return GenPolicy::StrictValue;
  if (name == "nonexpansive") return GenPolicy::NonExpansive;
  if (name == "relaxed") return GenPolicy::Relaxed;
  return std::nullopt;
}

bool is_value(const SourceExpr& e) {
  switch (e->kind) {
    case SourceKind::Var:
    case SourceKind::Int:
    case SourceKind::Str:
    case SourceKind::Nil:
    case SourceKind::Unit:
    case SourceKind::Fun:
    case SourceKind::Persist: return true;
    case SourceKind::Pair:
    case SourceKind::Cons: return is_value(e->kids[0]) && is_value(e->kids[1]);
    default: return false;
  }
}

bool is_nonexpansive(const SourceExpr& e) {
  switch (e->kind) {
    case SourceKind::Bracket: return true;
    case SourceKind::Csp: return is_nonexpansive(e->kids[0]);
    case SourceKind::Pair:
    case SourceKind::Cons: return is_nonexpansive(e->kids[0]) && is_nonexpansive(e->kids[1]);
    default: return is_value(e);
  }
}

bool is_value(const TargetTerm& t) {
  switch (t->kind) {
    case TargetKind::Var:
    case TargetKind::Int:
    case TargetKind::Str:
    case TargetKind::Nil:
    case TargetKind::Unit:
    case TargetKind::Fun:
    case TargetKind::Persist: return true;
    case TargetKind::Comb: return t->comb == Combinator::Nil;
    case TargetKind::Pair:
    case TargetKind::Cons: return is_value(t->kids[0]) && is_value(t->kids[1]);
    default: return false;
  }
}

bool is_nonexpansive(const TargetTerm& t) { return is_value(t); }

TypeScheme generalize(const Type& t, const TypeEnv& env, bool rhs_nonexpansive, GenPolicy policy) {
  const std::set<int> env_vars = env.free_type_vars();
  TypeScheme s{{}, t};
  for (int v : free_type_vars(t)) {
    if (env_vars.count(v)) continue;
    const bool ok = rhs_nonexpansive ||
                    (policy == GenPolicy::Relaxed && variance_of(v, t) == Variance::Covariant);
    if (ok) s.quantified.push_back(v);
  }
  return s;
}

namespace {

bool generalizable(const SourceExpr& rhs, GenPolicy policy) {
  return policy == GenPolicy::StrictValue ? is_value(rhs) : is_nonexpansive(rhs);
}

bool generalizable(const TargetTerm& rhs, GenPolicy policy) {
  return policy == GenPolicy::StrictValue ? is_value(rhs) : is_nonexpansive(rhs);
}

void unify_at(const Type& expected, const Type& actual, SourceLoc loc, std::string_view what) {
  try {
    unify(expected, actual);
  } catch (const Error& err) {
    fail(DiagnosticKind::TypeError,
         fmt::format("{}: expected {} but got {} ({})", what, pretty(expected), pretty(actual),
                     err.diagnostic().message),
         loc);
  }
}

Type rset_type(TypeVarSupply& supply, Type& elem) {
  elem = supply.fresh();
  return ty::list(elem);
}

class StagedInfer {
 public:
  StagedInfer(const TypeEnv& env, GenPolicy policy, StagedTyping* record)
      : env_(env), policy_(policy), record_(record) {}

  TypeScheme run(const SourceExpr& e, int level) {
    Type t = infer(e, level);
    return generalize(t, env_, generalizable(e, policy_), policy_);
  }

 private:
  TypeEnv env_;
  GenPolicy policy_;
  StagedTyping* record_;
  TypeVarSupply supply_;

  Type note(const SourceExpr& e, Type t) {
    if (record_) record_->node_types[e.get()] = t;
    return t;
  }

  Type pattern_type(const Pattern& p) {
    return p.kind == PatternKind::Unit ? ty::unit() : supply_.fresh();
  }

  Type infer(const SourceExpr& e, int level) { return note(e, infer_node(e, level)); }

  Type infer_node(const SourceExpr& e, int level) {
    const auto& n = *e;
    switch (n.kind) {
      case SourceKind::Var: {
        const TypeBinding* b = env_.lookup(n.text);
        if (!b) fail(DiagnosticKind::UnboundVar, fmt::format("unbound variable {}", n.text), n.loc);
        if (b->level != level) {
          fail(DiagnosticKind::TypeError,
               b->level == 0
                   ? fmt::format("level: variable {} is bound at level 0 and used at level 1; "
                                 "mark it with '%' to persist it",
                                 n.text)
                   : fmt::format("level: variable {} is bound at level 1 and used at level 0",
                                 n.text),
               n.loc);
        }
        return instantiate(b->scheme, supply_);
      }
      case SourceKind::Int: return ty::int_();
      case SourceKind::Str: return ty::str();
      case SourceKind::Nil: return ty::list(supply_.fresh());
      case SourceKind::Unit: return ty::unit();
      case SourceKind::Add: {
        unify_at(ty::int_(), infer(n.kids[0], level), n.kids[0]->loc, "left operand of +");
        unify_at(ty::int_(), infer(n.kids[1], level), n.kids[1]->loc, "right operand of +");
        return ty::int_();
      }
      case SourceKind::Pair: return ty::pair(infer(n.kids[0], level), infer(n.kids[1], level));
      case SourceKind::Cons: {
        Type head = infer(n.kids[0], level);
        Type tail = infer(n.kids[1], level);
        unify_at(ty::list(head), tail, n.loc, "list cons");
        return tail;
      }
      case SourceKind::RefNew: return ty::ref(infer(n.kids[0], level));
      case SourceKind::RefGet: {
        Type cell = supply_.fresh();
        unify_at(ty::ref(cell), infer(n.kids[0], level), n.kids[0]->loc, "dereference");
        return cell;
      }
      case SourceKind::Rset: {
        Type elem;
        Type list = rset_type(supply_, elem);
        unify_at(ty::ref(list), infer(n.kids[0], level), n.kids[0]->loc, "rset cell");
        unify_at(elem, infer(n.kids[1], level), n.kids[1]->loc, "rset value");
        return list;
      }
      case SourceKind::App: {
        Type fn = infer(n.kids[0], level);
        Type arg = infer(n.kids[1], level);
        Type result = supply_.fresh();
        unify_at(ty::arrow(arg, result), fn, n.loc, "application");
        return result;
      }
      case SourceKind::Fun: {
        Type param = pattern_type(n.param);
        const bool binds = n.param.kind == PatternKind::Name;
        if (binds) env_.push(n.param.name, level, mono(param));
        Type body = infer(n.kids[0], level);
        if (binds) env_.pop();
        return ty::arrow(param, body);
      }
      case SourceKind::Let: {
        Type rhs = infer(n.kids[0], level);
        TypeScheme s = generalize(rhs, env_, generalizable(n.kids[0], policy_), policy_);
        if (record_) record_->let_schemes[e.get()] = s;
        env_.push(n.text, level, std::move(s));
        Type body = infer(n.kids[1], level);
        env_.pop();
        return body;
      }
      case SourceKind::Bracket: return ty::code(infer(n.kids[0], level + 1));
      case SourceKind::Escape: {
        Type inner = supply_.fresh();
        unify_at(ty::code(inner), infer(n.kids[0], level - 1), n.kids[0]->loc, "escape");
        return inner;
      }
      case SourceKind::Csp: return infer(n.kids[0], level - 1);
      case SourceKind::Persist: break;
    }
    fail(DiagnosticKind::TypeError, "embedded values have no static type", n.loc);
  }
};

class HostInfer {
 public:
  HostInfer(const TypeEnv& env, GenPolicy policy) : env_(env), policy_(policy) {}

  TypeScheme run(const TargetTerm& t) {
    Type ty = infer(t);
    return generalize(ty, env_, generalizable(t, policy_), policy_);
  }

 private:
  TypeEnv env_;
  GenPolicy policy_;
  TypeVarSupply supply_;

  Type pattern_type(const Pattern& p) {
    switch (p.kind) {
      case PatternKind::Unit: return ty::unit();
      case PatternKind::UnitCode: return ty::code(ty::unit());
      default: return supply_.fresh();
    }
  }

  Type infer(const TargetTerm& t) {
    const auto& n = *t;
    switch (n.kind) {
      case TargetKind::Var: {
        const TypeBinding* b = env_.lookup(n.text);
        if (!b) fail(DiagnosticKind::UnboundVar, fmt::format("unbound variable {}", n.text), n.loc);
        return instantiate(b->scheme, supply_);
      }
      case TargetKind::Int: return ty::int_();
      case TargetKind::Str: return ty::str();
      case TargetKind::Nil: return ty::list(supply_.fresh());
      case TargetKind::Unit: return ty::unit();
      case TargetKind::Add:
        unify_at(ty::int_(), infer(n.kids[0]), n.kids[0]->loc, "left operand of +");
        unify_at(ty::int_(), infer(n.kids[1]), n.kids[1]->loc, "right operand of +");
        return ty::int_();
      case TargetKind::Pair: return ty::pair(infer(n.kids[0]), infer(n.kids[1]));
      case TargetKind::Cons: {
        Type head = infer(n.kids[0]);
        Type tail = infer(n.kids[1]);
        unify_at(ty::list(head), tail, n.loc, "list cons");
        return tail;
      }
      case TargetKind::RefNew: return ty::ref(infer(n.kids[0]));
      case TargetKind::RefGet: {
        Type cell = supply_.fresh();
        unify_at(ty::ref(cell), infer(n.kids[0]), n.kids[0]->loc, "dereference");
        return cell;
      }
      case TargetKind::Rset: {
        Type elem;
        Type list = rset_type(supply_, elem);
        unify_at(ty::ref(list), infer(n.kids[0]), n.kids[0]->loc, "rset cell");
        unify_at(elem, infer(n.kids[1]), n.kids[1]->loc, "rset value");
        return list;
      }
      case TargetKind::App: {
        Type fn = infer(n.kids[0]);
        Type arg = infer(n.kids[1]);
        Type result = supply_.fresh();
        unify_at(ty::arrow(arg, result), fn, n.loc, "application");
        return result;
      }
      case TargetKind::Fun: {
        Type param = pattern_type(n.param);
        const bool binds = n.param.kind == PatternKind::Name;
        if (binds) env_.push(n.param.name, 0, mono(param));
        Type body = infer(n.kids[0]);
        if (binds) env_.pop();
        return ty::arrow(param, body);
      }
      case TargetKind::Let: {
        Type rhs = infer(n.kids[0]);
        env_.push(n.text, 0, generalize(rhs, env_, generalizable(n.kids[0], policy_), policy_));
        Type body = infer(n.kids[1]);
        env_.pop();
        return body;
      }
      case TargetKind::Comb: {
        Type fn = instantiate(combinator_scheme(n.comb), supply_);
        for (const auto& arg : n.kids) {
          Type result = supply_.fresh();
          unify_at(ty::arrow(infer(arg), result), fn, arg->loc,
                   fmt::format("argument of {}", combinator_name(n.comb)));
          fn = result;
        }
        return fn;
      }
      case TargetKind::Persist: break;
    }
    fail(DiagnosticKind::TypeError, "embedded values have no static type", n.loc);
  }
};

TypeScheme build_combinator_scheme(Combinator c) {
  TypeVarSupply s;
  auto all = [](Type t) {
    TypeScheme sc{{}, t};
    for (int v : free_type_vars(t)) sc.quantified.push_back(v);
    return sc;
  };
  using namespace ty;
  const Type a = s.fresh();
  const Type b = s.fresh();
  switch (c) {
    case Combinator::Int: return all(arrow(int_(), code(int_())));
    case Combinator::Str: return all(arrow(str(), code(str())));
    case Combinator::Add: return all(arrow(code(int_()), arrow(code(int_()), code(int_()))));
    case Combinator::Lam: return all(arrow(arrow(code(a), code(b)), code(arrow(a, b))));
    case Combinator::App: return all(arrow(code(arrow(a, b)), arrow(code(a), code(b))));
    case Combinator::Pair: return all(arrow(code(a), arrow(code(b), code(pair(a, b)))));
    case Combinator::Nil: return all(code(list(a)));
    case Combinator::Cons: return all(arrow(code(a), arrow(code(list(a)), code(list(a)))));
    case Combinator::Ref: return all(arrow(code(a), code(ref(a))));
    case Combinator::Rget: return all(arrow(code(ref(a)), code(a)));
    case Combinator::Rset:
      return all(arrow(code(ref(list(a))), arrow(code(a), code(list(a)))));
    case Combinator::Csp: return all(arrow(a, code(a)));
    case Combinator::NewScope: return all(arrow(arrow(scope(a), code(a)), code(a)));
    case Combinator::Genlet: return all(arrow(scope(a), arrow(code(b), code(b))));
    case Combinator::NewFunscope: return all(arrow(arrow(funscope(a), code(a)), code(a)));
    case Combinator::Genletfun: {
      const Type w = s.fresh();
      return all(arrow(funscope(w), arrow(arrow(code(a), code(b)), code(arrow(a, b)))));
    }
  }
  return all(unit());
}

class Replay {
 public:
  Replay(const TypeEnv& env, const StagedTyping& typing, GenPolicy policy)
      : env_(env), typing_(typing), policy_(policy) {}

  std::string check(const SourceExpr& e, int level) {
    try {
      visit(e, level);
    } catch (const std::string& msg) {
      return msg;
    }
    return {};
  }

 private:
  TypeEnv env_;
  const StagedTyping& typing_;
  GenPolicy policy_;

  [[noreturn]] void bad(const SourceExpr& e, std::string_view why) {
    throw fmt::format("{} at {}:{}: {}", pretty(e), e->loc.line, e->loc.column, why);
  }

  Type type_of(const SourceExpr& e) {
    auto it = typing_.node_types.find(e.get());
    if (it == typing_.node_types.end()) bad(e, "node has no recorded type");
    return it->second;
  }

  void expect(const SourceExpr& e, const Type& a, const Type& b, std::string_view rule) {
    if (!types_equal(a, b)) {
      bad(e, fmt::format("{} rule violated: {} vs {}", rule, pretty(a), pretty(b)));
    }
  }

  void visit(const SourceExpr& e, int level) {
    const auto& n = *e;
    const Type self = resolve(type_of(e));
    for (std::size_t i = 0; i < n.kids.size() && n.kind != SourceKind::Let &&
                            n.kind != SourceKind::Fun && n.kind != SourceKind::Bracket &&
                            n.kind != SourceKind::Escape && n.kind != SourceKind::Csp;
         ++i) {
      visit(n.kids[i], level);
    }
    auto kid = [&](std::size_t i) { return type_of(n.kids[i]); };
    switch (n.kind) {
      case SourceKind::Var: {
        const TypeBinding* b = env_.lookup(n.text);
        if (!b) bad(e, "unbound");
        if (b->level != level) bad(e, "level mismatch");
        if (!is_instance(self, b->scheme)) bad(e, "not an instance of the binding's scheme");
        return;
      }
      case SourceKind::Int: return expect(e, self, ty::int_(), "int literal");
      case SourceKind::Str: return expect(e, self, ty::str(), "string literal");
      case SourceKind::Unit: return expect(e, self, ty::unit(), "unit");
      case SourceKind::Nil:
        if (self->con != TypeCon::List) bad(e, "nil is not a list");
        return;
      case SourceKind::Add:
        expect(e, kid(0), ty::int_(), "add");
        expect(e, kid(1), ty::int_(), "add");
        return expect(e, self, ty::int_(), "add");
      case SourceKind::Pair: return expect(e, self, ty::pair(kid(0), kid(1)), "pair");
      case SourceKind::Cons:
        expect(e, self, ty::list(kid(0)), "cons");
        return expect(e, kid(1), self, "cons");
      case SourceKind::RefNew: return expect(e, self, ty::ref(kid(0)), "ref");
      case SourceKind::RefGet: return expect(e, kid(0), ty::ref(self), "deref");
      case SourceKind::Rset:
        expect(e, self, ty::list(kid(1)), "rset");
        return expect(e, kid(0), ty::ref(self), "rset");
      case SourceKind::App: return expect(e, kid(0), ty::arrow(kid(1), self), "application");
      case SourceKind::Fun: {
        if (self->con != TypeCon::Arrow) bad(e, "function without arrow type");
        const Type param = self->args[0];
        if (n.param.kind == PatternKind::Unit) expect(e, param, ty::unit(), "unit pattern");
        const bool binds = n.param.kind == PatternKind::Name;
        if (binds) env_.push(n.param.name, level, mono(param));
        visit(n.kids[0], level);
        if (binds) env_.pop();
        return expect(e, self->args[1], kid(0), "abstraction");
      }
      case SourceKind::Let: {
        visit(n.kids[0], level);
        auto it = typing_.let_schemes.find(e.get());
        if (it == typing_.let_schemes.end()) bad(e, "let without recorded scheme");
        const TypeScheme& s = it->second;
        expect(e, s.body, kid(0), "let");
        TypeScheme again = generalize(kid(0), env_, generalizable(n.kids[0], policy_), policy_);
        for (int v : s.quantified) {
          if (std::find(again.quantified.begin(), again.quantified.end(), v) ==
              again.quantified.end()) {
            bad(e, "generalizes a variable the policy does not allow");
          }
        }
        env_.push(n.text, level, s);
        visit(n.kids[1], level);
        env_.pop();
        return expect(e, self, kid(1), "let");
      }
      case SourceKind::Bracket:
        visit(n.kids[0], level + 1);
        return expect(e, self, ty::code(kid(0)), "bracket");
      case SourceKind::Escape:
        visit(n.kids[0], level - 1);
        return expect(e, kid(0), ty::code(self), "escape");
      case SourceKind::Csp:
        visit(n.kids[0], level - 1);
        return expect(e, self, kid(0), "csp");
      case SourceKind::Persist: bad(e, "embedded value");
    }
  }
};

}  // namespace

TypeScheme combinator_scheme(Combinator c) {
  static const std::vector<TypeScheme> table = [] {
    std::vector<TypeScheme> out;
    for (int i = 0; i <= static_cast<int>(Combinator::Genletfun); ++i) {
      out.push_back(build_combinator_scheme(static_cast<Combinator>(i)));
    }
    return out;
  }();
  return table[static_cast<std::size_t>(c)];
}

TypeScheme infer_staged(const TypeEnv& env, const SourceExpr& e, int level, GenPolicy policy) {
  return StagedInfer(env, policy, nullptr).run(e, level);
}

StagedTyping infer_staged_recorded(const TypeEnv& env, const SourceExpr& e, int level,
                                   GenPolicy policy) {
  StagedTyping out;
  out.policy = policy;
  out.result = StagedInfer(env, policy, &out).run(e, level);
  return out;
}

std::string replay_staged(const TypeEnv& env, const SourceExpr& e, int level,
                          const StagedTyping& typing) {
  return Replay(env, typing, typing.policy).check(e, level);
}

TypeScheme infer_host(const TypeEnv& env, const TargetTerm& t, GenPolicy policy) {
  return HostInfer(env, policy).run(t);
}

}  // namespace polylet
