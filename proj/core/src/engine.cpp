#include "polylet/engine.hpp"

#include <fmt/format.h>

#include <atomic>

#include "polylet/diagnostic.hpp"

namespace polylet {

std::string_view to_string(BackendId b) {
  switch (b) {
    case BackendId::String: return "string";
    case BackendId::Quote: return "quote";
    case BackendId::Eval: return "eval";
  }
  return "?";
}

std::optional<BackendId> backend_from_name(std::string_view name) {
  if (name == "string") return BackendId::String;
  if (name == "quote") return BackendId::Quote;
  if (name == "eval") return BackendId::Eval;
  return std::nullopt;
}

namespace {
std::atomic<int> next_session_id{0};
}

Session::Session(BackendId backend, int gensym_start)
    : id_(++next_session_id), backend_(make_backend(backend)), counter_(gensym_start) {}

Session::~Session() = default;

std::string Session::gensym(std::string_view prefix) {
  return fmt::format("{}_{}", prefix, ++counter_);
}

Value Session::dref(int var) const {
  auto it = denv_.find(var);
  if (it == denv_.end()) {
    fail(DiagnosticKind::ScopeExtrusion,
         fmt::format("unbound dynamic variable #{}: generated code refers to a variable "
                     "outside its binder",
                     var));
  }
  return it->second;
}

Value Session::dlet(const DynEnv& denv, int var, Value v, const std::function<Value()>& body) {
  struct Restore {
    DynEnv& target;
    DynEnv saved;
    ~Restore() { target = std::move(saved); }
  } restore{denv_, denv_};
  denv_ = denv;
  denv_[var] = std::move(v);
  return body();
}

Value Session::eval(const TargetTerm& t, EnvPtr env) {
  Machine m(*this);
  m.eval(t, std::move(env));
  return m.run();
}

Value Session::apply(const Value& fn, const Value& arg) {
  Machine m(*this);
  m.apply(fn, arg);
  return m.run();
}

void Machine::ret(Value v) {
  value_ = std::move(v);
  mode_ = Mode::Return;
}

void Machine::eval(TargetTerm t, EnvPtr env) {
  term_ = std::move(t);
  env_ = std::move(env);
  mode_ = Mode::Eval;
}

void Machine::apply(Value fn, Value arg) {
  value_ = std::move(fn);
  arg_ = std::move(arg);
  mode_ = Mode::Apply;
}

void Machine::push_native(std::function<void(Machine&, const Value&)> resume) {
  stack_.push_back(NativeFrame{std::move(resume)});
}

void Machine::capture(int prompt, const std::function<void(Machine&, const Value&)>& consumer) {
  std::size_t i = stack_.size();
  while (i > 0) {
    const auto* p = std::get_if<PromptFrame>(&stack_[i - 1]);
    if (p && p->prompt == prompt) break;
    --i;
  }
  if (i == 0) {
    fail(DiagnosticKind::RuntimeError,
         fmt::format("prompt not active: no enclosing delimiter for prompt #{}", prompt));
  }
  auto k = std::make_shared<Continuation>();
  k->session = session_.id();
  k->frames.assign(std::make_move_iterator(stack_.begin() + static_cast<std::ptrdiff_t>(i - 1)),
                   std::make_move_iterator(stack_.end()));
  stack_.resize(i - 1);
  consumer(*this, Value(ContPtr(std::move(k))));
}

Value Machine::run() {
  for (;;) {
    switch (mode_) {
      case Mode::Eval: step_eval(); break;
      case Mode::Apply: step_apply(); break;
      case Mode::Return:
        if (stack_.empty()) return value_;
        step_return();
        break;
    }
  }
}

void Machine::step_eval() {
  const TargetTerm t = term_;
  const auto& n = *t;
  switch (n.kind) {
    case TargetKind::Var: {
      const Value* v = env_lookup(env_, n.text);
      if (!v) fail(DiagnosticKind::UnboundVar, fmt::format("unbound variable {}", n.text), n.loc);
      return ret(*v);
    }
    case TargetKind::Int: return ret(make_int(n.number));
    case TargetKind::Str: return ret(make_str(n.text));
    case TargetKind::Nil: return ret(Value(ListV{}));
    case TargetKind::Unit: return ret(make_unit());
    case TargetKind::Fun:
      return ret(Value(std::make_shared<const Closure>(Closure{n.param, n.kids[0], env_})));
    case TargetKind::Let:
      push(LetFrame{t, env_});
      return eval(n.kids[0], env_);
    case TargetKind::Persist: {
      const auto* pv = dynamic_cast<const PersistedValue*>(n.persisted.get());
      if (!pv) fail(DiagnosticKind::RuntimeError, "embedded value of a foreign kind", n.loc);
      return ret(pv->value());
    }
    default: break;
  }
  if (n.kids.empty()) {
    std::vector<Value> none;
    return finish(t, none);
  }
  const std::size_t last = n.kids.size() - 1;
  push(ArgsFrame{t, env_, last, std::vector<Value>(n.kids.size())});
  eval(n.kids[last], env_);
}

void Machine::step_apply() {
  const Value fn = value_;
  const Value arg = arg_;
  if (const auto* c = fn.get<ClosurePtr>()) {
    const Closure& cl = **c;
    EnvPtr env = cl.env;
    switch (cl.param.kind) {
      case PatternKind::Name: env = env_bind(std::move(env), cl.param.name, arg); break;
      case PatternKind::Unit:
        if (arg.tag() != ValueTag::Unit) {
          fail(DiagnosticKind::RuntimeError, "a '()' pattern received " + show_value(arg));
        }
        break;
      default: break;
    }
    return eval(cl.body, std::move(env));
  }
  if (const auto* nf = fn.get<NativePtr>()) return (*nf)->call(*this, arg);
  if (const auto* k = fn.get<ContPtr>()) {
    if ((*k)->session != session_.id()) {
      fail(DiagnosticKind::RuntimeError, "continuation resumed outside its session");
    }
    for (const auto& f : (*k)->frames) stack_.push_back(f);
    return ret(arg);
  }
  fail(DiagnosticKind::RuntimeError, "cannot apply a non-function: " + show_value(fn));
}

void Machine::step_return() {
  Frame top = std::move(stack_.back());
  stack_.pop_back();
  if (auto* a = std::get_if<ArgsFrame>(&top)) {
    a->done[a->next] = value_;
    if (a->next == 0) return finish(a->node, a->done);
    --a->next;
    const TargetTerm next = a->node->kids[a->next];
    EnvPtr env = a->env;
    stack_.push_back(std::move(top));
    return eval(next, std::move(env));
  }
  if (auto* l = std::get_if<LetFrame>(&top)) {
    const auto& n = *l->node;
    return eval(n.kids[1], env_bind(l->env, n.text, value_));
  }
  if (std::holds_alternative<PromptFrame>(top)) return;  // value passes through
  std::get<NativeFrame>(top).resume(*this, value_);
}

namespace {

std::int64_t as_int(const Value& v, std::string_view what) {
  const auto* i = v.get<std::int64_t>();
  if (!i) fail(DiagnosticKind::RuntimeError, fmt::format("{} expects an int, got {}", what, show_value(v)));
  return *i;
}

const ScopePtr& as_scope(const Value& v, bool function_scope, std::string_view what) {
  const auto* s = v.get<ScopePtr>();
  if (!s || (*s)->function_scope != function_scope) {
    fail(DiagnosticKind::RuntimeError,
         fmt::format("{} expects a {} handle", what, function_scope ? "funscope" : "scope"));
  }
  return *s;
}

}  // namespace

void Machine::finish(const TargetTerm& node, std::vector<Value>& args) {
  const auto& n = *node;
  switch (n.kind) {
    case TargetKind::Add: return ret(make_int(as_int(args[0], "+") + as_int(args[1], "+")));
    case TargetKind::Pair: return ret(make_pair(args[0], args[1]));
    case TargetKind::Cons: {
      const auto* tail = args[1].get<ListV>();
      if (!tail) fail(DiagnosticKind::RuntimeError, "'::' expects a list", n.loc);
      return ret(cons_value(args[0], *tail));
    }
    case TargetKind::RefNew: return ret(make_cell(args[0]));
    case TargetKind::RefGet: {
      const auto* c = args[0].get<CellPtr>();
      if (!c) fail(DiagnosticKind::RuntimeError, "'!' expects a reference", n.loc);
      return ret((*c)->contents);
    }
    case TargetKind::Rset: return ret(rset_runtime(args[0], args[1]));
    case TargetKind::App: return apply(args[0], args[1]);
    case TargetKind::Comb: return combinator(node, args);
    default: break;
  }
  fail(DiagnosticKind::RuntimeError, "malformed term", n.loc);
}

void Machine::combinator(const TargetTerm& node, std::vector<Value>& args) {
  Backend& b = session_.backend();
  switch (node->comb) {
    case Combinator::NewScope:
    case Combinator::NewFunscope: {
      auto scope = std::make_shared<ScopeBox>();
      scope->prompt = session_.new_prompt();
      scope->function_scope = node->comb == Combinator::NewFunscope;
      push_prompt(scope->prompt);
      return apply(args[0], Value(ScopePtr(scope)));
    }
    case Combinator::Genlet:
      return b.genlet(*this, as_scope(args[0], false, "genlet")->prompt, args[1]);
    case Combinator::Genletfun: {
      ScopePtr scope = as_scope(args[0], true, "genletfun");
      if (scope->memo) return ret(*scope->memo);
      push_native([scope](Machine& m, const Value& x) {
        if (!scope->memo) scope->memo = x;
        m.ret(*scope->memo);
      });
      const int prompt = scope->prompt;
      push_native([prompt](Machine& m, const Value& fn) {
        m.session().backend().genlet(m, prompt, fn);
      });
      return b.lam(*this, args[1]);
    }
    case Combinator::Lam: return b.lam(*this, args[0]);
    default: return ret(b.pure(session_, node->comb, args));
  }
}

Value eval(const TargetTerm& t, BackendId backend) {
  Session s(backend);
  return s.eval(t);
}

EnvPtr control_primitives(EnvPtr env) {
  env = env_bind(std::move(env), "new_prompt", make_native("new_prompt", [](Machine& m, const Value&) {
                   auto scope = std::make_shared<ScopeBox>();
                   scope->prompt = m.session().new_prompt();
                   m.ret(Value(ScopePtr(scope)));
                 }));
  env = env_bind(std::move(env), "push_prompt", make_native("push_prompt", [](Machine& m, const Value& p) {
                   const int prompt = as_scope(p, false, "push_prompt")->prompt;
                   m.ret(make_native("push_prompt", [prompt](Machine& m2, const Value& thunk) {
                     m2.push_prompt(prompt);
                     m2.apply(thunk, make_unit());
                   }));
                 }));
  env = env_bind(std::move(env), "shift0", make_native("shift0", [](Machine& m, const Value& p) {
                   const int prompt = as_scope(p, false, "shift0")->prompt;
                   m.ret(make_native("shift0", [prompt](Machine& m2, const Value& f) {
                     m2.capture(prompt, [f](Machine& m3, const Value& k) { m3.apply(f, k); });
                   }));
                 }));
  return env;
}

}  // namespace polylet
