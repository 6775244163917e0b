#include "polylet/unstage.hpp"

#include <fmt/format.h>

#include <map>
#include <set>

namespace polylet {

namespace {

void collect_names(const SourceExpr& e, std::set<std::string>& out) {
  if (e->kind == SourceKind::Var || e->kind == SourceKind::Let) out.insert(e->text);
  if (e->kind == SourceKind::Fun && e->param.kind == PatternKind::Name) out.insert(e->param.name);
  for (const auto& k : e->kids) collect_names(k, out);
}

class Translator {
 public:
  explicit Translator(const SourceExpr& root) { collect_names(root, taken_); }

  TargetTerm level0(const SourceExpr& e) {
    const auto& n = *e;
    const SourceLoc loc = n.loc;
    switch (n.kind) {
      case SourceKind::Var: return tgt::var(n.text, loc);
      case SourceKind::Int: return tgt::int_lit(n.number, loc);
      case SourceKind::Str: return tgt::str_lit(n.text, loc);
      case SourceKind::Nil: return tgt::nil(loc);
      case SourceKind::Unit: return tgt::unit(loc);
      case SourceKind::Add: return tgt::add(level0(n.kids[0]), level0(n.kids[1]), loc);
      case SourceKind::Pair: return tgt::pair(level0(n.kids[0]), level0(n.kids[1]), loc);
      case SourceKind::Cons: return tgt::cons(level0(n.kids[0]), level0(n.kids[1]), loc);
      case SourceKind::RefNew: return tgt::ref_new(level0(n.kids[0]), loc);
      case SourceKind::RefGet: return tgt::ref_get(level0(n.kids[0]), loc);
      case SourceKind::Rset: return tgt::rset(level0(n.kids[0]), level0(n.kids[1]), loc);
      case SourceKind::App: return tgt::app(level0(n.kids[0]), level0(n.kids[1]), loc);
      case SourceKind::Fun: return tgt::fun(n.param, level0(n.kids[0]), loc);
      case SourceKind::Let: return tgt::let(n.text, level0(n.kids[0]), level0(n.kids[1]), loc);
      case SourceKind::Bracket: return level1(n.kids[0]);
      case SourceKind::Persist: return tgt::persist(n.persisted, loc);
      case SourceKind::Escape:
      case SourceKind::Csp: break;
    }
    fail(DiagnosticKind::ParseError, "staging form outside a bracket", loc);
  }

  TargetTerm level1(const SourceExpr& e) {
    const auto& n = *e;
    const SourceLoc loc = n.loc;
    auto kid = [&](std::size_t i) { return level1(n.kids[i]); };
    switch (n.kind) {
      case SourceKind::Var: return tgt::var(n.text, loc);
      case SourceKind::Int: return tgt::comb(Combinator::Int, {tgt::int_lit(n.number, loc)}, loc);
      case SourceKind::Str: return tgt::comb(Combinator::Str, {tgt::str_lit(n.text, loc)}, loc);
      case SourceKind::Nil: return tgt::comb(Combinator::Nil, {}, loc);
      case SourceKind::Unit: return tgt::comb(Combinator::Csp, {tgt::unit(loc)}, loc);
      case SourceKind::Add: return tgt::comb(Combinator::Add, {kid(0), kid(1)}, loc);
      case SourceKind::Pair: return tgt::comb(Combinator::Pair, {kid(0), kid(1)}, loc);
      case SourceKind::Cons: return tgt::comb(Combinator::Cons, {kid(0), kid(1)}, loc);
      case SourceKind::RefNew: return tgt::comb(Combinator::Ref, {kid(0)}, loc);
      case SourceKind::RefGet: return tgt::comb(Combinator::Rget, {kid(0)}, loc);
      case SourceKind::Rset: return tgt::comb(Combinator::Rset, {kid(0), kid(1)}, loc);
      case SourceKind::App: return tgt::comb(Combinator::App, {kid(0), kid(1)}, loc);
      case SourceKind::Fun: return tgt::comb(Combinator::Lam, {code_function(e)}, loc);
      case SourceKind::Let: return let1(e);
      case SourceKind::Escape: return level0(n.kids[0]);
      case SourceKind::Csp: return tgt::comb(Combinator::Csp, {level0(n.kids[0])}, loc);
      case SourceKind::Persist: return tgt::comb(Combinator::Csp, {tgt::persist(n.persisted, loc)}, loc);
      case SourceKind::Bracket: break;
    }
    fail(DiagnosticKind::ParseError, "nested bracket", loc);
  }

 private:
  std::set<std::string> taken_;

  std::string fresh_scope() {
    for (int i = 0;; ++i) {
      std::string name = i == 0 ? "p" : fmt::format("p{}", i);
      if (taken_.insert(name).second) return name;
    }
  }

  // The host function a level-1 `fun` becomes under lam/genletfun.
  TargetTerm code_function(const SourceExpr& e) {
    Pattern param = e->param.kind == PatternKind::Unit ? Pattern::unit_code() : e->param;
    return tgt::fun(std::move(param), level1(e->kids[0]), e->loc);
  }

  TargetTerm let1(const SourceExpr& e) {
    const auto& n = *e;
    const SourceLoc loc = n.loc;
    const SourceExpr& rhs = n.kids[0];
    const std::string p = fresh_scope();
    TargetTerm body;
    Combinator opener;
    if (rhs->kind == SourceKind::Fun) {
      TargetTerm thunk = tgt::fun(
          Pattern::unit(),
          tgt::comb(Combinator::Genletfun, {tgt::var(p, loc), code_function(rhs)}, rhs->loc), loc);
      body = tgt::let(n.text, std::move(thunk), thunk_uses(level1(n.kids[1]), n.text), loc);
      opener = Combinator::NewFunscope;
    } else {
      TargetTerm bound = tgt::comb(Combinator::Genlet, {tgt::var(p, loc), level1(rhs)}, rhs->loc);
      body = tgt::let(n.text, std::move(bound), level1(n.kids[1]), loc);
      opener = Combinator::NewScope;
    }
    return tgt::comb(opener, {tgt::fun(p, std::move(body), loc)}, loc);
  }
};

TargetTerm rebuild(const TargetTerm& t, std::vector<TargetTerm> kids) {
  auto n = std::make_shared<TargetNode>(*t);
  n->kids = std::move(kids);
  return n;
}

struct Linter {
  struct Available {
    std::string name;
    Combinator opener;
  };
  std::vector<Available> scopes;
  std::vector<std::string> problems;

  void forget(const std::string& name) {
    std::erase_if(scopes, [&](const Available& a) { return a.name == name; });
  }

  void visit_fun(const TargetTerm& f) {
    const auto saved = scopes;
    if (f->param.kind == PatternKind::Name) forget(f->param.name);
    visit(f->kids[0]);
    scopes = saved;
  }

  void visit(const TargetTerm& t) {
    const auto& n = *t;
    switch (n.kind) {
      case TargetKind::Fun: return visit_fun(t);
      case TargetKind::Let: {
        visit(n.kids[0]);
        const auto saved = scopes;
        forget(n.text);
        visit(n.kids[1]);
        scopes = saved;
        return;
      }
      case TargetKind::Comb: break;
      default:
        for (const auto& k : n.kids) visit(k);
        return;
    }
    switch (n.comb) {
      case Combinator::NewScope:
      case Combinator::NewFunscope: {
        const TargetTerm& body = n.kids[0];
        if (body->kind != TargetKind::Fun || body->param.kind != PatternKind::Name) {
          visit(body);
          return;
        }
        const auto saved = scopes;
        forget(body->param.name);
        scopes.push_back({body->param.name, n.comb});
        visit(body->kids[0]);
        scopes = saved;
        return;
      }
      case Combinator::Lam: {
        const auto saved = scopes;
        scopes.clear();
        visit(n.kids[0]);
        scopes = saved;
        return;
      }
      case Combinator::Genlet:
      case Combinator::Genletfun: {
        const Combinator want =
            n.comb == Combinator::Genlet ? Combinator::NewScope : Combinator::NewFunscope;
        const TargetTerm& s = n.kids[0];
        const bool ok = s->kind == TargetKind::Var &&
                        std::any_of(scopes.begin(), scopes.end(), [&](const Available& a) {
                          return a.name == s->text && a.opener == want;
                        });
        if (!ok) {
          problems.push_back(fmt::format("{}:{}: {} is not directly under its {}", n.loc.line,
                                         n.loc.column, combinator_name(n.comb),
                                         combinator_name(want)));
        }
        for (std::size_t i = 1; i < n.kids.size(); ++i) visit(n.kids[i]);
        return;
      }
      default:
        for (const auto& k : n.kids) visit(k);
        return;
    }
  }
};

}  // namespace

TargetTerm translate(const SourceExpr& e) { return Translator(e).level0(e); }

TargetTerm thunk_uses(const TargetTerm& t, const std::string& name) {
  const auto& n = *t;
  switch (n.kind) {
    case TargetKind::Var:
      return n.text == name ? tgt::app(t, tgt::unit(n.loc), n.loc) : t;
    case TargetKind::Fun:
      if (n.param.binds(name)) return t;
      return rebuild(t, {thunk_uses(n.kids[0], name)});
    case TargetKind::Let: {
      TargetTerm rhs = thunk_uses(n.kids[0], name);
      TargetTerm body = n.text == name ? n.kids[1] : thunk_uses(n.kids[1], name);
      return rebuild(t, {std::move(rhs), std::move(body)});
    }
    default: {
      if (n.kids.empty()) return t;
      std::vector<TargetTerm> kids;
      for (const auto& k : n.kids) kids.push_back(thunk_uses(k, name));
      return rebuild(t, std::move(kids));
    }
  }
}

std::vector<std::string> lint_scopes(const TargetTerm& t) {
  Linter l;
  l.visit(t);
  return l.problems;
}

}  // namespace polylet
