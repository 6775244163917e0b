#include "polylet/types.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>

#include "polylet/diagnostic.hpp"

namespace polylet {

namespace ty {

namespace {
Type con(TypeCon c, std::vector<Type> args = {}) {
  auto n = std::make_shared<TypeNode>();
  n->con = c;
  n->args = std::move(args);
  return n;
}
}  // namespace

Type int_() { return con(TypeCon::Int); }
Type str() { return con(TypeCon::Str); }
Type unit() { return con(TypeCon::Unit); }
Type list(Type elem) { return con(TypeCon::List, {std::move(elem)}); }
Type pair(Type a, Type b) { return con(TypeCon::Pair, {std::move(a), std::move(b)}); }
Type arrow(Type from, Type to) { return con(TypeCon::Arrow, {std::move(from), std::move(to)}); }
Type ref(Type cell) { return con(TypeCon::Ref, {std::move(cell)}); }
Type code(Type body) { return con(TypeCon::Code, {std::move(body)}); }
Type scope(Type answer) { return con(TypeCon::Scope, {std::move(answer)}); }
Type funscope(Type answer) { return con(TypeCon::FunScope, {std::move(answer)}); }

}  // namespace ty

Type resolve(const Type& t) {
  if (t->con != TypeCon::Var || !t->link) return t;
  Type root = resolve(t->link);
  t->link = root;
  return root;
}

Type TypeVarSupply::fresh() {
  auto n = std::make_shared<TypeNode>();
  n->con = TypeCon::Var;
  n->id = ++next_;
  return n;
}

TypeScheme mono(Type t) { return TypeScheme{{}, std::move(t)}; }

void TypeEnv::push(std::string name, int level, TypeScheme scheme) {
  entries_.push_back({std::move(name), level, std::move(scheme)});
}

void TypeEnv::pop() { entries_.pop_back(); }

const TypeBinding* TypeEnv::lookup(std::string_view name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->name == name) return &*it;
  }
  return nullptr;
}

namespace {

void collect_vars(const Type& t, std::set<int>& out) {
  const Type r = resolve(t);
  if (r->con == TypeCon::Var) {
    out.insert(r->id);
    return;
  }
  for (const auto& a : r->args) collect_vars(a, out);
}

}  // namespace

std::set<int> free_type_vars(const Type& t) {
  std::set<int> out;
  collect_vars(t, out);
  return out;
}

std::set<int> TypeEnv::free_type_vars() const {
  std::set<int> out;
  for (const auto& b : entries_) {
    std::set<int> vars = polylet::free_type_vars(b.scheme.body);
    for (int q : b.scheme.quantified) vars.erase(q);
    out.insert(vars.begin(), vars.end());
  }
  return out;
}

bool occurs(int id, const Type& t) {
  const Type r = resolve(t);
  if (r->con == TypeCon::Var) return r->id == id;
  return std::any_of(r->args.begin(), r->args.end(), [&](const Type& a) { return occurs(id, a); });
}

void unify(const Type& a, const Type& b) {
  const Type x = resolve(a);
  const Type y = resolve(b);
  if (x == y) return;
  if (x->con == TypeCon::Var && y->con == TypeCon::Var && x->id == y->id) return;
  if (x->con == TypeCon::Var || y->con == TypeCon::Var) {
    const Type& var = x->con == TypeCon::Var ? x : y;
    const Type& other = x->con == TypeCon::Var ? y : x;
    if (occurs(var->id, other)) {
      fail(DiagnosticKind::TypeError,
           fmt::format("occurs check: cannot build the infinite type {} = {}", pretty(var),
                       pretty(other)));
    }
    var->link = other;
    return;
  }
  if (x->con != y->con || x->args.size() != y->args.size()) {
    fail(DiagnosticKind::TypeError,
         fmt::format("type mismatch: {} is not compatible with {}", pretty(x), pretty(y)));
  }
  for (std::size_t i = 0; i < x->args.size(); ++i) unify(x->args[i], y->args[i]);
}

bool types_equal(const Type& a, const Type& b) {
  const Type x = resolve(a);
  const Type y = resolve(b);
  if (x->con != y->con) return false;
  if (x->con == TypeCon::Var) return x->id == y->id;
  for (std::size_t i = 0; i < x->args.size(); ++i) {
    if (!types_equal(x->args[i], y->args[i])) return false;
  }
  return true;
}

namespace {

Type copy_with(const Type& t, const std::map<int, Type>& subst) {
  const Type r = resolve(t);
  if (r->con == TypeCon::Var) {
    auto it = subst.find(r->id);
    return it == subst.end() ? r : it->second;
  }
  if (r->args.empty()) return r;
  auto n = std::make_shared<TypeNode>();
  n->con = r->con;
  for (const auto& a : r->args) n->args.push_back(copy_with(a, subst));
  return n;
}

bool match(const Type& pattern, const Type& target, const std::set<int>& vars,
           std::map<int, Type>& bound) {
  const Type p = resolve(pattern);
  const Type t = resolve(target);
  if (p->con == TypeCon::Var && vars.count(p->id)) {
    auto [it, inserted] = bound.emplace(p->id, t);
    return inserted || types_equal(it->second, t);
  }
  if (p->con != t->con) return false;
  if (p->con == TypeCon::Var) return p->id == t->id;
  for (std::size_t i = 0; i < p->args.size(); ++i) {
    if (!match(p->args[i], t->args[i], vars, bound)) return false;
  }
  return true;
}

}  // namespace

Type instantiate(const TypeScheme& s, TypeVarSupply& supply) {
  if (s.quantified.empty()) return s.body;
  std::map<int, Type> subst;
  for (int q : s.quantified) subst.emplace(q, supply.fresh());
  return copy_with(s.body, subst);
}

bool is_instance(const Type& t, const TypeScheme& s) {
  std::set<int> vars(s.quantified.begin(), s.quantified.end());
  std::map<int, Type> bound;
  return match(s.body, t, vars, bound);
}

std::string_view to_string(Variance v) {
  switch (v) {
    case Variance::Unused: return "unused";
    case Variance::Covariant: return "covariant";
    case Variance::Contravariant: return "contravariant";
    case Variance::Invariant: return "invariant";
  }
  return "?";
}

Variance compose(Variance outer, Variance inner) {
  if (outer == Variance::Unused || inner == Variance::Unused) return Variance::Unused;
  if (outer == Variance::Invariant || inner == Variance::Invariant) return Variance::Invariant;
  if (outer == Variance::Covariant) return inner;
  return inner == Variance::Covariant ? Variance::Contravariant : Variance::Covariant;
}

Variance join(Variance a, Variance b) {
  if (a == Variance::Unused) return b;
  if (b == Variance::Unused || a == b) return a;
  return Variance::Invariant;
}

namespace {

Variance variance_in(int var, const Type& t, Variance position) {
  const Type r = resolve(t);
  switch (r->con) {
    case TypeCon::Var: return r->id == var ? position : Variance::Unused;
    case TypeCon::Int:
    case TypeCon::Str:
    case TypeCon::Unit: return Variance::Unused;
    case TypeCon::List:
    case TypeCon::Code: return variance_in(var, r->args[0], position);
    case TypeCon::Pair:
      return join(variance_in(var, r->args[0], position), variance_in(var, r->args[1], position));
    case TypeCon::Arrow:
      return join(variance_in(var, r->args[0], compose(position, Variance::Contravariant)),
                  variance_in(var, r->args[1], position));
    case TypeCon::Ref:
    case TypeCon::Scope:
    case TypeCon::FunScope:
      return variance_in(var, r->args[0], compose(position, Variance::Invariant));
  }
  return Variance::Unused;
}

struct Printer {
  std::string_view code_word;
  std::set<int> quantified;
  std::map<int, std::string> names;
  int next_general = 0;
  int next_weak = 0;

  std::string var_name(int id) {
    auto it = names.find(id);
    if (it != names.end()) return it->second;
    std::string name;
    if (quantified.count(id)) {
      const int n = next_general++;
      name = "'" + std::string(1, static_cast<char>('a' + n % 26));
      if (n >= 26) name += std::to_string(n / 26);
    } else {
      name = "'_weak" + std::to_string(++next_weak);
    }
    names.emplace(id, name);
    return name;
  }

  // prec: 0 arrow position, 1 tuple component, 2 constructor argument
  std::string print(const Type& t, int prec) {
    const Type r = resolve(t);
    auto wrap = [&](std::string s, int needed) { return prec > needed ? "(" + s + ")" : s; };
    switch (r->con) {
      case TypeCon::Var: return var_name(r->id);
      case TypeCon::Int: return "int";
      case TypeCon::Str: return "string";
      case TypeCon::Unit: return "unit";
      case TypeCon::List: return print(r->args[0], 2) + " list";
      case TypeCon::Ref: return print(r->args[0], 2) + " ref";
      case TypeCon::Code: return print(r->args[0], 2) + " " + std::string(code_word);
      case TypeCon::Scope: return print(r->args[0], 2) + " scope";
      case TypeCon::FunScope: return print(r->args[0], 2) + " funscope";
      case TypeCon::Pair: {
        std::string a = print(r->args[0], 2);
        return wrap(a + " * " + print(r->args[1], 2), 1);
      }
      case TypeCon::Arrow: {
        std::string a = print(r->args[0], 1);
        return wrap(a + " -> " + print(r->args[1], 0), 0);
      }
    }
    return "?";
  }
};

}  // namespace

Variance variance_of(int var, const Type& t) { return variance_in(var, t, Variance::Covariant); }

std::string pretty(const Type& t, std::string_view code_word) {
  Printer p{code_word, {}, {}, 0, 0};
  for (int id : free_type_vars(t)) p.quantified.insert(id);
  return p.print(t, 0);
}

std::string pretty(const TypeScheme& s, std::string_view code_word) {
  Printer p{code_word, {s.quantified.begin(), s.quantified.end()}, {}, 0, 0};
  return p.print(s.body, 0);
}

}  // namespace polylet
