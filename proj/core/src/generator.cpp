#include "polylet/generator.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "polylet/parser.hpp"
#include "polylet/typecheck.hpp"

namespace polylet {

namespace {
const char* const kNames[] = {"a", "b", "c", "f", "g"};
}

struct ProgramGenerator::Scope {
  struct Entry {
    std::string name;
    Ty type;
    int level;     // 0 entries are code-typed (level 0 code) or ground
    bool code;     // level 0 only
    bool poly_id;  // level 1 `fun a -> a`
  };
  std::vector<Entry> entries;

  Scope with(Entry e) const {
    Scope s;
    for (const auto& x : entries) {
      if (x.name != e.name) s.entries.push_back(x);
    }
    s.entries.push_back(std::move(e));
    return s;
  }

  std::vector<const Entry*> find(Ty t, int level, bool code) const {
    std::vector<const Entry*> out;
    for (const auto& e : entries) {
      if (!e.poly_id && e.type == t && e.level == level && e.code == code) out.push_back(&e);
    }
    return out;
  }

  std::vector<const Entry*> polys() const {
    std::vector<const Entry*> out;
    for (const auto& e : entries) {
      if (e.poly_id) out.push_back(&e);
    }
    return out;
  }
};

ProgramGenerator::ProgramGenerator(std::uint64_t seed, std::size_t max_nodes)
    : rng_(seed), max_nodes_(max_nodes) {}

int ProgramGenerator::pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

bool ProgramGenerator::chance(int percent) { return pick(100) < percent; }

ProgramGenerator::Ty ProgramGenerator::random_type() { return static_cast<Ty>(pick(5)); }

ProgramGenerator::Ty ProgramGenerator::random_ground() { return static_cast<Ty>(pick(4)); }

std::string ProgramGenerator::fresh_name(const Scope&) { return kNames[pick(5)]; }

SourceExpr ProgramGenerator::literal(Ty t) {
  switch (t) {
    case Ty::Int: return src::int_lit(pick(10));
    case Ty::Str: return src::str_lit(std::string(1, static_cast<char>('a' + pick(3))));
    case Ty::IntList: return chance(50) ? src::nil() : src::cons(src::int_lit(pick(10)), src::nil());
    case Ty::PairIS: return src::pair(literal(Ty::Int), literal(Ty::Str));
    case Ty::IntToInt: break;
  }
  return src::fun("a", src::var("a"));
}

SourceExpr ProgramGenerator::next() {
  for (;;) {
    ++attempts_;
    budget_ = static_cast<int>(max_nodes_) - 2;
    depth_ = 0;
    SourceExpr e = src::bracket(future(random_type(), Scope{}));
    if (node_count(e) > max_nodes_) continue;
    try {
      validate_source(e);
      infer_staged({}, e, 0);
    } catch (const Error&) {
      continue;
    }
    return e;
  }
}

// Level-1 term of type t.
SourceExpr ProgramGenerator::future(Ty t, const Scope& sc) {
  --budget_;
  Depth d(depth_);
  const bool small = budget_ <= 0 || chance(depth_ * 15 - 10);
  auto leaf = [&]() -> SourceExpr {
    auto vars = sc.find(t, 1, false);
    if (!vars.empty() && chance(60)) return src::var(vars[pick(static_cast<int>(vars.size()))]->name);
    if (t == Ty::IntToInt) {
      const std::string x = fresh_name(sc);
      return src::fun(x, chance(50) ? src::var(x) : src::add(src::var(x), literal(Ty::Int)));
    }
    return literal(t);
  };
  if (small) return leaf();

  switch (pick(10)) {
    case 0:
    case 1: {  // let, possibly a polymorphic function let
      const std::string x = fresh_name(sc);
      if (chance(30) && t != Ty::IntToInt) {
        Scope inner = sc.with({x, Ty::Int, 1, false, true});
        SourceExpr body = future(t, inner);
        const std::string y = fresh_name(sc);
        SourceExpr rhs = src::fun(y, src::var(y));
        if (!free_vars(body).count(x)) return body;
        return src::let(x, rhs, body);
      }
      const Ty s = random_type();
      SourceExpr rhs = future(s, sc);
      SourceExpr body = future(t, sc.with({x, s, 1, false, false}));
      if (rhs->kind == SourceKind::Fun && !free_vars(body).count(x)) return body;
      return src::let(x, rhs, body);
    }
    case 2:
    case 3:  // escape
      return src::escape(present_code(t, sc));
    case 4:
      if (t != Ty::IntToInt && t != Ty::PairIS) return src::csp(present_ground(t, sc));
      return leaf();
    case 5: {  // application
      auto polys = sc.polys();
      if (!polys.empty() && t != Ty::IntToInt && chance(50)) {
        return src::app(src::var(polys[pick(static_cast<int>(polys.size()))]->name), future(t, sc));
      }
      if (t == Ty::Int) return src::app(future(Ty::IntToInt, sc), future(Ty::Int, sc));
      return leaf();
    }
    default: break;
  }
  switch (t) {
    case Ty::Int:
      if (chance(15)) return src::ref_get(src::ref_new(future(Ty::Int, sc)));
      return src::add(future(Ty::Int, sc), future(Ty::Int, sc));
    case Ty::Str: return leaf();
    case Ty::IntList: return src::cons(future(Ty::Int, sc), future(Ty::IntList, sc));
    case Ty::PairIS: return src::pair(future(Ty::Int, sc), future(Ty::Str, sc));
    case Ty::IntToInt: {
      const std::string x = fresh_name(sc);
      return src::fun(x, future(Ty::Int, sc.with({x, Ty::Int, 1, false, false})));
    }
  }
  return leaf();
}

// Level-0 expression of type `t code`.
SourceExpr ProgramGenerator::present_code(Ty t, const Scope& sc) {
  --budget_;
  Depth d(depth_);
  auto vars = sc.find(t, 0, true);
  if (!vars.empty() && chance(50)) return src::var(vars[pick(static_cast<int>(vars.size()))]->name);
  if (budget_ > 4 && chance(30)) {
    const std::string x = fresh_name(sc);
    const Ty s = random_type();
    SourceExpr rhs = present_code(s, sc);
    return src::let(x, rhs, present_code(t, sc.with({x, s, 0, true, false})));
  }
  return src::bracket(future(t, sc));
}

// Level-0 ground expression, for CSP.
SourceExpr ProgramGenerator::present_ground(Ty t, const Scope& sc) {
  --budget_;
  auto vars = sc.find(t, 0, false);
  if (!vars.empty() && chance(50)) return src::var(vars[pick(static_cast<int>(vars.size()))]->name);
  if (budget_ > 0 && t == Ty::Int && chance(40)) {
    return src::add(present_ground(Ty::Int, sc), present_ground(Ty::Int, sc));
  }
  if (budget_ > 2 && chance(20)) {
    const std::string x = fresh_name(sc);
    const Ty s = random_ground();
    SourceExpr rhs = present_ground(s, sc);
    return src::let(x, rhs, present_ground(t, sc.with({x, s, 0, false, false})));
  }
  return literal(t);
}

}  // namespace polylet
