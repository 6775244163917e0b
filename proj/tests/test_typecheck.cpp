#include <gtest/gtest.h>

#include <map>
#include <regex>

#include "polylet/parser.hpp"
#include "polylet/typecheck.hpp"
#include "polylet/unstage.hpp"

using namespace polylet;

namespace {

std::string staged(std::string_view text, GenPolicy p = GenPolicy::Relaxed) {
  try {
    return pretty(infer_staged({}, parse_source(text), 0, p));
  } catch (const Error& e) {
    return std::string("reject: ") + std::string(to_string(e.kind()));
  }
}

std::string host(std::string_view text, GenPolicy p = GenPolicy::Relaxed) {
  try {
    return pretty(infer_host({}, parse_target(text), p), "cod");
  } catch (const Error& e) {
    return std::string("reject: ") + std::string(to_string(e.kind()));
  }
}

std::string translated(std::string_view text) {
  try {
    return pretty(infer_host({}, translate(parse_source(text))), "cod");
  } catch (const Error& e) {
    return std::string("reject: ") + std::string(to_string(e.kind()));
  }
}

std::string rename_vars(const std::string& t) {
  static const std::regex var("'_?[a-z0-9]+");
  std::map<std::string, std::string> seen;
  std::string out;
  auto it = std::sregex_iterator(t.begin(), t.end(), var);
  std::size_t last = 0;
  for (; it != std::sregex_iterator(); ++it) {
    out += t.substr(last, it->position() - last);
    auto [pos, fresh] = seen.emplace(it->str(), "'v" + std::to_string(seen.size()));
    out += pos->second;
    last = it->position() + it->length();
  }
  return out + t.substr(last);
}

const char* kReject = "reject: TypeError";

}  // namespace

TEST(Staged, LetPolymorphism) {
  EXPECT_EQ(staged("let x = [1] in (2 :: x, 3 :: x)"), "int list * int list");
  EXPECT_EQ(staged("let x = [] in (2 :: x, \"3\" :: x)"), "int list * string list");
  EXPECT_EQ(staged("let f = fun x -> x in (f 2, f \"3\")"), "int * string");
}

TEST(Staged, LambdaBindingsAreMonomorphic) {
  EXPECT_EQ(staged("(fun x -> (2 :: x, \"3\" :: x)) []"), kReject);
}

TEST(Staged, ValueRestriction) {
  EXPECT_EQ(staged("let x = ref [] in (rset x 2, rset x \"3\")"), kReject);
  EXPECT_EQ(staged("let x = ref [] in (rset x 2, rset x 3)"), "int list * int list");
}

TEST(Staged, RelaxedValueRestriction) {
  const char* text = "let x = let r = ref [] in !r in (2 :: x, \"3\" :: x)";
  EXPECT_EQ(staged(text, GenPolicy::StrictValue), kReject);
  EXPECT_EQ(staged(text, GenPolicy::NonExpansive), kReject);
  EXPECT_EQ(staged(text, GenPolicy::Relaxed), "int list * string list");
}

TEST(Staged, RelaxedKeepsInvariantVariablesMonomorphic) {
  EXPECT_EQ(staged("let f = (fun u -> fun x -> x) 0 in (f 1, f \"a\")"), kReject);
  EXPECT_EQ(staged("let f = (fun u -> fun x -> x) 0 in (f 1, f 2)"), "int * int");
}

TEST(Staged, NonExpansiveAdmitsBrackets) {
  const char* text = "let c = .<[]>. in (.<2 :: .~c>., .<\"3\" :: .~c>.)";
  EXPECT_EQ(staged(text, GenPolicy::StrictValue), kReject);
  EXPECT_EQ(staged(text, GenPolicy::NonExpansive), "int list code * string list code");
}

TEST(Staged, Brackets) {
  EXPECT_EQ(staged(".<1 + 2>."), "int code");
  EXPECT_EQ(staged("let c = .<1 + 2>. in .<fun x -> .~c + x>."), "(int -> int) code");
  EXPECT_EQ(staged(".<fun x -> .~(let body = .<x>. in .<fun x -> .~body>.)>."), "('a -> 'b -> 'a) code");
  EXPECT_EQ(staged("fun x -> .<fun y -> (y + 1) :: .~x>."), "int list code -> (int -> int list) code");
}

TEST(Staged, QuotedLets) {
  EXPECT_EQ(staged(".<let x = [] in (2 :: x, \"3\" :: x)>."), "(int list * string list) code");
  EXPECT_EQ(staged(".<let f = fun x -> x in (f 2, f \"3\")>."), "(int * string) code");
  EXPECT_EQ(staged(".<let x = ref [] in (rset x 2, rset x \"3\")>."), kReject);
  EXPECT_EQ(staged(".<let f = fun () -> ref [] in (rset (f ()) 2, rset (f ()) \"3\")>."),
            "(int list * string list) code");
  EXPECT_EQ(staged(".<let f = let r = ref [] in fun x -> rset r x in (f 1, f \"3\")>."), kReject);
}

TEST(Staged, LiftedCellIsAccepted) {
  EXPECT_EQ(staged("let lift = fun v -> .<%v>. in "
                   ".<let f = fun () -> .~(lift (ref [])) in (rset (f ()) 2, rset (f ()) \"3\")>."),
            "(int list * string list) code");
}

TEST(Staged, Levels) {
  // a level-0 variable used inside a bracket needs an explicit %
  EXPECT_EQ(staged("let y = 1 in .<y>."), kReject);
  EXPECT_EQ(staged("let y = 1 in .<%y>."), "int code");
  // a level-1 variable cannot be used by the generator
  EXPECT_EQ(staged(".<fun x -> .~(x)>."), kReject);
  EXPECT_EQ(staged(".<fun x -> .~(let a = x in .<1>.)>."), kReject);
  EXPECT_EQ(staged(".<.~(1)>."), kReject);
}

TEST(Staged, UnboundVariable) {
  EXPECT_EQ(staged("x + 1"), "reject: UnboundVar");
}

TEST(Staged, ErrorMessageNamesTypes) {
  try {
    infer_staged({}, parse_source("1 + \"a\""), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(e.diagnostic().message.find("int"), std::string::npos);
    EXPECT_NE(e.diagnostic().message.find("string"), std::string::npos);
    EXPECT_EQ(e.diagnostic().loc.column, 5);
  }
}

TEST(Host, CombinatorSchemes) {
  EXPECT_EQ(pretty(combinator_scheme(Combinator::Lam), "cod"), "('a cod -> 'b cod) -> ('a -> 'b) cod");
  EXPECT_EQ(pretty(combinator_scheme(Combinator::Genlet), "cod"), "'a scope -> 'b cod -> 'b cod");
  EXPECT_EQ(pretty(combinator_scheme(Combinator::Genletfun), "cod"),
            "'a funscope -> ('b cod -> 'c cod) -> ('b -> 'c) cod");
  EXPECT_EQ(pretty(combinator_scheme(Combinator::Rset), "cod"), "'a list ref cod -> 'a cod -> 'a list cod");
}

TEST(Host, LetInsertionMatrix) {
  EXPECT_EQ(host("new_scope @@ fun p -> let x = genlet p nil in pair (cons (int 2) x) (cons (str \"3\") x)"),
            "(int list * string list) cod");
  EXPECT_EQ(host("new_scope @@ fun p -> let x = genlet p (ref_ nil) in pair (rset x (int 2)) (rset x (str \"3\"))"),
            kReject);
  EXPECT_EQ(host("new_scope @@ fun p -> let f = genlet p (lam (fun x -> x)) in pair (app f (int 1)) (app f (str \"3\"))"),
            kReject);
  EXPECT_EQ(host("new_funscope @@ fun p -> let f = fun () -> genletfun p (fun x -> x) in "
                 "pair (app (f ()) (int 1)) (app (f ()) (str \"3\"))"),
            "(int * string) cod");
  EXPECT_EQ(host("new_scope @@ fun p -> let f = fun () -> genlet p (lam (fun x -> x)) in "
                 "pair (app (f ()) (int 1)) (app (f ()) (str \"3\"))"),
            "(int * string) cod");
}

TEST(Host, ScopeKindsDoNotMix) {
  EXPECT_EQ(host("new_scope @@ fun p -> genletfun p (fun x -> x)"), kReject);
  EXPECT_EQ(host("new_funscope @@ fun p -> genlet p (int 1)"), kReject);
}

TEST(Host, PolicyAppliesToHostLets) {
  const char* text = "let x = (fun u -> nil) () in pair (cons (int 2) x) (cons (str \"3\") x)";
  EXPECT_EQ(host(text, GenPolicy::Relaxed), "(int list * string list) cod");
  EXPECT_EQ(host(text, GenPolicy::StrictValue), kReject);
}

TEST(Preservation, TranslationsOfAcceptedPrograms) {
  for (const char* text : {
           ".<let x = [] in (2 :: x, \"3\" :: x)>.",
           ".<let f = fun x -> x in (f 2, f \"3\")>.",
           ".<let f = fun () -> ref [] in (rset (f ()) 2, rset (f ()) \"3\")>.",
           "let c = .<1 + 2>. in .<fun x -> .~c + x>.",
           ".<fun x -> .~(let body = .<x>. in .<fun x -> .~body>.)>.",
           "let lift = fun v -> .<%v>. in "
           ".<let f = fun () -> .~(lift (ref [])) in (rset (f ()) 2, rset (f ()) \"3\")>.",
       }) {
    const std::string s = staged(text);
    std::string h = translated(text);
    EXPECT_NE(s.rfind("reject", 0), 0u) << text;
    // code becomes cod; a top-level combinator application may stay weak
    for (auto pos = h.find("cod"); pos != std::string::npos; pos = h.find("cod", pos + 4)) h.insert(pos + 3, "e");
    EXPECT_EQ(rename_vars(h), rename_vars(s)) << text;
  }
}

TEST(Preservation, TranslationsOfRejectedPrograms) {
  EXPECT_EQ(translated(".<let x = ref [] in (rset x 2, rset x \"3\")>."), kReject);
  EXPECT_EQ(translated(".<let f = let r = ref [] in fun x -> rset r x in (f 1, f \"3\")>."), kReject);
}

TEST(Replay, RecordedDerivationIsConsistent) {
  for (const char* text : {
           "let x = [] in (2 :: x, \"3\" :: x)",
           ".<let f = fun x -> x in (f 2, f \"3\")>.",
           "let x = let r = ref [] in !r in (2 :: x, \"3\" :: x)",
           ".<fun x -> .~(let body = .<x>. in .<fun x -> .~body>.)>.",
       }) {
    SourceExpr e = parse_source(text);
    StagedTyping typing = infer_staged_recorded({}, e, 0);
    EXPECT_EQ(replay_staged({}, e, 0, typing), "") << text;
  }
}

TEST(Replay, DetectsTamperedScheme) {
  SourceExpr e = parse_source("let x = ref [] in rset x 2");
  StagedTyping typing = infer_staged_recorded({}, e, 0);
  ASSERT_EQ(typing.let_schemes.size(), 1u);
  auto& scheme = typing.let_schemes.begin()->second;
  // claim the cell type was generalized
  TypeVarSupply s;
  Type a = s.fresh();
  scheme = TypeScheme{{resolve(a)->id}, ty::ref(ty::list(a))};
  EXPECT_NE(replay_staged({}, e, 0, typing), "");
}

TEST(Syntax, ValuesAndNonExpansive) {
  EXPECT_TRUE(is_value(parse_source("fun x -> ref x")));
  EXPECT_TRUE(is_value(parse_source("(1, [])")));
  EXPECT_FALSE(is_value(parse_source("ref []")));
  EXPECT_FALSE(is_value(parse_source(".<1>.")));
  EXPECT_TRUE(is_nonexpansive(parse_source(".<ref []>.")));
  EXPECT_FALSE(is_nonexpansive(parse_source("f 1")));
  EXPECT_TRUE(is_value(parse_target("nil")));
  EXPECT_FALSE(is_value(parse_target("int 1")));
}

TEST(Policy, Names) {
  EXPECT_EQ(gen_policy_from_name("value"), GenPolicy::StrictValue);
  EXPECT_EQ(gen_policy_from_name("nonexpansive"), GenPolicy::NonExpansive);
  EXPECT_EQ(gen_policy_from_name("relaxed"), GenPolicy::Relaxed);
  EXPECT_FALSE(gen_policy_from_name("loose").has_value());
}
