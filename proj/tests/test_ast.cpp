#include <gtest/gtest.h>

#include "polylet/ast.hpp"
#include "polylet/parser.hpp"

using namespace polylet;

namespace {

std::set<std::string> fv(std::string_view text) { return free_vars(parse_source(text)); }

bool alpha(std::string_view a, std::string_view b) { return alpha_equal(parse_source(a), parse_source(b)); }

}  // namespace

TEST(FreeVars, ClosedFunction) { EXPECT_TRUE(fv("fun x -> x").empty()); }

TEST(FreeVars, ExtrudedVariable) {
  EXPECT_EQ(fv("let y = x + 2 in fun x -> x + y"), std::set<std::string>{"x"});
}

TEST(FreeVars, PairOfConses) { EXPECT_EQ(fv("(2 :: x, \"3\" :: x)"), std::set<std::string>{"x"}); }

TEST(FreeVars, LetBinderNotFreeInBody) {
  EXPECT_TRUE(fv("let x = 1 in x").empty());
  EXPECT_EQ(fv("let x = x in x"), std::set<std::string>{"x"});
}

TEST(FreeVars, TargetTerm) {
  TargetTerm t = parse_target("new_scope @@ fun p -> lam (fun x -> add x (genlet p y))");
  EXPECT_EQ(free_vars(t), std::set<std::string>{"y"});
}

TEST(AlphaEqual, RenamedBinders) {
  EXPECT_TRUE(alpha("fun x_1 -> fun x_2 -> x_1", "fun y_3 -> fun x_4 -> y_3"));
}

TEST(AlphaEqual, Reflexive) {
  const char* text = "let f = fun x -> x in (f 2, f \"3\")";
  EXPECT_TRUE(alpha(text, text));
}

TEST(AlphaEqual, DistinctBindingStructure) {
  EXPECT_FALSE(alpha("fun x -> fun y -> x", "fun x -> fun y -> y"));
}

TEST(AlphaEqual, FreeVariablesMustMatchByName) {
  EXPECT_FALSE(alpha("fun x -> y", "fun x -> z"));
  EXPECT_TRUE(alpha("fun x -> y", "fun z -> y"));
}

TEST(AlphaEqual, ShadowingIsRespected) {
  EXPECT_TRUE(alpha("fun x -> fun x -> x", "fun a -> fun b -> b"));
  EXPECT_FALSE(alpha("fun x -> fun x -> x", "fun a -> fun b -> a"));
}

TEST(AlphaEqual, LetBinders) {
  EXPECT_TRUE(alpha("let t_1 = [] in (2 :: t_1, \"3\" :: t_1)", "let x = [] in (2 :: x, \"3\" :: x)"));
  EXPECT_FALSE(alpha("let t = 1 in t", "let t = 1 in 1"));
}

TEST(AlphaEqual, UnitPatternIsNotABinder) {
  EXPECT_TRUE(alpha("fun () -> 1", "fun () -> 1"));
  EXPECT_FALSE(alpha("fun () -> 1", "fun x -> 1"));
}

TEST(Pretty, FunctionBody) {
  EXPECT_EQ(pretty(src::fun("x", src::add(src::var("x"), src::int_lit(1)))), "fun x -> (x + 1)");
}

TEST(Pretty, Bracket) { EXPECT_EQ(pretty(src::bracket(src::add(src::int_lit(1), src::int_lit(2)))), ".<(1 + 2)>."); }

TEST(Pretty, HostLet) {
  TargetTerm t = tgt::let("t_1", tgt::int_lit(1), tgt::var("t_1"));
  EXPECT_EQ(pretty(t), "let t_1 = 1 in t_1");
}

TEST(Pretty, StringEscapes) {
  EXPECT_EQ(quote_string("a\"b\\c\n"), "\"a\\\"b\\\\c\\n\"");
  EXPECT_EQ(pretty(src::str_lit("tab\there")), "\"tab\\there\"");
}

TEST(Pretty, NegativeLiteralReparses) {
  SourceExpr e = src::add(src::int_lit(-3), src::int_lit(4));
  EXPECT_TRUE(alpha_equal(parse_source(pretty(e)), e));
}

TEST(Pretty, RoundTripsThroughParser) {
  for (const char* text : {
           "let x = [1] in (2 :: x, 3 :: x)",
           ".<fun x -> .~(let body = .<x>. in .<fun x -> .~body>.)>.",
           ".<let f = fun () -> ref [] in (rset (f ()) 2, rset (f ()) \"3\")>.",
           "fun x -> .<fun y -> (y + 1) :: .~x>.",
           ".<fun x -> .~(let y = 1 + 2 in .<%y>.) + x>.",
           "(fun f -> f 1) (fun _ -> !(ref 2))",
           "f (g x) (h y)",
       }) {
    SourceExpr e = parse_source(text);
    SourceExpr again = parse_source(pretty(e));
    EXPECT_TRUE(alpha_equal(e, again)) << text << " printed as " << pretty(e);
    EXPECT_EQ(free_vars(e), free_vars(again)) << text;
  }
}

TEST(Pretty, TargetRoundTrip) {
  const char* text =
      "new_funscope @@ fun p -> let f = fun () -> genletfun p (fun x -> x) in "
      "pair (app (f ()) (int 1)) (app (f ()) (str \"3\"))";
  TargetTerm t = parse_target(text);
  EXPECT_TRUE(alpha_equal(parse_target(pretty(t)), t)) << pretty(t);
}

TEST(Ast, NodeCountAndStaging) {
  SourceExpr e = parse_source(".<1 + .~(.<2>.)>.");
  EXPECT_EQ(node_count(e), 6u);
  EXPECT_TRUE(contains_staging(e));
  EXPECT_TRUE(contains_bracket(e));
  EXPECT_FALSE(contains_staging(parse_source("1 + 2")));
}

TEST(Ast, CombinatorTable) {
  EXPECT_EQ(combinator_name(Combinator::Ref), "ref_");
  EXPECT_EQ(combinator_from_name("genletfun"), Combinator::Genletfun);
  EXPECT_EQ(combinator_arity(Combinator::Genlet), 2);
  EXPECT_EQ(combinator_arity(Combinator::Nil), 0);
  EXPECT_FALSE(combinator_from_name("let_").has_value());
}
