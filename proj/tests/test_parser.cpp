#include <gtest/gtest.h>

#include "polylet/parser.hpp"

using namespace polylet;

namespace {

DiagnosticKind parse_error_kind(std::string_view text) {
  try {
    parse_source(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return DiagnosticKind::RuntimeError;
}

std::string parse_message(std::string_view text) {
  try {
    parse_source(text);
  } catch (const Error& e) {
    return e.diagnostic().message;
  }
  return {};
}

}  // namespace

TEST(Parser, Precedence) {
  // application > :: > +
  EXPECT_EQ(pretty(parse_source("f x :: y + 1")), "((f x :: y) + 1)");
  EXPECT_EQ(pretty(parse_source("1 :: 2 :: []")), "(1 :: (2 :: []))");
  EXPECT_EQ(pretty(parse_source("1 + 2 + 3")), "((1 + 2) + 3)");
}

TEST(Parser, ListLiteral) {
  EXPECT_TRUE(alpha_equal(parse_source("[1; 2; 3]"), parse_source("1 :: 2 :: 3 :: []")));
  EXPECT_TRUE(alpha_equal(parse_source("[]"), src::nil()));
  EXPECT_TRUE(alpha_equal(parse_source("ref [1]"), src::ref_new(src::cons(src::int_lit(1), src::nil()))));
}

TEST(Parser, Comments) {
  EXPECT_EQ(pretty(parse_source("(* a (* nested *) comment *) 1 + (* x *) 2")), "(1 + 2)");
}

TEST(Parser, RsetTakesTwoArguments) {
  SourceExpr e = parse_source("rset x 2");
  EXPECT_EQ(e->kind, SourceKind::Rset);
  EXPECT_EQ(e->kids.size(), 2u);
}

TEST(Parser, StagedForms) {
  SourceExpr e = parse_source(".<fun x -> .~c + %y>.");
  ASSERT_EQ(e->kind, SourceKind::Bracket);
  EXPECT_EQ(pretty(e), ".<fun x -> (.~c + %y)>.");
}

TEST(Parser, RejectsNestedBracket) {
  EXPECT_EQ(parse_error_kind(".<.<1>.>."), DiagnosticKind::ParseError);
  EXPECT_NE(parse_message(".<.<1>.>.").find("nested bracket"), std::string::npos);
}

TEST(Parser, BracketInsideEscapeIsFine) { EXPECT_NO_THROW(parse_source(".<1 + .~(.<2>.)>.")); }

TEST(Parser, RejectsEscapeAndCspAtLevelZero) {
  EXPECT_EQ(parse_error_kind(".~x"), DiagnosticKind::ParseError);
  EXPECT_EQ(parse_error_kind("%x"), DiagnosticKind::ParseError);
  EXPECT_EQ(parse_error_kind(".<.~(%x)>."), DiagnosticKind::ParseError);
}

TEST(Parser, ErrorLocation) {
  try {
    parse_source("let x = 1 in\n  (x, )");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.diagnostic().loc.line, 2);
    EXPECT_EQ(e.diagnostic().loc.column, 7);
  }
}

TEST(Parser, Truncated) {
  EXPECT_EQ(parse_error_kind("let x = 1 in"), DiagnosticKind::ParseError);
  EXPECT_EQ(parse_error_kind("\"open"), DiagnosticKind::ParseError);
  EXPECT_EQ(parse_error_kind("(1, 2, 3)"), DiagnosticKind::ParseError);
}

TEST(Parser, PlainRejectsStaging) {
  EXPECT_THROW(parse_plain(".<1>."), Error);
  EXPECT_NO_THROW(parse_plain("let t_1 = (1 + 2) in fun x_2 -> (x_2 + t_1)"));
}

TEST(Parser, TargetSyntax) {
  TargetTerm t = parse_target("new_scope @@ fun p -> let x = genlet p nil in pair (cons (int 2) x) (cons (str \"3\") x)");
  ASSERT_EQ(t->kind, TargetKind::Comb);
  EXPECT_EQ(t->comb, Combinator::NewScope);
  EXPECT_EQ(pretty(t),
            "new_scope (fun p -> let x = genlet p nil in pair (cons (int 2) x) (cons (str \"3\") x))");
}

TEST(Parser, TargetUnitCodeBinder) {
  TargetTerm t = parse_target("lam (fun (_ : unit cod) -> csp ())");
  ASSERT_EQ(t->kids[0]->kind, TargetKind::Fun);
  EXPECT_EQ(t->kids[0]->param.kind, PatternKind::UnitCode);
}

TEST(Parser, TargetCombinatorNeedsArguments) {
  EXPECT_THROW(parse_target("genlet p"), Error);
  EXPECT_TRUE(alpha_equal(parse_target("f @@ g @@ 1"), parse_target("f (g 1)")));
  EXPECT_THROW(parse_source("f @@ x"), Error);
}

TEST(Parser, UsesCombinators) {
  EXPECT_TRUE(uses_combinators(parse_source("lam (fun x -> x)")));
  EXPECT_FALSE(uses_combinators(parse_source("fun lam -> lam")));
  EXPECT_FALSE(uses_combinators(parse_source(".<fun x -> x>.")));
}

TEST(Parser, ValidateSource) {
  EXPECT_NO_THROW(validate_source(parse_source(".<fun x -> .~(.<x>.)>.")));
  EXPECT_THROW(validate_source(src::escape(src::var("x"))), Error);
  EXPECT_THROW(validate_source(src::bracket(src::bracket(src::int_lit(1)))), Error);
  EXPECT_THROW(validate_source(src::fun("", src::int_lit(1))), Error);
}
