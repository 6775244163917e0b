#include <gtest/gtest.h>

#include "polylet/engine.hpp"
#include "polylet/parser.hpp"
#include "polylet/unstage.hpp"

using namespace polylet;

namespace {

std::string run(std::string_view text) {
  Session s;
  return show_value(s.eval(parse_target(text), control_primitives()));
}

}  // namespace

TEST(Engine, Basics) {
  EXPECT_EQ(run("let x = [1] in (2 :: x, 3 :: x)"), "([2; 1], [3; 1])");
  EXPECT_EQ(run("(fun x -> x + 1) 41"), "42");
  EXPECT_EQ(run("let r = ref 1 in !r"), "1");
  EXPECT_EQ(run("\"a\""), "\"a\"");
}

TEST(Engine, ArgumentsRightToLeft) {
  Session s;
  Value v = s.eval(translate(parse_source("let x = ref [1] in (rset x 2, rset x 3)")));
  EXPECT_EQ(show_value(v), "([2; 3; 1], [3; 1])");
}

TEST(Control, SingleShot) {
  EXPECT_EQ(run("let p = new_prompt () in push_prompt p (fun () -> 1 + shift0 p (fun k -> k 10))"), "11");
}

TEST(Control, MultiShot) {
  EXPECT_EQ(run("let p = new_prompt () in push_prompt p (fun () -> 1 + shift0 p (fun k -> k (k 10)))"), "12");
}

TEST(Control, AbortDiscardsContinuation) {
  EXPECT_EQ(run("let p = new_prompt () in push_prompt p (fun () -> 1 + shift0 p (fun k -> 7))"), "7");
}

TEST(Control, NestedPrompts) {
  EXPECT_EQ(run("let p = new_prompt () in let q = new_prompt () in "
                "push_prompt p (fun () -> 100 + push_prompt q (fun () -> 10 + shift0 p (fun k -> k 1)))"),
            "111");
}

TEST(Control, MissingPrompt) {
  EXPECT_THROW(run("let p = new_prompt () in shift0 p (fun k -> 1)"), Error);
}

TEST(Session, Gensym) {
  Session s(BackendId::String, 10);
  EXPECT_EQ(s.gensym("x"), "x_11");
  EXPECT_EQ(s.gensym("t"), "t_12");
}

TEST(Session, DynamicEnvironment) {
  Session s;
  const int a = s.dnew();
  EXPECT_THROW(s.dref(a), Error);
  try {
    s.dref(a);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), DiagnosticKind::ScopeExtrusion);
  }
  Value inner = s.dlet(s.denv_get(), a, make_int(5), [&] { return s.dref(a); });
  EXPECT_EQ(show_value(inner), "5");
  EXPECT_THROW(s.dref(a), Error);
}

TEST(Session, DletRestoresOnThrow) {
  Session s;
  const int a = s.dnew();
  EXPECT_THROW(s.dlet(s.denv_get(), a, make_int(1), [&]() -> Value { fail(DiagnosticKind::RuntimeError, "x"); }),
               Error);
  EXPECT_TRUE(s.denv_get().empty());
}

TEST(Values, RsetRuntime) {
  Value cell = make_cell(make_list({}));
  EXPECT_EQ(show_value(rset_runtime(cell, make_int(2))), "[2]");
  EXPECT_EQ(show_value(rset_runtime(cell, make_int(3))), "[3; 2]");
  try {
    rset_runtime(cell, make_str("3"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), DiagnosticKind::SoundnessViolation);
  }
}

TEST(Values, Show) {
  EXPECT_EQ(show_value(make_pair(make_list({make_int(2), make_int(3)}), make_str("a"))), "([2; 3], \"a\")");
  EXPECT_EQ(show_value(make_unit()), "()");
  EXPECT_TRUE(is_ground(make_list({make_int(1)})));
  EXPECT_FALSE(is_ground(make_cell(make_int(1))));
}
