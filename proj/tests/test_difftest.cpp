#include <gtest/gtest.h>

#include <sstream>

#include "polylet/corpus.hpp"
#include "polylet/difftest.hpp"
#include "polylet/generator.hpp"
#include "polylet/parser.hpp"
#include "polylet/reference.hpp"
#include "polylet/typecheck.hpp"
#include "polylet/value.hpp"

using namespace polylet;

TEST(Corpus, EveryCheckPasses) {
  for (const auto& e : corpus()) {
    for (const auto& c : check_corpus_entry(e)) {
      EXPECT_TRUE(c.result.ok()) << e.name << "/" << c.name << ": " << c.result.detail;
    }
  }
}

TEST(Corpus, Lookup) {
  EXPECT_EQ(corpus_entry("splice_sum").result, "5");
  EXPECT_THROW(corpus_entry("nope"), std::out_of_range);
}

TEST(Checks, Preservation) {
  EXPECT_EQ(check_typing_preservation(parse_source(".<let f = fun x -> x in (f 2, f \"3\")>.")).verdict,
            Verdict::Pass);
  EXPECT_EQ(check_typing_preservation(parse_source(known_divergences()[0].text)).verdict,
            Verdict::KnownDivergence);
  EXPECT_EQ(check_typing_preservation(parse_source(known_divergences()[1].text)).verdict,
            Verdict::KnownDivergence);
}

TEST(Checks, RoundTrip) {
  EXPECT_EQ(check_round_trip(parse_source(".<let y = 1 + 2 in fun x -> x + y>.")).verdict, Verdict::Pass);
  EXPECT_EQ(check_round_trip(parse_source("let c = .<1 + 2>. in .<fun x -> .~c + x>.")).verdict, Verdict::Pass);
}

TEST(Checks, Observational) {
  EXPECT_EQ(check_observational(parse_source("let c = .<1 + 2>. in .<fun x -> .~c + x>."), parse_plain("2")).verdict,
            Verdict::Pass);
  EXPECT_EQ(check_observational(parse_source("let r = ref [] in .<rset %r 0>.")).verdict, Verdict::Skipped);
}

TEST(Reference, Evaluates) {
  EXPECT_EQ(reference_eval(parse_source("let x = ref [1] in (rset x 2, rset x 3)")).shown, "([2; 3; 1], [3; 1])");
  auto out = reference_eval(parse_source(".<fun y -> .~(let body = .<y>. in .<fun x -> .~body>.)>."));
  ASSERT_TRUE(out.is_code);
  EXPECT_TRUE(alpha_equal(out.code, parse_plain("fun a -> fun b -> a")));
}

TEST(Reference, DropsUnusedFunctionLet) {
  auto out = reference_eval(parse_source(".<let f = fun x -> x in 1>."));
  EXPECT_TRUE(alpha_equal(out.code, parse_plain("1")));
}

TEST(Matcher, Bijection) {
  Value c1 = make_cell(make_int(1));
  Value c2 = make_cell(make_int(1));
  PersistedValue a1(c1), a2(c2), b1(c1), b2(c2);
  PersistedMatcher m;
  EXPECT_TRUE(m(a1, b1));
  EXPECT_TRUE(m(a1, b1));
  EXPECT_FALSE(m(a1, b2));
  EXPECT_TRUE(m(a2, b2));
  PersistedValue i1(make_int(3)), i2(make_int(3)), i3(make_int(4));
  EXPECT_TRUE(m(i1, i2));
  EXPECT_FALSE(m(i1, i3));
  EXPECT_FALSE(m(i1, a1));
}

TEST(Generator, ProgramsAreSmallAndTyped) {
  ProgramGenerator g(42);
  int with_escape = 0;
  for (int i = 0; i < 100; ++i) {
    SourceExpr e = g.next();
    EXPECT_LE(node_count(e), 40u);
    EXPECT_NO_THROW(infer_staged({}, e, 0)) << pretty(e);
    if (pretty(e).find(".~") != std::string::npos) ++with_escape;
  }
  EXPECT_GT(with_escape, 10);
}

TEST(Generator, Deterministic) {
  ProgramGenerator a(5), b(5);
  for (int i = 0; i < 20; ++i) EXPECT_TRUE(alpha_equal(a.next(), b.next()));
}

TEST(Difftest, ReportIsTap) {
  std::ostringstream out;
  DifftestSummary s = run_difftest(3, 30, out);
  EXPECT_EQ(s.failed, 0) << out.str();
  EXPECT_GT(s.passed, 100);
  EXPECT_EQ(s.divergences, 2);
  EXPECT_EQ(out.str().rfind("TAP version 13", 0), 0u);
  EXPECT_NE(out.str().find("not ok") , 0u);
  EXPECT_EQ(out.str().find("\nnot ok"), std::string::npos);
}
