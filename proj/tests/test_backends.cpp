#include <gtest/gtest.h>

#include "polylet/backends.hpp"
#include "polylet/corpus.hpp"
#include "polylet/difftest.hpp"
#include "polylet/parser.hpp"
#include "polylet/unstage.hpp"

using namespace polylet;

namespace {

TargetTerm program(std::string_view name) {
  const auto& e = corpus_entry(name);
  return e.language == CorpusLanguage::Host ? parse_target(e.text) : translate(parse_source(e.text));
}

std::string gen(BackendId b, std::string_view name) {
  Session s(b);
  return show_generated(generate(s, program(name)));
}

DiagnosticKind gen_error(BackendId b, std::string_view name) {
  try {
    Session s(b);
    run_forced(s, program(name));
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for " << name;
  return DiagnosticKind::RuntimeError;
}

}  // namespace

TEST(StringBackend, Goldens) {
  EXPECT_EQ(gen(BackendId::String, "comb_genlet"), "let t_2 = (1 + 2) in fun x_1 -> (x_1 + t_2)");
  EXPECT_EQ(gen(BackendId::String, "quoted_let_outside_fun"), "let t_1 = (1 + 2) in fun x_2 -> (x_2 + t_1)");
  EXPECT_EQ(gen(BackendId::String, "comb_genletfun"), R"(let t_2 = fun x_1 -> x_1 in ((t_2 1), (t_2 "3")))");
  EXPECT_EQ(gen(BackendId::String, "code_sum"), "(1 + 2)");
}

TEST(StringBackend, CspOfCellCannotSerialize) {
  EXPECT_EQ(gen_error(BackendId::String, "csp_shared_cell"), DiagnosticKind::CspSerialization);
}

TEST(StringBackend, GroundCsp) {
  EXPECT_EQ(serialize_ground(make_list({make_int(1), make_int(2)})), "(1 :: (2 :: []))");
  EXPECT_EQ(serialize_ground(make_str("a\"b")), R"("a\"b")");
  EXPECT_THROW(serialize_ground(make_cell(make_int(1))), Error);
}

TEST(QuoteBackend, Trees) {
  Session s(BackendId::Quote);
  Value v = generate(s, program("quoted_let_outside_fun"));
  EXPECT_TRUE(alpha_equal(as_code(v, BackendId::Quote).tree, parse_plain("let y = 1 + 2 in fun x -> x + y")));
}

TEST(QuoteBackend, PersistsCells) {
  Session s(BackendId::Quote);
  Value v = generate(s, program("csp_shared_cell"));
  const auto& tree = as_code(v, BackendId::Quote).tree;
  ASSERT_EQ(tree->kind, SourceKind::Rset);
  EXPECT_EQ(tree->kids[0]->kind, SourceKind::Persist);
}

TEST(QuoteBackend, ScopeCheck) {
  EXPECT_EQ(gen_error(BackendId::Quote, "comb_extrusion"), DiagnosticKind::ScopeExtrusion);
  EXPECT_THROW(check_scope(parse_plain("fun x -> y")), Error);
  EXPECT_NO_THROW(check_scope(parse_plain("fun x -> x")));
}

TEST(EvalBackend, ForceRuns) {
  Session s(BackendId::Eval);
  EXPECT_EQ(show_value(run_forced(s, program("splice_sum"), parse_plain("2"))), "5");
  EXPECT_EQ(show_generated(generate(s, program("code_sum"))), "<code>");
}

TEST(EvalBackend, ForcingTwiceReruns) {
  Session s(BackendId::Eval);
  EnvPtr env = nullptr;
  Value cell = make_cell(make_list({}));
  env = env_bind(env, "r", cell);
  Value code = generate(s, parse_target("rset (csp r) (int 0)"), env);
  force_code(s, code);
  force_code(s, code);
  EXPECT_EQ(show_value(cell.get<CellPtr>()->get()->contents), "[0; 0]");
}

TEST(EvalBackend, SoundnessAndExtrusion) {
  EXPECT_EQ(gen_error(BackendId::Eval, "quoted_lifted_cell"), DiagnosticKind::SoundnessViolation);
  EXPECT_EQ(gen_error(BackendId::Eval, "comb_genletfun_cell"), DiagnosticKind::SoundnessViolation);
  EXPECT_EQ(gen_error(BackendId::Eval, "comb_extrusion"), DiagnosticKind::ScopeExtrusion);
}

TEST(Backends, Names) {
  EXPECT_EQ(backend_from_name("string"), BackendId::String);
  EXPECT_EQ(backend_from_name("quote"), BackendId::Quote);
  EXPECT_FALSE(backend_from_name("bytecode").has_value());
}
