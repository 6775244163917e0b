#include "polylet/difftest.hpp"

#include <fmt/format.h>

#include <ostream>

#include "polylet/backends.hpp"
#include "polylet/generator.hpp"
#include "polylet/parser.hpp"
#include "polylet/reference.hpp"
#include "polylet/unstage.hpp"

namespace polylet {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Skipped: return "skipped";
    case Verdict::KnownDivergence: return "known-divergence";
  }
  return "?";
}

namespace {

CheckResult pass(std::string detail = {}) { return {Verdict::Pass, std::move(detail)}; }
CheckResult failed(std::string detail) { return {Verdict::Fail, std::move(detail)}; }

bool has_escape_or_csp(const SourceExpr& e) {
  if (e->kind == SourceKind::Escape || e->kind == SourceKind::Csp) return true;
  for (const auto& k : e->kids) {
    if (has_escape_or_csp(k)) return true;
  }
  return false;
}

bool has_unused_function_let(const SourceExpr& e) {
  if (e->kind == SourceKind::Let && e->kids[0]->kind == SourceKind::Fun &&
      !free_vars(e->kids[1]).count(e->text)) {
    return true;
  }
  for (const auto& k : e->kids) {
    if (has_unused_function_let(k)) return true;
  }
  return false;
}

std::string error_text(const Error& err) {
  return fmt::format("{}: {}", to_string(err.kind()), err.diagnostic().message);
}

// "value ..." or "error Kind"; messages are left out so legs compare by kind.
template <typename F>
std::string outcome(F&& f) {
  try {
    return "value " + show_value(f());
  } catch (const Error& err) {
    return fmt::format("error {}", to_string(err.kind()));
  }
}

bool is_code_type(const TypeScheme& s) { return resolve(s.body)->con == TypeCon::Code; }

bool is_function_code(const TypeScheme& s) {
  Type t = resolve(s.body);
  return t->con == TypeCon::Code && resolve(t->args[0])->con == TypeCon::Arrow;
}

Value apply_arg(Session& s, Value v, const SourceExpr& arg) {
  if (!arg || v.tag() != ValueTag::Function) return v;
  Value a = s.eval(translate(arg));
  return s.apply(v, a);
}

}  // namespace

Value run_forced(Session& s, const TargetTerm& t, const SourceExpr& arg) {
  Value v = generate(s, t);
  if (v.tag() == ValueTag::Code && s.backend_id() == BackendId::Eval) v = force_code(s, v);
  return apply_arg(s, v, arg);
}

CheckResult check_typing_preservation(const SourceExpr& e, GenPolicy policy) {
  try {
    infer_staged({}, e, 0, policy);
  } catch (const Error& err) {
    if (err.kind() != DiagnosticKind::TypeError && err.kind() != DiagnosticKind::UnboundVar) throw;
    return pass("staged checker rejects");
  }
  const TargetTerm t = translate(e);
  try {
    TypeScheme host = infer_host({}, t, policy);
    return pass(pretty(host, "cod"));
  } catch (const Error& err) {
    if (is_known_divergence(e)) return {Verdict::KnownDivergence, error_text(err)};
    return failed("staged accepts, host rejects the translation: " + error_text(err));
  }
}

CheckResult check_round_trip(const SourceExpr& e) {
  TypeScheme staged;
  try {
    staged = infer_staged({}, e, 0);
  } catch (const Error& err) {
    return failed("precondition: program does not typecheck: " + error_text(err));
  }
  if (!is_code_type(staged)) return failed("precondition: result is not code");

  SourceExpr tree;
  try {
    Session s(BackendId::Quote);
    Value v = generate(s, translate(e));
    tree = as_code(v, BackendId::Quote).tree;
  } catch (const Error& err) {
    return failed("quote backend: " + error_text(err));
  }
  ReferenceOutcome expected;
  try {
    expected = reference_eval(e);
  } catch (const Error& err) {
    return failed("reference evaluator: " + error_text(err));
  }
  if (!expected.is_code) return failed("reference evaluator returned " + expected.shown);

  PersistedMatcher matcher;
  auto eq = [&matcher](const Persisted& a, const Persisted& b) { return matcher(a, b); };
  if (!alpha_equal(tree, expected.code, eq)) {
    return failed(fmt::format("quote backend gave {}, reference gave {}", pretty(tree), pretty(expected.code)));
  }
  if (e->kind == SourceKind::Bracket && !has_escape_or_csp(e->kids[0]) &&
      !has_unused_function_let(e->kids[0]) && !alpha_equal(tree, e->kids[0])) {
    return failed(fmt::format("quote backend gave {}, bracket body is {}", pretty(tree), pretty(e->kids[0])));
  }
  return pass(pretty(tree));
}

CheckResult check_observational(const SourceExpr& e, const SourceExpr& arg) {
  const TargetTerm t = translate(e);

  const std::string a = outcome([&] {
    Session s(BackendId::Eval);
    return run_forced(s, t, arg);
  });

  bool string_skipped = false;
  std::string b;
  try {
    Session s(BackendId::String);
    Value v = generate(s, t);
    if (v.tag() == ValueTag::Code) {
      const std::string text = as_code(v, BackendId::String).text;
      b = outcome([&] {
        Session s2(BackendId::Eval);
        return apply_arg(s2, s2.eval(translate(parse_plain(text))), arg);
      });
    } else {
      b = outcome([&] { return apply_arg(s, v, arg); });
    }
  } catch (const Error& err) {
    if (err.kind() == DiagnosticKind::CspSerialization) {
      string_skipped = true;
    } else {
      b = fmt::format("error {}", to_string(err.kind()));
    }
  }

  const std::string c = outcome([&] {
    Session s(BackendId::Quote);
    Value v = generate(s, t);
    if (v.tag() != ValueTag::Code) return apply_arg(s, v, arg);
    const SourceExpr tree = as_code(v, BackendId::Quote).tree;
    Session s2(BackendId::Eval);
    return apply_arg(s2, s2.eval(translate(tree)), arg);
  });

  if (string_skipped) {
    if (a == c) return {Verdict::Skipped, "string leg cannot serialize a CSP value; eval and quote: " + a};
    return failed(fmt::format("eval: {}; quote: {}", a, c));
  }
  if (a == b && b == c) return pass(a);
  return failed(fmt::format("eval: {}; string: {}; quote: {}", a, b, c));
}

std::vector<NamedCheck> check_corpus_entry(const CorpusEntry& entry) {
  std::vector<NamedCheck> out;
  auto record = [&](std::string name, auto&& f) {
    try {
      out.push_back({std::move(name), f()});
    } catch (const Error& err) {
      out.push_back({std::move(name), failed("unexpected " + error_text(err))});
    }
  };
  const SourceExpr arg = entry.arg ? parse_plain(*entry.arg) : nullptr;

  TargetTerm term;
  SourceExpr source;
  std::optional<TypeScheme> staged;
  if (entry.language == CorpusLanguage::Staged) {
    source = parse_source(entry.text);
    term = translate(source);
    record("staged-typing", [&] {
      try {
        staged = infer_staged({}, source, 0);
      } catch (const Error& err) {
        if (err.kind() != DiagnosticKind::TypeError) throw;
        if (entry.staged_accept) return failed("rejected: " + error_text(err));
        return pass("rejected: " + error_text(err));
      }
      const std::string shown = pretty(*staged);
      if (!entry.staged_accept) return failed("accepted with " + shown);
      if (!entry.staged_type.empty() && shown != entry.staged_type) {
        return failed(fmt::format("scheme {} but expected {}", shown, entry.staged_type));
      }
      return pass(shown);
    });
    record("scope-lint", [&] {
      const auto problems = lint_scopes(term);
      if (problems.empty()) return pass();
      return failed(problems.front());
    });
  } else {
    term = parse_target(entry.text);
  }

  record("host-typing", [&] {
    try {
      TypeScheme s = infer_host({}, term);
      if (!entry.host_accept) return failed("accepted with " + pretty(s, "cod"));
      return pass(pretty(s, "cod"));
    } catch (const Error& err) {
      if (err.kind() != DiagnosticKind::TypeError) throw;
      if (entry.host_accept) return failed("rejected: " + error_text(err));
      return pass("rejected: " + error_text(err));
    }
  });

  if (staged) {
    record("typing-preservation", [&] { return check_typing_preservation(source); });
    if (is_code_type(*staged) && !entry.run_error) {
      record("round-trip", [&] { return check_round_trip(source); });
    }
    record("observational", [&] { return check_observational(source, arg); });
  }

  if (!entry.quote_output.empty()) {
    record("quote-output", [&] {
      Session s(BackendId::Quote);
      const SourceExpr tree = as_code(generate(s, term), BackendId::Quote).tree;
      if (alpha_equal(tree, parse_plain(entry.quote_output))) return pass(pretty(tree));
      return failed(fmt::format("got {}, expected {}", pretty(tree), entry.quote_output));
    });
  }
  if (!entry.string_output.empty()) {
    record("string-output", [&] {
      Session s(BackendId::String);
      const std::string text = as_code(generate(s, term), BackendId::String).text;
      if (text == entry.string_output) return pass(text);
      return failed(fmt::format("got {}, expected {}", text, entry.string_output));
    });
  }
  if (entry.result || entry.run_error) {
    record("eval-result", [&] {
      const std::string got = outcome([&] {
        Session s(BackendId::Eval);
        return run_forced(s, term, arg);
      });
      const std::string want = entry.run_error ? fmt::format("error {}", to_string(*entry.run_error))
                                               : "value " + *entry.result;
      if (got == want) return pass(got);
      return failed(fmt::format("got {}, expected {}", got, want));
    });
  }
  return out;
}

namespace {

class Tap {
 public:
  Tap(std::ostream& out, DifftestSummary& sum) : out_(out), sum_(sum) {}

  void report(const std::string& name, const CheckResult& r, const std::string& note = {}) {
    ++n_;
    switch (r.verdict) {
      case Verdict::Pass:
        ++sum_.passed;
        out_ << fmt::format("ok {} - {}\n", n_, name);
        break;
      case Verdict::Skipped:
        ++sum_.skipped;
        out_ << fmt::format("ok {} - {} # SKIP {}\n", n_, name, r.detail);
        break;
      case Verdict::KnownDivergence:
        ++sum_.divergences;
        out_ << fmt::format("ok {} - {} # known divergence: {}\n", n_, name, r.detail);
        break;
      case Verdict::Fail:
        ++sum_.failed;
        out_ << fmt::format("not ok {} - {}\n", n_, name);
        out_ << fmt::format("  # {}\n", r.detail);
        if (!note.empty()) out_ << fmt::format("  # program: {}\n", note);
        break;
    }
  }

  int count() const { return n_; }

 private:
  std::ostream& out_;
  DifftestSummary& sum_;
  int n_ = 0;
};

}  // namespace

DifftestSummary run_difftest(std::uint64_t seed, int count, std::ostream& out) {
  DifftestSummary sum;
  Tap tap(out, sum);
  out << "TAP version 13\n";

  for (const auto& entry : corpus()) {
    for (const auto& c : check_corpus_entry(entry)) {
      tap.report(fmt::format("corpus/{}/{}", entry.name, c.name), c.result);
    }
  }
  for (const auto& d : known_divergences()) {
    const SourceExpr e = parse_source(d.text);
    CheckResult r = check_typing_preservation(e);
    if (r.verdict == Verdict::Pass) r = failed("listed as a known divergence but the host checker accepts it");
    tap.report("divergence/" + pretty(e), r);
  }

  ProgramGenerator gen(seed);
  for (int i = 0; i < count; ++i) {
    const SourceExpr e = gen.next();
    const std::string shown = pretty(e);
    const SourceExpr arg = is_function_code(infer_staged({}, e, 0)) ? src::int_lit(3) : nullptr;
    auto guarded = [&](auto&& f) {
      try {
        return f();
      } catch (const Error& err) {
        return failed("unexpected " + error_text(err));
      }
    };
    tap.report(fmt::format("random/{}/typing-preservation", i),
               guarded([&] { return check_typing_preservation(e); }), shown);
    tap.report(fmt::format("random/{}/round-trip", i), guarded([&] { return check_round_trip(e); }), shown);
    tap.report(fmt::format("random/{}/observational", i),
               guarded([&] { return check_observational(e, arg); }), shown);
  }

  out << fmt::format("1..{}\n", tap.count());
  out << fmt::format("# seed {} count {}: {} passed, {} failed, {} skipped, {} known divergences\n", seed,
                     count, sum.passed, sum.failed, sum.skipped, sum.divergences);
  return sum;
}

}  // namespace polylet
