#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "polylet/ast.hpp"
#include "polylet/corpus.hpp"
#include "polylet/engine.hpp"
#include "polylet/typecheck.hpp"

namespace polylet {

enum class Verdict : std::uint8_t { Pass, Fail, Skipped, KnownDivergence };

std::string_view to_string(Verdict v);

struct CheckResult {
  Verdict verdict = Verdict::Pass;
  std::string detail;

  bool ok() const { return verdict != Verdict::Fail; }
};

/// Staged acceptance implies host acceptance of the translation.
CheckResult check_typing_preservation(const SourceExpr& e, GenPolicy policy = GenPolicy::Relaxed);

/// The quote backend rebuilds the code the program denotes: compared with
/// the reference evaluator, and with the bracket body itself when that body
/// has no escapes or CSP.
CheckResult check_round_trip(const SourceExpr& e);

/// Forcing eval-backend code, re-running string-backend text and re-running
/// the quote-backend tree agree. `arg`, if given, is applied to function
/// results. Skipped when the string leg cannot serialize a CSP value and the
/// other two legs agree.
CheckResult check_observational(const SourceExpr& e, const SourceExpr& arg = nullptr);

/// Generates with the session's backend, forces eval-backend code, and
/// applies `arg` to a function result.
Value run_forced(Session& s, const TargetTerm& t, const SourceExpr& arg = nullptr);

/// Every check that applies to one corpus entry, in order.
struct NamedCheck {
  std::string name;
  CheckResult result;
};
std::vector<NamedCheck> check_corpus_entry(const CorpusEntry& entry);

struct DifftestSummary {
  int passed = 0;
  int failed = 0;
  int skipped = 0;
  int divergences = 0;
};

/// Runs the corpus and `count` generated programs, writing a TAP report.
DifftestSummary run_difftest(std::uint64_t seed, int count, std::ostream& out);

}  // namespace polylet
