#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polylet/ast.hpp"
#include "polylet/diagnostic.hpp"

namespace polylet {

enum class CorpusLanguage : std::uint8_t { Staged, Host };

struct CorpusEntry {
  std::string name;
  CorpusLanguage language = CorpusLanguage::Staged;
  std::string text;
  bool staged_accept = true;      // Staged entries only
  std::string staged_type;        // expected scheme; empty means unchecked
  bool host_accept = true;        // of translate(text), or of the term itself
  std::string quote_output;       // expected quote-backend tree, alpha class; empty means unchecked
  std::string string_output;      // exact string-backend text under gensym start 0; empty means unchecked
  std::optional<std::string> result;           // forced eval-backend result (show_value)
  std::optional<DiagnosticKind> run_error;     // expected failure of generation or forcing
  std::optional<std::string> arg;              // literal applied to a function result
  bool mutable_csp = false;       // CSP of a mutable value; the string leg cannot serialize it
};

const std::vector<CorpusEntry>& corpus();

/// Throws std::out_of_range for an unknown name.
const CorpusEntry& corpus_entry(std::string_view name);

/// Programs the staged checker accepts whose translation the host checker
/// rejects, for reasons documented with each entry.
struct KnownDivergence {
  std::string text;
  std::string reason;
};
const std::vector<KnownDivergence>& known_divergences();

bool is_known_divergence(const SourceExpr& e);

}  // namespace polylet
