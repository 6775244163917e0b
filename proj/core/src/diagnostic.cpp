#include "polylet/diagnostic.hpp"

#include <fmt/format.h>

#include <utility>

namespace polylet {

std::string_view to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::ParseError: return "ParseError";
    case DiagnosticKind::TypeError: return "TypeError";
    case DiagnosticKind::UnboundVar: return "UnboundVar";
    case DiagnosticKind::ScopeExtrusion: return "ScopeExtrusion";
    case DiagnosticKind::SoundnessViolation: return "SoundnessViolation";
    case DiagnosticKind::CspSerialization: return "CspSerialization";
    case DiagnosticKind::RuntimeError: return "RuntimeError";
  }
  return "Unknown";
}

std::string format_diagnostic(const Diagnostic& diag, std::string_view file) {
  return fmt::format("{}:{}:{}: {}: {}", file, diag.loc.line, diag.loc.column,
                     to_string(diag.kind), diag.message);
}

Error::Error(Diagnostic diag)
    : std::runtime_error(fmt::format("{}: {}", to_string(diag.kind), diag.message)),
      diag_(std::move(diag)) {}

void fail(DiagnosticKind kind, std::string message, SourceLoc loc) {
  throw Error(Diagnostic{kind, std::move(message), loc});
}

}  // namespace polylet
