#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace polylet {

struct SourceLoc {
  std::size_t offset = 0;
  int line = 1;
  int column = 1;
};

enum class DiagnosticKind {
  ParseError,
  TypeError,
  UnboundVar,
  ScopeExtrusion,
  SoundnessViolation,
  CspSerialization,
  RuntimeError,
};

std::string_view to_string(DiagnosticKind kind);

struct Diagnostic {
  DiagnosticKind kind = DiagnosticKind::RuntimeError;
  std::string message;
  SourceLoc loc;
};

/// Renders `file:line:col: kind: message`.
std::string format_diagnostic(const Diagnostic& diag, std::string_view file);

/// Every pipeline stage reports failure by throwing this.
class Error : public std::runtime_error {
 public:
  explicit Error(Diagnostic diag);

  const Diagnostic& diagnostic() const noexcept { return diag_; }
  DiagnosticKind kind() const noexcept { return diag_.kind; }

 private:
  Diagnostic diag_;
};

[[noreturn]] void fail(DiagnosticKind kind, std::string message, SourceLoc loc = {});

}  // namespace polylet
