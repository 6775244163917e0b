#pragma once

#include <string_view>

#include "polylet/ast.hpp"

namespace polylet {

/// Parses a two-stage program. Rejects nested brackets, escapes and CSP
/// marks outside a bracket.
SourceExpr parse_source(std::string_view text);

/// Parses staging-free code, such as the string backend's output.
SourceExpr parse_plain(std::string_view text);

/// Parses a hand-written combinator program: plain syntax plus `@@`, the
/// `(_ : unit cod)` binder, and the combinator constants (`lam`, `genlet`,
/// ...) which must be applied to at least their arity. In this syntax `rset`
/// is the combinator; the host-level primitive has no spelling.
TargetTerm parse_target(std::string_view text);

/// True when `e` mentions a combinator name as a free variable, i.e. it is
/// a hand-written combinator program rather than a staged source program.
bool uses_combinators(const SourceExpr& e);

/// Re-checks the structural invariants parse_source enforces on a tree built
/// by other means. Throws ParseError on violation.
void validate_source(const SourceExpr& e);

}  // namespace polylet
