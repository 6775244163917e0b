#pragma once

#include <string>
#include <vector>

#include "polylet/ast.hpp"

namespace polylet {

/// The unstaging translation. Level-0 code maps to itself, brackets to
/// combinator terms; level-1 lets become new_scope/genlet, or
/// new_funscope/genletfun when the right-hand side is a function.
TargetTerm translate(const SourceExpr& e);

/// Checks that every genlet/genletfun takes a scope variable bound by the
/// body function of an enclosing new_scope/new_funscope, with no `lam`
/// between them. Returns one message per offending occurrence.
std::vector<std::string> lint_scopes(const TargetTerm& t);

/// Replaces free occurrences of `name` by `name ()`.
TargetTerm thunk_uses(const TargetTerm& t, const std::string& name);

}  // namespace polylet
