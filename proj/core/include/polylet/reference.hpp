#pragma once

#include <map>
#include <string>

#include "polylet/ast.hpp"

namespace polylet {

/// Result of running a staged program directly, without the translation.
struct ReferenceOutcome {
  bool is_code = false;
  SourceExpr code;    // when is_code
  std::string shown;  // show_value-style rendering of the result
};

/// A direct interpreter for the two-stage source language: level 0 runs,
/// level 1 builds a quoted tree with fresh binder names. Same right-to-left
/// order as the engine. A function let whose binder is unused leaves no
/// binding behind.
ReferenceOutcome reference_eval(const SourceExpr& e);

/// Persisted equality that matches mutable values up to a consistent
/// one-to-one pairing of identities, and everything else by rendering.
/// Used to compare trees whose embedded values come from different runs.
class PersistedMatcher {
 public:
  bool operator()(const Persisted& a, const Persisted& b);

 private:
  std::map<const void*, const void*> forward_;
  std::map<const void*, const void*> backward_;
};

}  // namespace polylet
