#pragma once

#include <map>
#include <string_view>

#include "polylet/ast.hpp"
#include "polylet/types.hpp"

namespace polylet {

enum class GenPolicy : std::uint8_t { StrictValue, NonExpansive, Relaxed };

std::string_view to_string(GenPolicy p);
std::optional<GenPolicy> gen_policy_from_name(std::string_view name);  // value|nonexpansive|relaxed

/// Syntactic values: variables, literals, functions, and pairs/conses of
/// values.
bool is_value(const SourceExpr& e);
bool is_value(const TargetTerm& t);

/// Values plus brackets and CSP of non-expansive expressions.
bool is_nonexpansive(const SourceExpr& e);
bool is_nonexpansive(const TargetTerm& t);

TypeScheme generalize(const Type& t, const TypeEnv& env, bool rhs_nonexpansive, GenPolicy policy);

TypeScheme infer_staged(const TypeEnv& env, const SourceExpr& e, int level,
                        GenPolicy policy = GenPolicy::Relaxed);
TypeScheme infer_host(const TypeEnv& env, const TargetTerm& t,
                      GenPolicy policy = GenPolicy::Relaxed);

TypeScheme combinator_scheme(Combinator c);

/// The full record of one staged inference run, kept for replay.
struct StagedTyping {
  GenPolicy policy = GenPolicy::Relaxed;
  TypeScheme result;
  std::map<const SourceNode*, Type> node_types;
  std::map<const SourceNode*, TypeScheme> let_schemes;  // keyed by Let node
};

StagedTyping infer_staged_recorded(const TypeEnv& env, const SourceExpr& e, int level,
                                   GenPolicy policy = GenPolicy::Relaxed);

/// Re-checks every node of a recorded derivation against its typing rule
/// using only equality and instance matching, no unification. Returns an
/// empty string when consistent, otherwise a description of the first bad
/// node.
std::string replay_staged(const TypeEnv& env, const SourceExpr& e, int level,
                          const StagedTyping& typing);

}  // namespace polylet
