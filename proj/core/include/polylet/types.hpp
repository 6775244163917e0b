#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace polylet {

enum class TypeCon : std::uint8_t {
  Int,
  Str,
  Unit,
  List,
  Pair,
  Arrow,
  Ref,
  Code,
  Scope,
  FunScope,
  Var,
};

struct TypeNode;
using Type = std::shared_ptr<TypeNode>;

/// Type variables are mutable cells: `link` is set once the variable is
/// unified with something else.
struct TypeNode {
  TypeCon con = TypeCon::Unit;
  std::vector<Type> args;
  int id = 0;  // Var only
  Type link;   // Var only
};

namespace ty {
Type int_();
Type str();
Type unit();
Type list(Type elem);
Type pair(Type a, Type b);
Type arrow(Type from, Type to);
Type ref(Type cell);
Type code(Type body);
Type scope(Type answer);
Type funscope(Type answer);
}  // namespace ty

/// Follows variable links, compressing the path.
Type resolve(const Type& t);

/// Allocates fresh type variables. One per inference run.
class TypeVarSupply {
 public:
  Type fresh();
  int count() const { return next_; }

 private:
  int next_ = 0;
};

struct TypeScheme {
  std::vector<int> quantified;
  Type body;
};

TypeScheme mono(Type t);

struct TypeBinding {
  std::string name;
  int level = 0;
  TypeScheme scheme;
};

/// Innermost binding is at the back.
class TypeEnv {
 public:
  void push(std::string name, int level, TypeScheme scheme);
  void pop();
  const TypeBinding* lookup(std::string_view name) const;
  std::set<int> free_type_vars() const;
  const std::vector<TypeBinding>& bindings() const { return entries_; }

 private:
  std::vector<TypeBinding> entries_;
};

std::set<int> free_type_vars(const Type& t);
bool occurs(int id, const Type& t);

/// Throws TypeError on mismatch or a cyclic type.
void unify(const Type& a, const Type& b);

/// Structural equality after resolution; variables compare by id.
bool types_equal(const Type& a, const Type& b);

Type instantiate(const TypeScheme& s, TypeVarSupply& supply);

/// True when `t` is an instance of `s`, with `s`'s quantified variables
/// standing for arbitrary types and every other variable fixed.
bool is_instance(const Type& t, const TypeScheme& s);

enum class Variance : std::uint8_t { Unused, Covariant, Contravariant, Invariant };

std::string_view to_string(Variance v);
Variance compose(Variance outer, Variance inner);
Variance join(Variance a, Variance b);
Variance variance_of(int var, const Type& t);

/// Renders with `code` as the code constructor name; pass "cod" for the host
/// system. Quantified variables print as 'a, 'b, ... in order of first
/// appearance, others as '_weakN.
std::string pretty(const Type& t, std::string_view code_word = "code");
std::string pretty(const TypeScheme& s, std::string_view code_word = "code");

}  // namespace polylet
