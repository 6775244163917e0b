#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "polylet/ast.hpp"

namespace polylet {

struct Value;
struct ListNode;
struct PairBox;
struct Closure;
struct NativeFn;
struct Cell;
struct CodeValue;
struct ScopeBox;
struct Continuation;
class Machine;

struct UnitV {
  friend bool operator==(UnitV, UnitV) { return true; }
};

/// Immutable cons list; a null head is the empty list.
struct ListV {
  std::shared_ptr<const ListNode> head;
};

using PairPtr = std::shared_ptr<const PairBox>;
using ClosurePtr = std::shared_ptr<const Closure>;
using NativePtr = std::shared_ptr<const NativeFn>;
using CellPtr = std::shared_ptr<Cell>;
using CodePtr = std::shared_ptr<const CodeValue>;
using ScopePtr = std::shared_ptr<ScopeBox>;
using ContPtr = std::shared_ptr<const Continuation>;

enum class ValueTag : std::uint8_t { Unit, Int, Str, List, Pair, Function, Cell, Code, Scope, Cont };

std::string_view to_string(ValueTag tag);

struct Value {
  std::variant<UnitV, std::int64_t, std::string, ListV, PairPtr, ClosurePtr, NativePtr, CellPtr,
               CodePtr, ScopePtr, ContPtr>
      v;

  Value() = default;
  template <typename T>
    requires(!std::is_same_v<std::decay_t<T>, Value>)
  Value(T x) : v(std::move(x)) {}  // NOLINT: implicit on purpose

  ValueTag tag() const;
  template <typename T>
  const T* get() const { return std::get_if<T>(&v); }
};

struct ListNode {
  Value head;
  std::shared_ptr<const ListNode> tail;
};

struct PairBox {
  Value first;
  Value second;
};

struct EnvNode;
using EnvPtr = std::shared_ptr<const EnvNode>;

struct EnvNode {
  std::string name;
  Value value;
  EnvPtr next;
};

EnvPtr env_bind(EnvPtr env, std::string name, Value value);
const Value* env_lookup(const EnvPtr& env, std::string_view name);

struct Closure {
  Pattern param;
  TargetTerm body;
  EnvPtr env;
};

/// A host function implemented in C++. It must leave the machine with a
/// result (ret) or a pending step (apply/eval).
struct NativeFn {
  std::string name;
  std::function<void(Machine&, const Value&)> call;
};

struct Cell {
  Value contents;
};

/// A new_scope/new_funscope handle. For function scopes `memo` is the slot
/// genletfun fills on first use.
struct ScopeBox {
  int prompt = 0;
  bool function_scope = false;
  std::optional<Value> memo;
};

Value make_int(std::int64_t i);
Value make_str(std::string s);
Value make_unit();
Value make_list(const std::vector<Value>& items);
Value cons_value(Value head, const ListV& tail);
Value make_pair(Value a, Value b);
Value make_cell(Value contents);
Value make_native(std::string name, std::function<void(Machine&, const Value&)> call);

std::vector<Value> list_items(const ListV& l);

/// OCaml-toplevel style rendering: `([2; 3; 1], [3; 1])`, `"a"`, `<fun>`.
std::string show_value(const Value& v);

/// Structural equality on first-order data; cells compare by contents,
/// functions and code are never equal.
bool values_equal(const Value& a, const Value& b);

/// True for ints, strings, unit, and lists/pairs built from them.
bool is_ground(const Value& v);

/// Whether `a` and `b` could inhabit the same static type, judged by their
/// runtime shapes.
bool shapes_compatible(const Value& a, const Value& b);

/// Prepends `v` to the list in `cell`, refusing a value whose shape differs
/// from the current head's (SoundnessViolation).
Value rset_runtime(const Value& cell, const Value& v);

/// Lets a runtime value sit inside a quoted tree.
class PersistedValue : public Persisted {
 public:
  explicit PersistedValue(Value v) : value_(std::move(v)) {}
  std::string describe() const override;
  const void* identity() const override;
  const Value& value() const { return value_; }

 private:
  Value value_;
};

/// Converts a ground value into a plain literal tree.
SourceExpr ground_to_source(const Value& v);

}  // namespace polylet
