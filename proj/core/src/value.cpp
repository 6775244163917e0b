#include "polylet/value.hpp"

#include <fmt/format.h>

#include "polylet/diagnostic.hpp"

namespace polylet {

std::string_view to_string(ValueTag tag) {
  switch (tag) {
    case ValueTag::Unit: return "unit";
    case ValueTag::Int: return "int";
    case ValueTag::Str: return "string";
    case ValueTag::List: return "list";
    case ValueTag::Pair: return "pair";
    case ValueTag::Function: return "function";
    case ValueTag::Cell: return "reference";
    case ValueTag::Code: return "code";
    case ValueTag::Scope: return "scope";
    case ValueTag::Cont: return "continuation";
  }
  return "?";
}

ValueTag Value::tag() const {
  switch (v.index()) {
    case 0: return ValueTag::Unit;
    case 1: return ValueTag::Int;
    case 2: return ValueTag::Str;
    case 3: return ValueTag::List;
    case 4: return ValueTag::Pair;
    case 5:
    case 6: return ValueTag::Function;
    case 7: return ValueTag::Cell;
    case 8: return ValueTag::Code;
    case 9: return ValueTag::Scope;
    default: return ValueTag::Cont;
  }
}

EnvPtr env_bind(EnvPtr env, std::string name, Value value) {
  return std::make_shared<const EnvNode>(EnvNode{std::move(name), std::move(value), std::move(env)});
}

const Value* env_lookup(const EnvPtr& env, std::string_view name) {
  for (const EnvNode* n = env.get(); n; n = n->next.get()) {
    if (n->name == name) return &n->value;
  }
  return nullptr;
}

Value make_int(std::int64_t i) { return Value(i); }
Value make_str(std::string s) { return Value(std::move(s)); }
Value make_unit() { return Value(UnitV{}); }

Value cons_value(Value head, const ListV& tail) {
  return Value(ListV{std::make_shared<const ListNode>(ListNode{std::move(head), tail.head})});
}

Value make_list(const std::vector<Value>& items) {
  ListV l;
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    l = *cons_value(*it, l).get<ListV>();
  }
  return Value(l);
}

Value make_pair(Value a, Value b) {
  return Value(std::make_shared<const PairBox>(PairBox{std::move(a), std::move(b)}));
}

Value make_cell(Value contents) { return Value(std::make_shared<Cell>(Cell{std::move(contents)})); }

Value make_native(std::string name, std::function<void(Machine&, const Value&)> call) {
  return Value(std::make_shared<const NativeFn>(NativeFn{std::move(name), std::move(call)}));
}

std::vector<Value> list_items(const ListV& l) {
  std::vector<Value> out;
  for (const ListNode* n = l.head.get(); n; n = n->tail.get()) out.push_back(n->head);
  return out;
}

std::string show_value(const Value& v) {
  switch (v.tag()) {
    case ValueTag::Unit: return "()";
    case ValueTag::Int: return std::to_string(*v.get<std::int64_t>());
    case ValueTag::Str: return quote_string(*v.get<std::string>());
    case ValueTag::List: {
      std::string out = "[";
      bool first = true;
      for (const auto& item : list_items(*v.get<ListV>())) {
        if (!first) out += "; ";
        first = false;
        out += show_value(item);
      }
      return out + "]";
    }
    case ValueTag::Pair: {
      const auto& p = **v.get<PairPtr>();
      return "(" + show_value(p.first) + ", " + show_value(p.second) + ")";
    }
    case ValueTag::Function: return "<fun>";
    case ValueTag::Cell: return "ref " + show_value((*v.get<CellPtr>())->contents);
    case ValueTag::Code: return "<code>";
    case ValueTag::Scope: return "<scope>";
    case ValueTag::Cont: return "<continuation>";
  }
  return "?";
}

bool values_equal(const Value& a, const Value& b) {
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case ValueTag::Unit: return true;
    case ValueTag::Int: return *a.get<std::int64_t>() == *b.get<std::int64_t>();
    case ValueTag::Str: return *a.get<std::string>() == *b.get<std::string>();
    case ValueTag::List: {
      const ListNode* x = a.get<ListV>()->head.get();
      const ListNode* y = b.get<ListV>()->head.get();
      for (; x && y; x = x->tail.get(), y = y->tail.get()) {
        if (!values_equal(x->head, y->head)) return false;
      }
      return !x && !y;
    }
    case ValueTag::Pair: {
      const auto& x = **a.get<PairPtr>();
      const auto& y = **b.get<PairPtr>();
      return values_equal(x.first, y.first) && values_equal(x.second, y.second);
    }
    case ValueTag::Cell:
      return values_equal((*a.get<CellPtr>())->contents, (*b.get<CellPtr>())->contents);
    default: return false;
  }
}

bool is_ground(const Value& v) {
  switch (v.tag()) {
    case ValueTag::Unit:
    case ValueTag::Int:
    case ValueTag::Str: return true;
    case ValueTag::List: {
      for (const auto& item : list_items(*v.get<ListV>())) {
        if (!is_ground(item)) return false;
      }
      return true;
    }
    case ValueTag::Pair: {
      const auto& p = **v.get<PairPtr>();
      return is_ground(p.first) && is_ground(p.second);
    }
    default: return false;
  }
}

bool shapes_compatible(const Value& a, const Value& b) {
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case ValueTag::List: {
      const ListNode* x = a.get<ListV>()->head.get();
      const ListNode* y = b.get<ListV>()->head.get();
      return !x || !y || shapes_compatible(x->head, y->head);
    }
    case ValueTag::Pair: {
      const auto& x = **a.get<PairPtr>();
      const auto& y = **b.get<PairPtr>();
      return shapes_compatible(x.first, y.first) && shapes_compatible(x.second, y.second);
    }
    case ValueTag::Cell:
      return shapes_compatible((*a.get<CellPtr>())->contents, (*b.get<CellPtr>())->contents);
    default: return true;
  }
}

Value rset_runtime(const Value& cell, const Value& v) {
  const CellPtr* c = cell.get<CellPtr>();
  if (!c) fail(DiagnosticKind::RuntimeError, "rset expects a reference cell");
  const ListV* old = (*c)->contents.get<ListV>();
  if (!old) fail(DiagnosticKind::RuntimeError, "rset expects a cell holding a list");
  if (old->head && !shapes_compatible(old->head->head, v)) {
    fail(DiagnosticKind::SoundnessViolation,
         fmt::format("rset would prepend {} {} to a list of {} ({}): the cell is shared "
                     "across incompatible instantiations",
                     to_string(v.tag()), show_value(v), to_string(old->head->head.tag()),
                     show_value((*c)->contents)));
  }
  Value updated = cons_value(v, *old);
  (*c)->contents = updated;
  return updated;
}

std::string PersistedValue::describe() const { return show_value(value_); }

const void* PersistedValue::identity() const {
  switch (value_.tag()) {
    case ValueTag::Cell: return value_.get<CellPtr>()->get();
    case ValueTag::Scope: return value_.get<ScopePtr>()->get();
    case ValueTag::Cont: return value_.get<ContPtr>()->get();
    case ValueTag::Code: return value_.get<CodePtr>()->get();
    case ValueTag::Function: {
      if (const auto* c = value_.get<ClosurePtr>()) return c->get();
      return value_.get<NativePtr>()->get();
    }
    default: return nullptr;
  }
}

SourceExpr ground_to_source(const Value& v) {
  switch (v.tag()) {
    case ValueTag::Unit: return src::unit();
    case ValueTag::Int: return src::int_lit(*v.get<std::int64_t>());
    case ValueTag::Str: return src::str_lit(*v.get<std::string>());
    case ValueTag::List: {
      const auto items = list_items(*v.get<ListV>());
      SourceExpr out = src::nil();
      for (auto it = items.rbegin(); it != items.rend(); ++it) {
        out = src::cons(ground_to_source(*it), out);
      }
      return out;
    }
    case ValueTag::Pair: {
      const auto& p = **v.get<PairPtr>();
      return src::pair(ground_to_source(p.first), ground_to_source(p.second));
    }
    default: return src::persist(std::make_shared<PersistedValue>(v));
  }
}

}  // namespace polylet
