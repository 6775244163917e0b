#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "polylet/ast.hpp"

namespace polylet {

/// Type-directed generator of well-formed two-stage programs. Each program
/// is a bracket whose body has one of a handful of first-order or
/// int -> int types; escapes, nested brackets, CSP and polymorphic lets
/// appear inside. Every result is validated and typechecks.
class ProgramGenerator {
 public:
  explicit ProgramGenerator(std::uint64_t seed, std::size_t max_nodes = 40);

  SourceExpr next();

  std::size_t attempts() const { return attempts_; }

 private:
  struct Scope;
  enum class Ty : std::uint8_t { Int, Str, IntList, PairIS, IntToInt };

  std::mt19937_64 rng_;
  std::size_t max_nodes_;
  std::size_t attempts_ = 0;
  int budget_ = 0;
  int depth_ = 0;

  struct Depth {
    int& d;
    explicit Depth(int& x) : d(x) { ++d; }
    ~Depth() { --d; }
  };

  int pick(int n);
  bool chance(int percent);
  Ty random_type();
  Ty random_ground();
  std::string fresh_name(const Scope& sc);

  SourceExpr future(Ty t, const Scope& sc);
  SourceExpr present_code(Ty t, const Scope& sc);
  SourceExpr present_ground(Ty t, const Scope& sc);
  SourceExpr literal(Ty t);
};

}  // namespace polylet
