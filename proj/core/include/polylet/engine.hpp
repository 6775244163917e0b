#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "polylet/ast.hpp"
#include "polylet/value.hpp"

namespace polylet {

enum class BackendId : std::uint8_t { String, Quote, Eval };

std::string_view to_string(BackendId b);
std::optional<BackendId> backend_from_name(std::string_view name);

using DynEnv = std::map<int, Value>;

// Machine frames. A continuation is a copied slice of these.
struct ArgsFrame {
  TargetTerm node;  // evaluates node->kids right to left
  EnvPtr env;
  std::size_t next = 0;
  std::vector<Value> done;
};
struct LetFrame {
  TargetTerm node;
  EnvPtr env;
};
struct PromptFrame {
  int prompt = 0;
};
struct NativeFrame {
  std::function<void(Machine&, const Value&)> resume;
};
using Frame = std::variant<ArgsFrame, LetFrame, PromptFrame, NativeFrame>;

struct Continuation {
  int session = 0;
  std::vector<Frame> frames;  // bottom first; frames.front() is the prompt
};

class Session;

/// Interpretation of the code combinators. new_scope, new_funscope and the
/// genletfun memo are shared and live in the engine.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendId id() const = 0;
  /// int, str, add, app, pair, nil, cons, ref_, rget, rset, csp.
  virtual Value pure(Session& s, Combinator c, const std::vector<Value>& args) = 0;
  virtual void lam(Machine& m, const Value& body) = 0;
  virtual void genlet(Machine& m, int prompt, const Value& code) = 0;
};

std::unique_ptr<Backend> make_backend(BackendId id);

/// One evaluation session: owns the gensym counter, prompt allocator and
/// dynamic environment. Single-threaded.
class Session {
 public:
  explicit Session(BackendId backend = BackendId::Eval, int gensym_start = 0);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  int id() const { return id_; }
  Backend& backend() { return *backend_; }
  BackendId backend_id() const { return backend_->id(); }

  std::string gensym(std::string_view prefix);
  int new_prompt() { return ++prompts_; }

  int dnew() { return ++dynvars_; }
  Value dref(int var) const;
  DynEnv denv_get() const { return denv_; }
  Value dlet(const DynEnv& denv, int var, Value v, const std::function<Value()>& body);

  Value eval(const TargetTerm& t, EnvPtr env = nullptr);
  Value apply(const Value& fn, const Value& arg);

 private:
  int id_;
  std::unique_ptr<Backend> backend_;
  int counter_;
  int prompts_ = 0;
  int dynvars_ = 0;
  DynEnv denv_;
};

class Machine {
 public:
  explicit Machine(Session& s) : session_(s) {}

  Session& session() { return session_; }

  void ret(Value v);
  void eval(TargetTerm t, EnvPtr env);
  void apply(Value fn, Value arg);
  void push(Frame f) { stack_.push_back(std::move(f)); }
  void push_native(std::function<void(Machine&, const Value&)> resume);
  void push_prompt(int prompt) { stack_.push_back(PromptFrame{prompt}); }

  /// shift0: removes the frames up to and including the innermost delimiter
  /// for `prompt`, then calls `consumer` with them reified as a continuation.
  void capture(int prompt, const std::function<void(Machine&, const Value&)>& consumer);

  Value run();

 private:
  enum class Mode { Eval, Apply, Return };

  Session& session_;
  std::vector<Frame> stack_;
  Mode mode_ = Mode::Return;
  TargetTerm term_;
  EnvPtr env_;
  Value value_;
  Value arg_;

  void step_eval();
  void step_apply();
  void step_return();
  void finish(const TargetTerm& node, std::vector<Value>& args);
  void combinator(const TargetTerm& node, std::vector<Value>& args);
};

/// Evaluates a closed term in a fresh session.
Value eval(const TargetTerm& t, BackendId backend);

/// `new_prompt ()`, `push_prompt p thunk` and `shift0 p f` as host
/// functions, for exercising the control operators directly.
EnvPtr control_primitives(EnvPtr env = nullptr);

}  // namespace polylet
