#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "polylet/backends.hpp"
#include "polylet/difftest.hpp"
#include "polylet/parser.hpp"
#include "polylet/typecheck.hpp"
#include "polylet/unstage.hpp"

using namespace polylet;

namespace {

struct UsageError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError{"cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A .pml file is either a staged source program or a hand-written
// combinator program.
struct Program {
  SourceExpr source;  // null for combinator programs
  TargetTerm term;
};

Program load(const std::string& text) {
  SourceExpr e;
  try {
    e = parse_source(text);
  } catch (const Error& err) {
    if (err.kind() != DiagnosticKind::ParseError) throw;
    try {
      return {nullptr, parse_target(text)};
    } catch (const Error&) {
      throw err;
    }
  }
  if (uses_combinators(e)) return {nullptr, parse_target(text)};
  return {e, translate(e)};
}

int gensym_start() {
  const char* seed = std::getenv("POLYLET_SEED");
  if (!seed || !*seed) return 0;
  try {
    return std::stoi(seed);
  } catch (const std::exception&) {
    throw UsageError{fmt::format("POLYLET_SEED must be an integer, got '{}'", seed)};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polylet: staged programs, unstaging translation and code generation"};
  app.require_subcommand(1);

  std::string file;
  std::string system;
  std::string policy_name = "relaxed";
  std::string backend_name = "string";
  std::optional<std::string> arg;
  std::uint64_t seed = 1;
  int count = 100;

  auto* typecheck = app.add_subcommand("typecheck", "print the inferred type scheme");
  typecheck->add_option("--system", system, "staged or host (default: staged when the file has brackets)")
      ->check(CLI::IsMember({"staged", "host"}));
  typecheck->add_option("--gen-policy", policy_name, "value, nonexpansive or relaxed")
      ->check(CLI::IsMember({"value", "nonexpansive", "relaxed"}));
  typecheck->add_option("FILE", file)->required();

  auto* translate_cmd = app.add_subcommand("translate", "print the combinator term");
  translate_cmd->add_option("FILE", file)->required();

  auto* codegen = app.add_subcommand("codegen", "print the generated code");
  codegen->add_option("--backend", backend_name, "string or quote")->check(CLI::IsMember({"string", "quote"}));
  codegen->add_option("FILE", file)->required();

  auto* run = app.add_subcommand("run", "evaluate, force the code, print the value");
  run->add_option("--arg", arg, "literal applied to a function result");
  run->add_option("FILE", file)->required();

  auto* difftest = app.add_subcommand("difftest", "run the differential checks (TAP output)");
  difftest->add_option("--seed", seed, "generator seed");
  difftest->add_option("--count", count, "number of generated programs")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*difftest) {
      const DifftestSummary sum = run_difftest(seed, count, std::cout);
      return sum.failed == 0 ? 0 : 1;
    }

    const std::string text = read_file(file);
    try {
      const Program prog = load(text);

      if (*typecheck) {
        const GenPolicy policy = *gen_policy_from_name(policy_name);
        if (system.empty()) system = prog.source && contains_bracket(prog.source) ? "staged" : "host";
        if (system == "staged") {
          if (!prog.source) throw UsageError{"a combinator program has no staged typing; use --system host"};
          std::cout << pretty(infer_staged({}, prog.source, 0, policy)) << "\n";
        } else {
          std::cout << pretty(infer_host({}, prog.term, policy), "cod") << "\n";
        }
      } else if (*translate_cmd) {
        std::cout << pretty(prog.term) << "\n";
      } else if (*codegen) {
        Session s(*backend_from_name(backend_name), gensym_start());
        std::cout << show_generated(generate(s, prog.term)) << "\n";
      } else if (*run) {
        Session s(BackendId::Eval, gensym_start());
        const SourceExpr literal = arg ? parse_plain(*arg) : nullptr;
        std::cout << show_value(run_forced(s, prog.term, literal)) << "\n";
      }
    } catch (const Error& err) {
      std::cerr << format_diagnostic(err.diagnostic(), file) << "\n";
      return 1;
    }
  } catch (const UsageError& u) {
    std::cerr << "polylet: " << u.message << "\n";
    return 2;
  }
  return 0;
}
