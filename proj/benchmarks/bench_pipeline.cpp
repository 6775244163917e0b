#include <benchmark/benchmark.h>

#include <sstream>

#include "polylet/backends.hpp"
#include "polylet/difftest.hpp"
#include "polylet/parser.hpp"
#include "polylet/typecheck.hpp"
#include "polylet/unstage.hpp"

using namespace polylet;

namespace {

const char* const kProgram =
    R"(let c = .<1 + 2>. in .<let f = fun x -> x + .~c in let y = [] in (f 1 :: y, "3" :: y)>.)";

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse_source(kProgram));
}
BENCHMARK(BM_Parse);

void BM_TypecheckStaged(benchmark::State& state) {
  SourceExpr e = parse_source(kProgram);
  for (auto _ : state) benchmark::DoNotOptimize(infer_staged({}, e, 0));
}
BENCHMARK(BM_TypecheckStaged);

void BM_Translate(benchmark::State& state) {
  SourceExpr e = parse_source(kProgram);
  for (auto _ : state) benchmark::DoNotOptimize(translate(e));
}
BENCHMARK(BM_Translate);

void BM_TypecheckHost(benchmark::State& state) {
  TargetTerm t = translate(parse_source(kProgram));
  for (auto _ : state) benchmark::DoNotOptimize(infer_host({}, t));
}
BENCHMARK(BM_TypecheckHost);

void BM_Codegen(benchmark::State& state) {
  const auto backend = static_cast<BackendId>(state.range(0));
  TargetTerm t = translate(parse_source(kProgram));
  for (auto _ : state) {
    Session s(backend);
    benchmark::DoNotOptimize(run_forced(s, t));
  }
  state.SetLabel(std::string(to_string(backend)));
}
BENCHMARK(BM_Codegen)
    ->Arg(static_cast<int>(BackendId::String))
    ->Arg(static_cast<int>(BackendId::Quote))
    ->Arg(static_cast<int>(BackendId::Eval));

void BM_Difftest(benchmark::State& state) {
  for (auto _ : state) {
    std::ostringstream out;
    benchmark::DoNotOptimize(run_difftest(1, static_cast<int>(state.range(0)), out));
  }
}
BENCHMARK(BM_Difftest)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
