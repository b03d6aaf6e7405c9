#include <benchmark/benchmark.h>

#include "nestpeb/compile.hpp"
#include "nestpeb/eval.hpp"
#include "nestpeb/examples.hpp"
#include "nestpeb/formula_parser.hpp"
#include "nestpeb/graph.hpp"
#include "nestpeb/guides.hpp"
#include "nestpeb/harness.hpp"
#include "nestpeb/simulator.hpp"
#include "nestpeb/to_formula.hpp"

using namespace nestpeb;

namespace {

// A right comb of n inner nodes over {a, b, c}; mixed leaves unless only_a.
Tree comb(int n, bool only_a = false) {
  std::string s = "a";
  for (int i = 0; i < n; ++i) s = "c(" + std::string(i % 2 && !only_a ? "b" : "a") + "," + s + ")";
  return parse_term(s, abc_alphabet());
}

void BM_RunWorkedAutomaton(benchmark::State& state) {
  const Automaton a = all_leaves_a_automaton();
  const Tree t = comb(static_cast<int>(state.range(0)), true);
  const Structure st = Structure::from_tree(t);
  for (auto _ : state) benchmark::DoNotOptimize(run(a, st).verdict);
  state.SetComplexityN(static_cast<long>(t.size()));
}
BENCHMARK(BM_RunWorkedAutomaton)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_EvalWalkingSentence(benchmark::State& state) {
  const FormulaPtr f = walking_sentence();
  const Tree t = comb(static_cast<int>(state.range(0)));
  const Structure st = Structure::from_tree(t);
  for (auto _ : state) benchmark::DoNotOptimize(eval(f, st));
}
BENCHMARK(BM_EvalWalkingSentence)->RangeMultiplier(2)->Range(2, 16);

void BM_RunCompiledWalking(benchmark::State& state) {
  const Automaton a = compile_det(walking_sentence(), 1, abc_alphabet());
  const Tree t = comb(static_cast<int>(state.range(0)));
  const Structure st = Structure::from_tree(t);
  for (auto _ : state) benchmark::DoNotOptimize(run(a, st).verdict);
}
BENCHMARK(BM_RunCompiledWalking)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_CompileDetSuite(benchmark::State& state) {
  const auto suite = deterministic_suite();
  for (auto _ : state)
    for (const auto& nf : suite) benchmark::DoNotOptimize(compile_det(parse_formula(nf.text), nf.heads, suite_alphabet()));
}
BENCHMARK(BM_CompileDetSuite);

void BM_ToFormulaWorked(benchmark::State& state) {
  const Automaton a = all_leaves_a_automaton();
  for (auto _ : state) benchmark::DoNotOptimize(to_formula(a));
}
BENCHMARK(BM_ToFormulaWorked);

void BM_CheckGridGuide(benchmark::State& state) {
  const Automaton guide = make_guide(Family::Grid);
  const int n = static_cast<int>(state.range(0));
  const Graph g = build_grid(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(check_guide(guide, g).ok());
}
BENCHMARK(BM_CheckGridGuide)->DenseRange(2, 6, 2);

}  // namespace

BENCHMARK_MAIN();
