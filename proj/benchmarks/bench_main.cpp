#include <benchmark/benchmark.h>

#include "phylocompat/construction.hpp"
#include "phylocompat/display.hpp"
#include "phylocompat/solver.hpp"
#include "phylocompat/verify.hpp"

using namespace phylocompat;

static void BM_DisplayCharacter(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto fam = counterexample(n);
  const Tree tree = lobster_a(n);
  for (auto _ : state) {
    for (const auto& c : fam.matrix.characters()) benchmark::DoNotOptimize(displays_character(tree, c));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_DisplayCharacter)->DenseRange(8, 40, 8)->Complexity();

static void BM_WitnessSuite(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify::verify_witness_suite(n));
  state.counters["display_checks"] = static_cast<double>(verify::last_suite_display_checks());
  state.SetComplexityN(n);
}
BENCHMARK(BM_WitnessSuite)->DenseRange(8, 40, 8)->Complexity();

static void BM_DecideSmallExample(benchmark::State& state) {
  SearchOptions options;
  options.mode = static_cast<SearchMode>(state.range(0));
  const auto m = counterexample(4).matrix;
  for (auto _ : state) benchmark::DoNotOptimize(decide_pp(m, options));
}
BENCHMARK(BM_DecideSmallExample)
    ->Arg(static_cast<int>(SearchMode::Exhaustive))
    ->Arg(static_cast<int>(SearchMode::BranchAndBound));

static void BM_DecideC6BranchAndBound(benchmark::State& state) {
  SearchOptions options;
  options.mode = SearchMode::BranchAndBound;
  const auto m = counterexample(6).matrix;
  for (auto _ : state) benchmark::DoNotOptimize(decide_pp(m, options));
}
BENCHMARK(BM_DecideC6BranchAndBound);

static void BM_EnumerateNineLeafTrees(benchmark::State& state) {
  const auto m = duplicate_taxon(counterexample(4).matrix, "a1", 1);
  for (auto _ : state) {
    std::uint64_t count = 0;
    for_each_binary_tree(m.taxa_ptr(), m.taxa().all(), [&](const Tree&) { return ++count, true; });
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_EnumerateNineLeafTrees)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
