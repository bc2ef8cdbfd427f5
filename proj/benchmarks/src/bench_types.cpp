#include <benchmark/benchmark.h>

#include "cycpp/meta_value.hpp"
#include "cycpp/type_system.hpp"

namespace {

void BM_Canonicalize(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(cycpp::canonicalize("std::map<std::string, std::vector<double>>"));
  }
}
BENCHMARK(BM_Canonicalize);

void BM_AliasChain(benchmark::State& state) {
  cycpp::TypeScope scope;
  std::string prev = "double";
  for (int i = 0; i < state.range(0); ++i) {
    std::string name = "t" + std::to_string(i);
    scope.add_alias(name, prev);
    prev = name;
  }
  for (auto _ : state) benchmark::DoNotOptimize(cycpp::canonicalize(prev, scope));
}
BENCHMARK(BM_AliasChain)->Arg(1)->Arg(5)->Arg(50);

void BM_AllVariants(benchmark::State& state) {
  const auto& table = cycpp::DbTypeTable::builtin();
  auto types = table.registered_types();
  for (auto _ : state) {
    for (const auto& t : types) benchmark::DoNotOptimize(table.variants(t));
  }
}
BENCHMARK(BM_AllVariants);

void BM_ParseLiteral(benchmark::State& state) {
  const char* text = "{'default': 4e14, 'units': 'n/cm2/s', 'shape': [-1, 10]}";
  for (auto _ : state) benchmark::DoNotOptimize(cycpp::parse_annotation_literal(text));
}
BENCHMARK(BM_ParseLiteral);

void BM_RenderJson(benchmark::State& state) {
  auto v = cycpp::parse_annotation_literal(
      "{'default': 4e14, 'units': 'n/cm2/s', 'shape': [-1, 10], 'nested': {'a': [1.5, True, None]}}");
  for (auto _ : state) benchmark::DoNotOptimize(cycpp::render_json(v));
}
BENCHMARK(BM_RenderJson);

}  // namespace

BENCHMARK_MAIN();
