#include <benchmark/benchmark.h>

#include "cycpp/accumulator.hpp"
#include "cycpp/codegen.hpp"
#include "cycpp/normalizer.hpp"
#include "fixture.hpp"

namespace {

void BM_Normalize(benchmark::State& state) {
  std::string src = fixture("passthrough.h");
  for (auto _ : state) benchmark::DoNotOptimize(cycpp::normalize(src));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * src.size()));
}
BENCHMARK(BM_Normalize);

void BM_Accumulate(benchmark::State& state) {
  auto norm = cycpp::normalize(fixture("reactor.h"));
  for (auto _ : state) benchmark::DoNotOptimize(cycpp::accumulate(norm));
}
BENCHMARK(BM_Accumulate);

void BM_PreprocessReactor(benchmark::State& state) {
  std::string src = fixture("reactor.h");
  for (auto _ : state) benchmark::DoNotOptimize(cycpp::preprocess(src));
}
BENCHMARK(BM_PreprocessReactor);

void BM_PreprocessPassThrough(benchmark::State& state) {
  std::string src = fixture("passthrough.h");
  for (auto _ : state) benchmark::DoNotOptimize(cycpp::preprocess(src));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * src.size()));
}
BENCHMARK(BM_PreprocessPassThrough);

// Many state variables in one class.
void BM_PreprocessWide(benchmark::State& state) {
  std::string src = "class Wide : public cyclus::Facility {\n  #pragma cyclus\n";
  for (int i = 0; i < state.range(0); ++i) {
    src += "  #pragma cyclus var {'default': " + std::to_string(i) + "}\n";
    src += "  int v" + std::to_string(i) + ";\n";
  }
  src += "};\n";
  for (auto _ : state) benchmark::DoNotOptimize(cycpp::preprocess(src));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PreprocessWide)->RangeMultiplier(4)->Range(4, 256)->Complexity();

}  // namespace

BENCHMARK_MAIN();
