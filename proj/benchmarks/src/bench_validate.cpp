#include <benchmark/benchmark.h>

#include "cycpp/schema.hpp"
#include "fixture.hpp"

namespace {

cycpp::RngNode master() {
  std::vector<cycpp::RngNode> schemas;
  for (const char* f : {"reactor.h", "source.h", "sink.h"}) {
    auto r = cycpp::annotate(fixture(f));
    schemas.push_back(cycpp::build_archetype_schema(r.archetypes.at(0)));
  }
  return cycpp::assemble_master(schemas);
}

void BM_ValidateValid(benchmark::State& state) {
  auto m = master();
  auto doc = cycpp::parse_xml(fixture("reactor_valid.xml"));
  for (auto _ : state) benchmark::DoNotOptimize(cycpp::validate(doc, m));
}
BENCHMARK(BM_ValidateValid);

void BM_ValidateMagic(benchmark::State& state) {
  auto m = master();
  auto doc = cycpp::parse_xml(fixture("reactor_magic.xml"));
  for (auto _ : state) benchmark::DoNotOptimize(cycpp::validate(doc, m));
}
BENCHMARK(BM_ValidateMagic);

// A simulation with N facilities.
void BM_ValidateSimulation(benchmark::State& state) {
  auto m = master();
  std::string facility = fixture("reactor_valid.xml");
  std::string text = "<simulation>";
  for (int i = 0; i < state.range(0); ++i) text += facility;
  text += "</simulation>";
  auto doc = cycpp::parse_xml(text);
  for (auto _ : state) benchmark::DoNotOptimize(cycpp::validate(doc, m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ValidateSimulation)->RangeMultiplier(4)->Range(1, 256)->Complexity();

void BM_RenderParseRng(benchmark::State& state) {
  auto m = master();
  for (auto _ : state) benchmark::DoNotOptimize(cycpp::parse_rng(cycpp::render_rng(m)));
}
BENCHMARK(BM_RenderParseRng);

}  // namespace

BENCHMARK_MAIN();
