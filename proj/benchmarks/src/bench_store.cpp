#include <benchmark/benchmark.h>

#include <random>

#include "cycpp/type_system.hpp"
#include "cycpp/vl_store.hpp"

namespace {

void BM_Sha1(benchmark::State& state) {
  std::string data(static_cast<std::size_t>(state.range(0)), 'x');
  for (auto _ : state) benchmark::DoNotOptimize(cycpp::sha1(data));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * data.size()));
}
BENCHMARK(BM_Sha1)->Arg(64)->Arg(1024)->Arg(1 << 20);

void BM_StoreInsertStrings(benchmark::State& state) {
  auto t = cycpp::canonicalize("std::string");
  std::mt19937_64 rng(1);
  std::vector<std::string> values;
  for (int i = 0; i < 10000; ++i) values.push_back(std::to_string(rng()));
  for (auto _ : state) {
    cycpp::VlStore store;
    for (const auto& v : values) benchmark::DoNotOptimize(store.insert(t, cycpp::Value(v)));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * values.size()));
}
BENCHMARK(BM_StoreInsertStrings)->Unit(benchmark::kMillisecond);

void BM_HashMap(benchmark::State& state) {
  auto t = cycpp::canonicalize("std::map<std::string, double>");
  cycpp::ValuePairs entries;
  for (int i = 0; i < state.range(0); ++i) {
    entries.emplace_back(cycpp::Value(std::to_string(i)), cycpp::Value(i * 0.5));
  }
  cycpp::Value v(entries);
  for (auto _ : state) benchmark::DoNotOptimize(cycpp::hash_value(t, v));
}
BENCHMARK(BM_HashMap)->Arg(10)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
