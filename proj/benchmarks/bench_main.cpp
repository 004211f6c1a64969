#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "espc/compressor.hpp"
#include "espc/esp.hpp"
#include "espc/frequent.hpp"
#include "espc/poslp.hpp"

namespace {

std::vector<unsigned char> make_input(std::size_t n, unsigned alphabet, bool repetitive) {
  std::mt19937_64 rng(1);
  std::vector<unsigned char> s(n);
  if (!repetitive) {
    for (auto& c : s) c = static_cast<unsigned char>(rng() % alphabet);
    return s;
  }
  std::vector<unsigned char> seed(4096);
  for (auto& c : seed) c = static_cast<unsigned char>(rng() % alphabet);
  for (std::size_t i = 0; i < n; ++i) s[i] = rng() % 2000 == 0 ? static_cast<unsigned char>(rng()) : seed[i % 4096];
  return s;
}

void BM_StreamingCompress(benchmark::State& state) {
  const auto input = make_input(static_cast<std::size_t>(state.range(0)), 256, state.range(1) != 0);
  for (auto _ : state) {
    espc::StreamingCompressor c;
    c.push(input);
    benchmark::DoNotOptimize(c.finalize());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_StreamingCompress)->Args({1 << 16, 0})->Args({1 << 20, 0})->Args({1 << 20, 1})->Unit(benchmark::kMillisecond);

void BM_OfflineBuild(benchmark::State& state) {
  const auto raw = make_input(static_cast<std::size_t>(state.range(0)), 256, false);
  const espc::LevelString input(raw.begin(), raw.end());
  for (auto _ : state) {
    espc::RuleStore store;
    benchmark::DoNotOptimize(espc::build_offline(input, espc::ReductionConfig{}, store));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_OfflineBuild)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_SuffixArray(benchmark::State& state) {
  const auto raw = make_input(static_cast<std::size_t>(state.range(0)), 4, false);
  const std::string text(raw.begin(), raw.end());
  for (auto _ : state) benchmark::DoNotOptimize(espc::suffix_array(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_SuffixArray)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

void BM_Serialize(benchmark::State& state) {
  espc::StreamingCompressor c;
  c.push(make_input(1 << 20, 256, true));
  c.finalize();
  const espc::Poslp p = espc::to_poslp(c.store(), c.root());
  for (auto _ : state) {
    std::ostringstream os;
    espc::serialize(p, os);
    benchmark::DoNotOptimize(os.str().size());
  }
}
BENCHMARK(BM_Serialize)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
