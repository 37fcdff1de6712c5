#include <benchmark/benchmark.h>

#include <random>

#include "wristmood/dsp.hpp"
#include "wristmood/features.hpp"
#include "wristmood/synth.hpp"

namespace {

using namespace wristmood;

void BM_ComputeFeatures(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::array<std::vector<double>, 9> data;
  WindowSignals w;
  for (std::size_t s = 0; s < 9; ++s) {
    const auto id = static_cast<SignalId>(s);
    const double rate = group_of(id) == ChannelGroup::kAcc ? 32.0 : id == SignalId::kHr ? 1.0 : 4.0;
    data[s].resize(static_cast<std::size_t>(60.0 * rate));
    for (auto& v : data[s]) v = g(rng);
    w[id] = SignalView{data[s], rate};
  }
  for (auto _ : state) benchmark::DoNotOptimize(compute_features(w));
}
BENCHMARK(BM_ComputeFeatures);

void BM_Periodogram(benchmark::State& state) {
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (auto& v : x) v = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(dsp::periodogram(x, 32.0));
}
BENCHMARK(BM_Periodogram)->Arg(240)->Arg(1920);

void BM_ExtractDay(benchmark::State& state) {
  synth::SynthOptions o;
  o.prompts_per_day = 2;
  o.slot_minutes = 30;
  const auto day = synth::generate_day(o, 0, 3);
  const auto pre = preprocess(day.recording);
  for (auto _ : state) benchmark::DoNotOptimize(extract_all(pre));
}
BENCHMARK(BM_ExtractDay)->Unit(benchmark::kMillisecond);

}  // namespace
