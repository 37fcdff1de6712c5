#include <benchmark/benchmark.h>

#include <random>

#include "wristmood/svm.hpp"

namespace {

using namespace wristmood;

Matrix blobs(std::size_t n, std::size_t dim, std::vector<int>& labels) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  Matrix x(n, dim);
  labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = static_cast<int>(i % 3);
    for (std::size_t j = 0; j < dim; ++j) x(i, j) = g(rng) + (j < 5 ? labels[i] : 0);
  }
  return svm::Scaler::fit(x).apply(x);
}

void BM_TrainBinary(benchmark::State& state) {
  std::vector<int> labels;
  const auto x = blobs(static_cast<std::size_t>(state.range(0)), 203, labels);
  std::vector<int> y(labels.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = labels[i] == 0 ? 1 : -1;
  for (auto _ : state) benchmark::DoNotOptimize(svm::train_binary(x, y, 8.0, 1.0 / 203));
}
BENCHMARK(BM_TrainBinary)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_GridSearch(benchmark::State& state) {
  std::vector<int> labels;
  const auto x = blobs(300, 203, labels);
  svm::GridOptions o;
  o.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(svm::grid_search(x, labels, o));
}
BENCHMARK(BM_GridSearch)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace
