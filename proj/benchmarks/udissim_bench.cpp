#include <benchmark/benchmark.h>

#include <random>

#include "ust/shapelet.hpp"
#include "ust/uncertain.hpp"

namespace {

ust::UncertainVector random_series(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> value;
    std::uniform_real_distribution<double> delta(0.0, 0.3);
    ust::UncertainVector v;
    for (std::size_t i = 0; i < n; ++i) v.emplace_back(value(rng), delta(rng));
    return v;
}

void BM_Udissim(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_series(n, 1);
    const auto b = random_series(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(ust::udissim(a, b));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Udissim)->RangeMultiplier(4)->Range(16, 1024);

void BM_SubsequenceDistance(benchmark::State& state) {
    const auto len = static_cast<std::size_t>(state.range(0));
    const auto series = random_series(512, 3);
    const auto s = random_series(len, 4);
    for (auto _ : state) benchmark::DoNotOptimize(ust::subsequence_distance(s, series));
}
BENCHMARK(BM_SubsequenceDistance)->Arg(8)->Arg(32)->Arg(128);

}  // namespace
