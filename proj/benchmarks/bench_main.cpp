#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

#include "calkin/elemop.hpp"
#include "calkin/linalg.hpp"
#include "calkin/seq.hpp"

namespace {

using namespace calkin;

std::vector<double> decreasing_values(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = std::abs(gauss(rng));
    std::sort(v.begin(), v.end(), std::greater<double>());
    return v;
}

linalg::Matrix random_matrix(int k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    linalg::Matrix m(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            m(i, j) = linalg::Complex(gauss(rng), gauss(rng));
    return m;
}

void BM_TensorPrefixFrontier(benchmark::State& state) {
    const std::size_t len = static_cast<std::size_t>(state.range(0));
    const auto a = seq::DecreasingSeq::from_values(decreasing_values(len, 1));
    const auto b = seq::DecreasingSeq::from_values(decreasing_values(len, 2));
    const std::size_t n = len * len;
    for (auto _ : state)
        benchmark::DoNotOptimize(seq::tensor_prefix(a, b, n));
}
BENCHMARK(BM_TensorPrefixFrontier)->Arg(32)->Arg(128)->Arg(512);

// The frontier's home turf: a thin slice off a large grid.
void BM_TensorPrefixTopSlice(benchmark::State& state) {
    const std::size_t len = static_cast<std::size_t>(state.range(0));
    const auto a = seq::DecreasingSeq::from_values(decreasing_values(len, 1));
    const auto b = seq::DecreasingSeq::from_values(decreasing_values(len, 2));
    for (auto _ : state)
        benchmark::DoNotOptimize(seq::tensor_prefix(a, b, len));
}
BENCHMARK(BM_TensorPrefixTopSlice)->Arg(128)->Arg(512)->Arg(2048);

void BM_TensorPrefixBruteForce(benchmark::State& state) {
    const std::size_t len = static_cast<std::size_t>(state.range(0));
    const std::vector<double> a = decreasing_values(len, 1);
    const std::vector<double> b = decreasing_values(len, 2);
    for (auto _ : state) {
        std::vector<double> prod;
        prod.reserve(len * len);
        for (double x : a)
            for (double y : b) prod.push_back(x * y);
        std::sort(prod.begin(), prod.end(), std::greater<double>());
        benchmark::DoNotOptimize(prod);
    }
}
BENCHMARK(BM_TensorPrefixBruteForce)->Arg(32)->Arg(128)->Arg(512);

void BM_ComplexSvd(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const linalg::Matrix m = random_matrix(k, 3);
    for (auto _ : state) benchmark::DoNotOptimize(linalg::svd(m));
}
BENCHMARK(BM_ComplexSvd)->Arg(8)->Arg(16)->Arg(64);

void BM_UpperBounds(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    linalg::Matrix a = random_matrix(k, 4);
    linalg::Matrix b = random_matrix(k, 5);
    a /= linalg::spectral_norm(a);
    b /= linalg::spectral_norm(b);
    const std::size_t count = static_cast<std::size_t>(k) * k;
    for (auto _ : state)
        benchmark::DoNotOptimize(elemop::a_upper_bounds(a, b, 2.0 / 3.0, count));
}
BENCHMARK(BM_UpperBounds)->Arg(4)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
