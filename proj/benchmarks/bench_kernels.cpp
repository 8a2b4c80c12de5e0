#include <benchmark/benchmark.h>

#include <salsa/kernels.hpp>
#include <salsa/rng.hpp>
#include <salsa/salsa.hpp>

namespace {

salsa::Matrix random_points(long n, long dims, std::uint64_t seed) {
    salsa::SplitMix64 rng(seed);
    salsa::Matrix x(n, dims);
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < dims; ++j) x(i, j) = rng.uniform(-1.0, 1.0);
    }
    return x;
}

void BM_GirardNewton(benchmark::State& state) {
    const int dims = static_cast<int>(state.range(0));
    const int order = static_cast<int>(state.range(1));
    salsa::SplitMix64 rng(7);
    std::vector<double> s(static_cast<size_t>(dims));
    for (auto& v : s) v = rng.uniform(0.0, 1.0);
    salsa::EspWorkspace ws;
    for (auto _ : state) {
        salsa::girard_newton_esp(s, order, ws);
        benchmark::DoNotOptimize(ws.e.back());
    }
}
BENCHMARK(BM_GirardNewton)
    ->Args({64, 4})
    ->Args({64, 8})
    ->Args({64, 16})
    ->Args({128, 8})
    ->Args({256, 8});

void BM_BruteForceEsp(benchmark::State& state) {
    const int dims = static_cast<int>(state.range(0));
    const int order = static_cast<int>(state.range(1));
    salsa::SplitMix64 rng(8);
    std::vector<double> s(static_cast<size_t>(dims));
    for (auto& v : s) v = rng.uniform(0.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(salsa::brute_force_esp(s, order));
    }
}
BENCHMARK(BM_BruteForceEsp)->Args({12, 4})->Args({12, 6})->Args({16, 4});

void BM_KernelMatrix(benchmark::State& state) {
    const long n = state.range(0);
    const int dims = static_cast<int>(state.range(1));
    const int order = static_cast<int>(state.range(2));
    const salsa::Matrix x = random_points(n, dims, 9);
    const salsa::EspKernelSpec spec(order, salsa::Vector::Ones(dims));
    for (auto _ : state) {
        const salsa::Matrix k = salsa::kernel_matrix(x, spec, 1);
        benchmark::DoNotOptimize(k(0, 0));
    }
}
BENCHMARK(BM_KernelMatrix)
    ->Args({200, 16, 4})
    ->Args({200, 32, 4})
    ->Args({200, 64, 4})
    ->Unit(benchmark::kMillisecond);

void BM_Fit(benchmark::State& state) {
    const long n = state.range(0);
    const int dims = static_cast<int>(state.range(1));
    const salsa::Matrix x = random_points(n, dims, 10);
    salsa::Vector y(n);
    for (long i = 0; i < n; ++i) y[i] = std::sin(x(i, 0)) + x(i, 1) * x(i, 1);
    salsa::SalsaConfig config;
    config.order = 3;
    config.lambda = 1e-3;
    for (auto _ : state) {
        const salsa::FittedSalsa model = salsa::fit(x, y, config);
        benchmark::DoNotOptimize(model.training_mse());
    }
}
BENCHMARK(BM_Fit)->Args({200, 10})->Args({400, 10})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
