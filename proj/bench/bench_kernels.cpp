#include <benchmark/benchmark.h>

#include "dbar/cauchy.hpp"
#include "dbar/field.hpp"
#include "dbar/testdata.hpp"

namespace {

dbar::ScalarField field(int n, int res) {
    return dbar::testdata::random_field(dbar::GridSpec::uniform(n, res), 7);
}

void BM_cauchy_fft(benchmark::State& st) {
    const auto phi = field(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    for (auto _ : st) benchmark::DoNotOptimize(dbar::cauchy_transform(phi, 1));
}

void BM_cauchy_direct(benchmark::State& st) {
    const auto phi = field(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    for (auto _ : st) benchmark::DoNotOptimize(dbar::reference::cauchy_transform(phi, 1));
}

void BM_dbar_parallel(benchmark::State& st) {
    const auto phi = field(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    for (auto _ : st) benchmark::DoNotOptimize(dbar::dbar_fd(phi, 1));
}

void BM_dbar_serial(benchmark::State& st) {
    const auto phi = field(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    for (auto _ : st) benchmark::DoNotOptimize(dbar::reference::dbar_fd(phi, 1));
}

}  // namespace

BENCHMARK(BM_cauchy_fft)->Args({1, 64})->Args({1, 128})->Args({2, 24})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cauchy_direct)->Args({1, 64})->Args({1, 128})->Args({2, 24})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dbar_parallel)->Args({1, 512})->Args({2, 48})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_dbar_serial)->Args({1, 512})->Args({2, 48})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
