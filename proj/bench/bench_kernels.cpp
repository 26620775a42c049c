#include <cmath>
#include <benchmark/benchmark.h>

#include "hdqfc/kernels.hpp"
#include "hdqfc/optics.hpp"
#include "hdqfc/sfg.hpp"

using namespace hdqfc;

namespace {

struct Buffers {
    FieldBuffer signal, visible, pump, factor;

    explicit Buffers(std::size_t n) : signal(n * n), visible(n * n), pump(n * n), factor(n * n) {
        for (std::size_t i = 0; i < n * n; ++i) {
            const double t = 1e-3 * static_cast<double>(i);
            signal[i] = {std::cos(t), std::sin(t)};
            pump[i] = {1e3 * std::cos(2.0 * t), 0.0};
            factor[i] = std::polar(1.0, t);
        }
    }
};

constexpr kernels::CouplingStep step{1e-3, 2e-3, 5e-5, {1.0, 0.0}};

template <class Fn>
void run_multiply(benchmark::State& state, Fn fn) {
    Buffers b(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        fn(std::span<cplx>(b.signal), std::span<const cplx>(b.factor));
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <class Fn>
void run_coupling(benchmark::State& state, Fn fn) {
    Buffers b(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        fn(std::span<cplx>(b.signal), std::span<cplx>(b.visible), std::span<const cplx>(b.pump), step);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <class Fn>
void run_sum(benchmark::State& state, Fn fn) {
    Buffers b(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(fn(std::span<const cplx>(b.signal)));
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_MultiplySerial(benchmark::State& s) { run_multiply(s, kernels::serial::multiply); }
void BM_MultiplyOmp(benchmark::State& s) { run_multiply(s, kernels::omp::multiply); }
void BM_CouplingSerial(benchmark::State& s) { run_coupling(s, kernels::serial::sfg_coupling_step); }
void BM_CouplingOmp(benchmark::State& s) { run_coupling(s, kernels::omp::sfg_coupling_step); }
void BM_SumAbs2Serial(benchmark::State& s) { run_sum(s, kernels::serial::sum_abs2); }
void BM_SumAbs2Omp(benchmark::State& s) { run_sum(s, kernels::omp::sum_abs2); }

void BM_AngularSpectrum(benchmark::State& state) {
    const auto grid = GridSpec::for_beam_radius(100e-6 * std::sqrt(2.0), static_cast<std::size_t>(state.range(0)));
    const auto f = optics::make_lg_mode({1, 0, 100e-6}, grid, 1550e-9, 1e-3);
    for (auto _ : state) benchmark::DoNotOptimize(optics::propagate_angular_spectrum(f, 1e-3));
}

void BM_SplitStepRun(benchmark::State& state) {
    sfg::NumericOptions opts;
    opts.n_points = static_cast<std::size_t>(state.range(0));
    const sfg::CrystalSpec crystal;
    const sfg::WaveTriplet triplet;
    for (auto _ : state)
        benchmark::DoNotOptimize(sfg::numeric_nce_flat_top(1, 200e-6, 100e-6, crystal, triplet, opts));
}

}  // namespace

BENCHMARK(BM_MultiplySerial)->Arg(256)->Arg(512);
BENCHMARK(BM_MultiplyOmp)->Arg(256)->Arg(512);
BENCHMARK(BM_CouplingSerial)->Arg(256)->Arg(512);
BENCHMARK(BM_CouplingOmp)->Arg(256)->Arg(512);
BENCHMARK(BM_SumAbs2Serial)->Arg(256)->Arg(512);
BENCHMARK(BM_SumAbs2Omp)->Arg(256)->Arg(512);
BENCHMARK(BM_AngularSpectrum)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SplitStepRun)->Arg(256)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
