#include <benchmark/benchmark.h>

#include "ofdmim/constellation.hpp"
#include "ofdmim/dither.hpp"
#include "ofdmim/index_mapper.hpp"
#include "ofdmim/receiver.hpp"
#include "ofdmim/rng.hpp"
#include "ofdmim/spectral_transform.hpp"
#include "ofdmim/system_config.hpp"

namespace {

using namespace ofdmim;

struct Fixture {
    SystemConfig cfg = make_config(128, 4, 2, 16);
    Constellation cons = make_qam(16);
    LegalPatternSet set = build_legal_set(4, 2);

    FrequencyBlock block(std::uint64_t stream) const {
        Philox rng(42, stream);
        BitVec bits(static_cast<std::size_t>(cfg.m));
        for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
        return modulate_block(bits, cfg, cons, set);
    }
};

void BM_InverseTransform128(benchmark::State& state) {
    Fixture f;
    FrequencyBlock x = f.block(0);
    for (auto _ : state) {
        TimeSignal t = idft(x);
        benchmark::DoNotOptimize(t.samples.data());
    }
}
BENCHMARK(BM_InverseTransform128);

void BM_ModulateReceive(benchmark::State& state) {
    Fixture f;
    FrequencyBlock x = f.block(1);
    TimeSignal t = idft(x);
    for (auto _ : state) {
        ReceiveResult rx = receive_block(t, f.cfg, f.cons, f.set);
        benchmark::DoNotOptimize(rx.bits.data());
    }
}
BENCHMARK(BM_ModulateReceive);

void BM_SolveSingleLevel(benchmark::State& state) {
    Fixture f;
    std::uint64_t stream = 0;
    for (auto _ : state) {
        FrequencyBlock x = f.block(stream++);
        TimeSignal t = idft(x);
        DitherPlan plan = build_single_level_plan(x, f.cfg, 0.5);
        DitherSolution sol = solve(t, plan);
        benchmark::DoNotOptimize(sol.objective);
    }
}
BENCHMARK(BM_SolveSingleLevel)->Unit(benchmark::kMillisecond);

void BM_SolveMultilevel(benchmark::State& state) {
    Fixture f;
    std::uint64_t stream = 0;
    for (auto _ : state) {
        FrequencyBlock x = f.block(stream++);
        TimeSignal t = idft(x);
        DitherPlan plan = build_plan(x, f.cfg, f.cons, 0.0);
        DitherSolution sol = solve(t, plan);
        benchmark::DoNotOptimize(sol.objective);
    }
}
BENCHMARK(BM_SolveMultilevel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
