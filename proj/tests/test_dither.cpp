#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ofdmim/dither.hpp"
#include "ofdmim/index_mapper.hpp"
#include "ofdmim/metrics.hpp"
#include "ofdmim/parallel.hpp"
#include "ofdmim/rng.hpp"
#include "ofdmim/spectral_transform.hpp"

using namespace ofdmim;

namespace {

BitVec random_bits(Philox& rng, int m) {
    BitVec bits(static_cast<std::size_t>(m));
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
    return bits;
}

struct TestBench {
    SystemConfig cfg;
    Constellation cons;
    LegalPatternSet set;

    TestBench(int N, int n, int k, int M)
        : cfg(make_config(N, n, k, M)), cons(make_qam(M)), set(build_legal_set(n, k)) {}

    FrequencyBlock random_block(std::uint64_t seed, std::uint64_t stream) const {
        Philox rng(seed, stream);
        BitVec bits = random_bits(rng, cfg.m);
        return modulate_block(bits, cfg, cons, set);
    }
};

// Places the given symbol values on subcarriers {0..k-1} of each subblock.
FrequencyBlock manual_block(const SystemConfig& cfg, const std::vector<std::vector<cplx>>& symbols) {
    FrequencyBlock block;
    block.values.assign(static_cast<std::size_t>(cfg.N), cplx(0.0, 0.0));
    block.active.assign(static_cast<std::size_t>(cfg.N), 0);
    for (int beta = 0; beta < cfg.g; ++beta) {
        for (std::size_t gamma = 0; gamma < symbols[static_cast<std::size_t>(beta)].size(); ++gamma) {
            std::size_t pos = static_cast<std::size_t>(beta) * cfg.n + gamma;
            block.values[pos] = symbols[static_cast<std::size_t>(beta)][gamma];
            block.active[pos] = 1;
        }
    }
    return block;
}

// Dense polar grid search over one complex dither coefficient: the
// independent oracle for single-tone instances.
double grid_search_objective(const TimeSignal& x, int tone, double magnitude_step,
                             double phase_step) {
    const std::size_t n = x.size();
    std::vector<cplx> basis(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t t = 0; t < n; ++t) {
        double angle = 2.0 * std::numbers::pi * static_cast<double>(tone) * static_cast<double>(t) /
                       static_cast<double>(n);
        basis[t] = cplx(scale * std::cos(angle), scale * std::sin(angle));
    }
    double peak0 = 0.0;
    for (const cplx& s : x.samples) peak0 = std::max(peak0, std::abs(s));
    const double max_magnitude = 2.0 * std::sqrt(static_cast<double>(n)) * peak0;

    double best = peak0 * peak0;
    std::vector<cplx> rotated(n);
    for (double phase = 0.0; phase < 2.0 * std::numbers::pi; phase += phase_step) {
        cplx u = std::polar(1.0, phase);
        for (std::size_t t = 0; t < n; ++t) rotated[t] = u * basis[t];
        for (double mag = magnitude_step; mag <= max_magnitude; mag += magnitude_step) {
            double peak = 0.0;
            for (std::size_t t = 0; t < n; ++t)
                peak = std::max(peak, std::norm(x.samples[t] + mag * rotated[t]));
            best = std::min(best, peak);
        }
    }
    return best;
}

}  // namespace

TEST_CASE("per-subblock level derivation") {
    TestBench bench(8, 4, 2, 16);
    SUBCASE("mixed levels pick the minimum") {
        FrequencyBlock block = manual_block(
            bench.cfg, {{cplx(1, 1), cplx(3, 3)}, {cplx(3, 1), cplx(1, 3)}});
        auto levels = derive_mu_levels(block, bench.cfg, bench.cons);
        CHECK(levels == std::vector<int>{0, 1});  // sqrt(2) then sqrt(10)
    }
    SUBCASE("QPSK blocks are single level") {
        TestBench qpsk(8, 4, 2, 4);
        FrequencyBlock block = qpsk.random_block(1, 0);
        auto levels = derive_mu_levels(block, qpsk.cfg, qpsk.cons);
        for (int l : levels) CHECK(l == 0);
    }
    SUBCASE("corrupted active amplitude is detected") {
        FrequencyBlock block = manual_block(
            bench.cfg, {{cplx(1, 1), cplx(3, 3)}, {cplx(0.5, 0.1), cplx(1, 3)}});
        CHECK_THROWS_AS(derive_mu_levels(block, bench.cfg, bench.cons), std::invalid_argument);
    }
}

TEST_CASE("multilevel plan radii follow the equal-margin rule") {
    TestBench bench(128, 4, 2, 16);
    FrequencyBlock block = bench.random_block(2, 0);
    const double a1 = std::sqrt(2.0), a2 = std::sqrt(10.0), a3 = std::sqrt(18.0);

    SUBCASE("base radius zero") {
        DitherPlan plan = build_plan(block, bench.cfg, bench.cons, 0.0);
        REQUIRE(plan.radii.size() == 3);
        CHECK(plan.radii[0] == doctest::Approx(0.0));
        CHECK(plan.radii[1] == doctest::Approx(a2 - a1).epsilon(1e-12));  // ~1.75
        CHECK(plan.radii[2] == doctest::Approx(a3 - a1).epsilon(1e-12));  // ~2.83
    }
    SUBCASE("base radius 0.5") {
        DitherPlan plan = build_plan(block, bench.cfg, bench.cons, 0.5);
        CHECK(plan.radii[0] == doctest::Approx(0.5));
        CHECK(plan.radii[1] == doctest::Approx(a2 - a1 + 0.5).epsilon(1e-12));
        CHECK(plan.radii[2] == doctest::Approx(a3 - a1 + 0.5).epsilon(1e-12));
    }
    SUBCASE("groups partition the idle set by subblock level") {
        DitherPlan plan = build_plan(block, bench.cfg, bench.cons, 0.0);
        auto levels = derive_mu_levels(block, bench.cfg, bench.cons);
        std::size_t total = 0;
        for (std::size_t l = 0; l < plan.groups.size(); ++l) {
            for (int idx : plan.groups[l]) {
                CHECK_FALSE(block.active[static_cast<std::size_t>(idx)]);
                CHECK(levels[static_cast<std::size_t>(idx) / 4] == static_cast<int>(l));
            }
            total += plan.groups[l].size();
        }
        CHECK(total == static_cast<std::size_t>(bench.cfg.idle_count()));
        CHECK(plan.subblock_group == levels);
    }
    SUBCASE("unsafe base radius needs the override") {
        CHECK_THROWS_AS(build_plan(block, bench.cfg, bench.cons, 1.5), std::invalid_argument);
        DitherPlan plan = build_plan(block, bench.cfg, bench.cons, 1.5, true);
        CHECK(plan.radii[0] == doctest::Approx(1.5));
        CHECK_THROWS_AS(build_plan(block, bench.cfg, bench.cons, -0.1), std::invalid_argument);
    }
}

TEST_CASE("QPSK reduces the multilevel plan to a single level") {
    TestBench qpsk(32, 4, 2, 4);
    FrequencyBlock block = qpsk.random_block(3, 0);
    DitherPlan multi = build_plan(block, qpsk.cfg, qpsk.cons, 0.4);
    DitherPlan single = build_single_level_plan(block, qpsk.cfg, 0.4);
    REQUIRE(multi.groups.size() == 1);
    CHECK(multi.groups[0] == single.groups[0]);
    CHECK(multi.radii[0] == doctest::Approx(0.4));
}

TEST_CASE("single-level plan covers every idle index") {
    TestBench bench(128, 4, 2, 16);
    FrequencyBlock block = bench.random_block(4, 0);
    DitherPlan plan = build_single_level_plan(block, bench.cfg, 0.5);
    REQUIRE(plan.groups.size() == 1);
    CHECK(plan.groups[0].size() == 64);
    CHECK(plan.radii[0] == doctest::Approx(0.5));
}

TEST_CASE("zero radii pin the dither to zero") {
    TestBench bench(32, 4, 2, 16);
    FrequencyBlock block = bench.random_block(5, 0);
    TimeSignal x = idft(block);
    DitherPlan plan = build_single_level_plan(block, bench.cfg, 0.0);
    DitherSolution sol = solve(x, plan);
    CHECK(sol.converged);
    CHECK(sol.iterations == 0);
    CHECK(sol.objective == doctest::Approx(peak_power(x.samples)).epsilon(1e-12));
    for (const cplx& c : sol.coefficients) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("solver matches the grid-search oracle on single-tone instances") {
    TestBench bench(8, 4, 2, 16);
    for (std::uint64_t instance = 0; instance < 5; ++instance) {
        FrequencyBlock block = bench.random_block(100 + instance, instance);
        TimeSignal x = idft(block);
        // one free tone, effectively unconstrained
        int tone = -1;
        for (int i = 0; i < bench.cfg.N; ++i)
            if (!block.active[static_cast<std::size_t>(i)]) {
                tone = i;
                break;
            }
        REQUIRE(tone >= 0);
        DitherPlan plan;
        plan.groups = {{tone}};
        plan.radii = {1e3};
        plan.subblock_group.assign(static_cast<std::size_t>(bench.cfg.g), 0);

        DitherSolution sol = solve(x, plan);
        double oracle = grid_search_objective(x, tone, 0.01, 0.01);
        CHECK(sol.objective <= oracle * 1.02);
        CHECK(sol.objective >= oracle * 0.98);
    }
}

TEST_CASE("feasibility, usefulness, and margin guarantees on reference blocks") {
    TestBench bench(128, 4, 2, 16);
    const double a1 = bench.cons.levels[0];
    for (std::uint64_t b = 0; b < 25; ++b) {
        FrequencyBlock block = bench.random_block(6, b);
        TimeSignal x = idft(block);
        const double undithered = peak_power(x.samples);

        for (bool multilevel : {true, false}) {
            DitherPlan plan = multilevel ? build_plan(block, bench.cfg, bench.cons, 0.0)
                                         : build_single_level_plan(block, bench.cfg, 0.5);
            DitherSolution sol = solve(x, plan);
            CHECK(sol.objective <= undithered + 1e-9);

            std::size_t c = 0;
            for (std::size_t l = 0; l < plan.groups.size(); ++l)
                for (std::size_t i = 0; i < plan.groups[l].size(); ++i, ++c)
                    CHECK(std::abs(sol.coefficients[c]) <= plan.radii[l] + 1e-9);

            FrequencyBlock dithered = apply_dither(block, plan, sol.coefficients);
            for (std::size_t i = 0; i < dithered.size(); ++i)
                if (block.active[i]) CHECK(dithered.values[i] == block.values[i]);

            double nu = realized_nu(dithered, bench.cfg);
            double bound = multilevel ? a1 - 0.0 : a1 - 0.5;
            CHECK(nu >= bound - 1e-9);

            // reported objective is the exact peak of the returned signal
            CHECK(sol.objective ==
                  doctest::Approx(peak_power(idft(dithered).samples)).epsilon(1e-9));
        }
    }
}

TEST_CASE("single-group plan equals a multilevel plan with equal radii") {
    TestBench bench(64, 4, 2, 16);
    for (std::uint64_t b = 0; b < 5; ++b) {
        FrequencyBlock block = bench.random_block(7, b);
        TimeSignal x = idft(block);
        DitherPlan grouped = build_plan(block, bench.cfg, bench.cons, 0.0);
        for (auto& r : grouped.radii) r = 0.8;
        DitherPlan flat = build_single_level_plan(block, bench.cfg, 0.8);

        DitherSolution a = solve(x, grouped);
        DitherSolution b2 = solve(x, flat);
        CHECK(a.objective == doctest::Approx(b2.objective).epsilon(1e-9));
    }
}

TEST_CASE("doubling every radius lowers the mean objective") {
    TestBench bench(128, 4, 2, 16);
    const std::size_t blocks = 1000;
    std::vector<double> small(blocks), large(blocks);
    parallel_for(blocks, 0, [&](std::size_t b) {
        FrequencyBlock block = bench.random_block(8, b);
        TimeSignal x = idft(block);
        small[b] = solve(x, build_single_level_plan(block, bench.cfg, 0.4)).objective;
        large[b] = solve(x, build_single_level_plan(block, bench.cfg, 0.8)).objective;
    });
    double mean_small = 0.0, mean_large = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
        mean_small += small[b];
        mean_large += large[b];
    }
    CHECK(mean_large < mean_small);
}

TEST_CASE("random starts agree on the optimum") {
    TestBench bench(16, 4, 2, 16);
    for (std::uint64_t instance = 0; instance < 10; ++instance) {
        FrequencyBlock block = bench.random_block(9, instance);
        TimeSignal x = idft(block);
        DitherPlan plan = build_plan(block, bench.cfg, bench.cons, 0.3);

        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (std::uint64_t start = 0; start < 3; ++start) {
            SolverOptions opts;
            opts.random_init = start > 0;
            opts.seed = 1000 + start;
            double obj = solve(x, plan, opts).objective;
            lo = std::min(lo, obj);
            hi = std::max(hi, obj);
        }
        CHECK(hi <= lo * 1.01);
    }
}

TEST_CASE("plan validation") {
    TestBench bench(16, 4, 2, 16);
    FrequencyBlock block = bench.random_block(10, 0);
    TimeSignal x = idft(block);
    SUBCASE("duplicate index across groups") {
        DitherPlan plan;
        plan.groups = {{2}, {2}};
        plan.radii = {0.5, 0.5};
        CHECK_THROWS_AS(solve(x, plan), std::invalid_argument);
    }
    SUBCASE("index out of range") {
        DitherPlan plan;
        plan.groups = {{16}};
        plan.radii = {0.5};
        CHECK_THROWS_AS(solve(x, plan), std::invalid_argument);
    }
    SUBCASE("group/radius count mismatch") {
        DitherPlan plan;
        plan.groups = {{2}};
        plan.radii = {0.5, 0.1};
        CHECK_THROWS_AS(solve(x, plan), std::invalid_argument);
    }
}
