#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ofdmim/constellation.hpp"
#include "ofdmim/system_config.hpp"
#include "ofdmim/types.hpp"

namespace ofdmim {

/// Dither structure for one block: disjoint groups of idle subcarrier
/// indices, each with a modulus bound. A multilevel plan has one group per
/// amplitude level (a block's idle index lands in the group of its
/// subblock's minimum active amplitude); a single-level plan has one group
/// holding every idle index.
struct DitherPlan {
    std::vector<std::vector<int>> groups;  // idle indices per group, ascending
    std::vector<double> radii;             // modulus bound per group
    std::vector<int> subblock_group;       // group index per subblock

    std::size_t coefficient_count() const;
};

/// Per-subblock amplitude-level index (0-based) of the minimum active-symbol
/// modulus. Throws if an active subblock's minimum modulus matches no
/// constellation level within 1e-9.
std::vector<int> derive_mu_levels(const FrequencyBlock& block, const SystemConfig& cfg,
                                  const Constellation& cons);

/// Multilevel plan under the equal-margin rule: group l gets radius
/// A_l - A_1 + base_radius, so every subblock keeps the same detection
/// margin A_1 - base_radius. base_radius >= A_1 destroys that margin and is
/// rejected unless allow_unsafe is set.
DitherPlan build_plan(const FrequencyBlock& block, const SystemConfig& cfg,
                      const Constellation& cons, double base_radius, bool allow_unsafe = false);

/// One group holding all idle indices with a common radius.
DitherPlan build_single_level_plan(const FrequencyBlock& block, const SystemConfig& cfg,
                                   double radius);

struct SolverOptions {
    int max_iterations = 2000;
    double tolerance = 1e-6;  // relative change of the true peak
    int patience = 10;        // consecutive quiet iterations before stopping
    double smoothing_start = 0.1;   // initial softmax temperature, x initial peak
    double smoothing_decay = 0.7;   // multiplier applied every smoothing_interval
    int smoothing_interval = 10;    // iterations between temperature decays
    double smoothing_floor = 1e-6;  // temperature floor, x initial peak
    int restarts = 1;               // independent starts; the best objective wins
    bool random_init = false;       // draw starts inside the radii instead of zero
    std::uint64_t seed = 0;         // used only for random starts
};

struct DitherSolution {
    std::vector<cplx> coefficients;  // per idle index, plan groups concatenated
    double objective = 0.0;          // peak power of the dithered signal, recomputed exactly
    int iterations = 0;              // total across restarts
    bool converged = false;
    std::vector<double> lambda_per_subblock;  // max dither modulus per subblock
};

/// Minimizes the peak power of x plus the dither synthesis, subject to the
/// per-group modulus bounds. Smoothed projected gradient with an annealed
/// softmax temperature and Armijo backtracking; zero-radius coefficients
/// are pinned and excluded from the search. Never throws on a slow
/// instance: an exhausted budget returns converged=false with the best
/// feasible iterate.
DitherSolution solve(const TimeSignal& x, const DitherPlan& plan, const SolverOptions& opts = {});

/// Writes the dither coefficients into a copy of the block. Active entries
/// are untouched; the activation mask is unchanged.
FrequencyBlock apply_dither(const FrequencyBlock& block, const DitherPlan& plan,
                            std::span<const cplx> coefficients);

}  // namespace ofdmim
