#include "ofdmim/dither.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ofdmim/rng.hpp"
#include "ofdmim/spectral_transform.hpp"

namespace ofdmim {

std::size_t DitherPlan::coefficient_count() const {
    std::size_t total = 0;
    for (const auto& group : groups) total += group.size();
    return total;
}

std::vector<int> derive_mu_levels(const FrequencyBlock& block, const SystemConfig& cfg,
                                  const Constellation& cons) {
    if (static_cast<int>(block.size()) != cfg.N)
        throw std::invalid_argument("block length does not match N");
    std::vector<int> levels(static_cast<std::size_t>(cfg.g));
    for (int beta = 0; beta < cfg.g; ++beta) {
        double mu = std::numeric_limits<double>::infinity();
        for (int i = 0; i < cfg.n; ++i) {
            std::size_t pos = static_cast<std::size_t>(beta) * cfg.n + i;
            if (block.active[pos]) mu = std::min(mu, std::abs(block.values[pos]));
        }
        int level = cons.level_index(mu);
        if (level < 0)
            throw std::invalid_argument("subblock " + std::to_string(beta) +
                                        ": active modulus matches no constellation level");
        levels[static_cast<std::size_t>(beta)] = level;
    }
    return levels;
}

DitherPlan build_plan(const FrequencyBlock& block, const SystemConfig& cfg,
                      const Constellation& cons, double base_radius, bool allow_unsafe) {
    if (base_radius < 0.0) throw std::invalid_argument("base radius must be nonnegative");
    const double a1 = cons.levels.front();
    if (base_radius >= a1 && !allow_unsafe)
        throw std::invalid_argument(
            "base radius " + std::to_string(base_radius) + " >= A_1 = " + std::to_string(a1) +
            " breaks the detection margin; pass the unsafe override to proceed");

    std::vector<int> mu = derive_mu_levels(block, cfg, cons);

    DitherPlan plan;
    const int level_count = cons.level_count();
    plan.groups.resize(static_cast<std::size_t>(level_count));
    plan.radii.resize(static_cast<std::size_t>(level_count));
    for (int l = 0; l < level_count; ++l)
        plan.radii[static_cast<std::size_t>(l)] = cons.levels[static_cast<std::size_t>(l)] - a1 + base_radius;
    plan.subblock_group = mu;
    for (int beta = 0; beta < cfg.g; ++beta) {
        auto& group = plan.groups[static_cast<std::size_t>(mu[static_cast<std::size_t>(beta)])];
        for (int i = 0; i < cfg.n; ++i) {
            std::size_t pos = static_cast<std::size_t>(beta) * cfg.n + i;
            if (!block.active[pos]) group.push_back(static_cast<int>(pos));
        }
    }
    return plan;
}

DitherPlan build_single_level_plan(const FrequencyBlock& block, const SystemConfig& cfg,
                                   double radius) {
    if (radius < 0.0) throw std::invalid_argument("radius must be nonnegative");
    DitherPlan plan;
    plan.groups.resize(1);
    plan.radii.assign(1, radius);
    plan.subblock_group.assign(static_cast<std::size_t>(cfg.g), 0);
    for (int pos = 0; pos < cfg.N; ++pos)
        if (!block.active[static_cast<std::size_t>(pos)]) plan.groups[0].push_back(pos);
    return plan;
}

FrequencyBlock apply_dither(const FrequencyBlock& block, const DitherPlan& plan,
                            std::span<const cplx> coefficients) {
    if (coefficients.size() != plan.coefficient_count())
        throw std::invalid_argument("coefficient count does not match the plan");
    FrequencyBlock out = block;
    std::size_t c = 0;
    for (const auto& group : plan.groups)
        for (int idx : group) out.values[static_cast<std::size_t>(idx)] = coefficients[c++];
    return out;
}

namespace {

struct FlatPlan {
    std::vector<int> index;      // idle index per coefficient, groups concatenated
    std::vector<double> radius;  // bound per coefficient
    std::vector<std::size_t> free_pos;  // coefficients with a positive radius
};

FlatPlan flatten(const DitherPlan& plan, std::size_t n) {
    if (plan.groups.size() != plan.radii.size())
        throw std::invalid_argument("plan has " + std::to_string(plan.groups.size()) +
                                    " groups but " + std::to_string(plan.radii.size()) + " radii");
    FlatPlan flat;
    std::vector<std::uint8_t> seen(n, 0);
    for (std::size_t l = 0; l < plan.groups.size(); ++l) {
        double r = plan.radii[l];
        if (r < 0.0) throw std::invalid_argument("negative dither radius");
        for (int idx : plan.groups[l]) {
            if (idx < 0 || static_cast<std::size_t>(idx) >= n)
                throw std::invalid_argument("dither index out of range");
            if (seen[static_cast<std::size_t>(idx)])
                throw std::invalid_argument("dither index appears in two groups");
            seen[static_cast<std::size_t>(idx)] = 1;
            if (r > 0.0) flat.free_pos.push_back(flat.index.size());
            flat.index.push_back(idx);
            flat.radius.push_back(r);
        }
    }
    return flat;
}

// Softmax temperature schedule and smoothed objective evaluation state.
struct Workspace {
    std::vector<cplx> spectrum;   // sparse dither spectrum
    std::vector<cplx> synth;      // its time-domain synthesis
    std::vector<cplx> z;          // dithered signal
    std::vector<double> moduli;   // |z_j|
    std::vector<cplx> weight_dir; // softmax weight times unit phase, per sample
    std::vector<cplx> spectrum_w; // forward transform of weight_dir
};

// Fills ws.z and ws.moduli for the given coefficients; returns the true peak modulus.
double evaluate(const FlatPlan& flat, std::span<const cplx> zeta, std::span<const cplx> x,
                const Fourier& fft, Workspace& ws) {
    std::fill(ws.spectrum.begin(), ws.spectrum.end(), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < flat.index.size(); ++i)
        ws.spectrum[static_cast<std::size_t>(flat.index[i])] = zeta[i];
    fft.inverse(ws.spectrum, ws.synth);
    double peak = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        ws.z[j] = ws.synth[j] + x[j];
        double a = std::abs(ws.z[j]);
        ws.moduli[j] = a;
        peak = std::max(peak, a);
    }
    return peak;
}

// Smoothed peak: eta * log sum exp(|z_j| / eta), stabilized at the max.
double smoothed_objective(const std::vector<double>& moduli, double peak, double eta) {
    double sum = 0.0;
    const double cutoff = peak - 40.0 * eta;
    for (double a : moduli)
        if (a >= cutoff) sum += std::exp((a - peak) / eta);
    return peak + eta * std::log(sum);
}

struct DescentOutcome {
    double peak = 0.0;
    int iterations = 0;
    bool converged = false;
};

DescentOutcome descend(const FlatPlan& flat, std::span<const cplx> x, const Fourier& fft,
                       const SolverOptions& opts, std::vector<cplx>& zeta, Workspace& ws) {
    const std::size_t n = x.size();
    const std::size_t coeffs = flat.index.size();

    double peak = evaluate(flat, zeta, x, fft, ws);
    DescentOutcome out;
    out.peak = peak;
    if (flat.free_pos.empty() || peak == 0.0) {
        out.converged = true;
        return out;
    }

    const double peak0 = peak;
    double eta = std::max(opts.smoothing_start * peak0, 1e-300);
    const double eta_floor = std::max(opts.smoothing_floor * peak0, 1e-300);
    double fval = smoothed_objective(ws.moduli, peak, eta);

    std::vector<cplx> candidate(coeffs);
    std::vector<cplx> gradient(coeffs);
    double step = 1.0;
    double prev_peak = peak;
    int quiet = 0;

    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        // Gradient of the smoothed peak with respect to the coefficients:
        // softmax weights over samples, rotated by the sample phase, carried
        // back to the dither bins by the forward transform.
        double wsum = 0.0;
        const double cutoff = peak - 40.0 * eta;
        for (std::size_t j = 0; j < n; ++j) {
            double a = ws.moduli[j];
            if (a >= cutoff && a > 0.0) {
                double w = std::exp((a - peak) / eta);
                ws.weight_dir[j] = ws.z[j] * (w / a);
                wsum += w;
            } else {
                ws.weight_dir[j] = cplx(0.0, 0.0);
            }
        }
        const double inv_wsum = 1.0 / wsum;
        for (std::size_t j = 0; j < n; ++j) ws.weight_dir[j] *= inv_wsum;
        fft.forward(ws.weight_dir, ws.spectrum_w);
        for (std::size_t i = 0; i < coeffs; ++i)
            gradient[i] = ws.spectrum_w[static_cast<std::size_t>(flat.index[i])];

        // Backtracking projected step (Armijo on the smoothed objective).
        bool accepted = false;
        double try_step = step * 2.0;
        double new_peak = peak;
        for (int attempt = 0; attempt < 60; ++attempt) {
            std::copy(zeta.begin(), zeta.end(), candidate.begin());
            double move2 = 0.0;
            for (std::size_t pos : flat.free_pos) {
                cplx c = zeta[pos] - try_step * gradient[pos];
                double a = std::abs(c);
                double r = flat.radius[pos];
                if (a > r) c *= r / a;
                move2 += std::norm(c - zeta[pos]);
                candidate[pos] = c;
            }
            if (move2 == 0.0) break;
            double cand_peak = evaluate(flat, candidate, x, fft, ws);
            double cand_f = smoothed_objective(ws.moduli, cand_peak, eta);
            if (cand_f <= fval - 1e-4 * move2 / try_step) {
                zeta.swap(candidate);
                fval = cand_f;
                new_peak = cand_peak;
                step = try_step;
                accepted = true;
                break;
            }
            try_step *= 0.5;
        }
        if (!accepted) {
            // ws.z/ws.moduli describe the rejected candidate; restore them.
            evaluate(flat, zeta, x, fft, ws);
        }
        peak = new_peak;
        out.iterations = iter;

        if (iter % opts.smoothing_interval == 0 && eta > eta_floor) {
            eta = std::max(eta * opts.smoothing_decay, eta_floor);
            fval = smoothed_objective(ws.moduli, peak, eta);
        }

        double rel = std::abs(prev_peak - peak) / std::max(peak, 1e-300);
        quiet = rel < opts.tolerance ? quiet + 1 : 0;
        prev_peak = peak;
        if (quiet >= opts.patience) {
            out.converged = true;
            break;
        }
    }
    out.peak = peak;
    return out;
}

}  // namespace

DitherSolution solve(const TimeSignal& x, const DitherPlan& plan, const SolverOptions& opts) {
    const std::size_t n = x.size();
    if (n == 0) throw std::invalid_argument("empty signal");
    FlatPlan flat = flatten(plan, n);
    const std::size_t coeffs = flat.index.size();
    const Fourier& fft = fourier_for(n);

    Workspace ws;
    ws.spectrum.resize(n);
    ws.synth.resize(n);
    ws.z.resize(n);
    ws.moduli.resize(n);
    ws.weight_dir.resize(n);
    ws.spectrum_w.resize(n);

    DitherSolution best;
    int total_iterations = 0;
    const int restarts = std::max(opts.restarts, 1);
    for (int r = 0; r < restarts; ++r) {
        std::vector<cplx> zeta(coeffs, cplx(0.0, 0.0));
        if (opts.random_init || r > 0) {
            Philox rng(opts.seed, static_cast<std::uint64_t>(r));
            for (std::size_t pos : flat.free_pos) {
                double radius = flat.radius[pos] * std::sqrt(rng.next_double());
                double angle = 2.0 * std::numbers::pi * rng.next_double();
                zeta[pos] = std::polar(radius, angle);
            }
        }
        DescentOutcome outcome = descend(flat, x.samples, fft, opts, zeta, ws);
        total_iterations += outcome.iterations;
        double objective = outcome.peak * outcome.peak;
        if (r == 0 || objective < best.objective) {
            best.coefficients = std::move(zeta);
            best.objective = objective;
            best.converged = outcome.converged;
        }
    }
    best.iterations = total_iterations;

    // Recompute the reported objective from scratch off the final iterate,
    // and assert feasibility of every coefficient.
    double final_peak = evaluate(flat, best.coefficients, x.samples, fft, ws);
    best.objective = final_peak * final_peak;
    for (std::size_t i = 0; i < coeffs; ++i)
        if (std::abs(best.coefficients[i]) > flat.radius[i] + 1e-9)
            throw std::logic_error("solve: returned coefficient violates its radius bound");

    if (!plan.subblock_group.empty()) {
        const std::size_t g = plan.subblock_group.size();
        const std::size_t sub = n / g;
        best.lambda_per_subblock.assign(g, 0.0);
        for (std::size_t i = 0; i < coeffs; ++i) {
            std::size_t beta = static_cast<std::size_t>(flat.index[i]) / sub;
            best.lambda_per_subblock[beta] =
                std::max(best.lambda_per_subblock[beta], std::abs(best.coefficients[i]));
        }
    }
    return best;
}

}  // namespace ofdmim
