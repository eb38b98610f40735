#include "ofdmim/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "ofdmim/channel.hpp"
#include "ofdmim/constellation.hpp"
#include "ofdmim/index_mapper.hpp"
#include "ofdmim/parallel.hpp"
#include "ofdmim/receiver.hpp"
#include "ofdmim/rng.hpp"
#include "ofdmim/spectral_transform.hpp"

namespace ofdmim {

using nlohmann::json;

std::string to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::original: return "original";
        case Scheme::single_level: return "single-level";
        case Scheme::multilevel: return "multilevel";
    }
    return "unknown";
}

Scheme scheme_from_string(const std::string& name) {
    if (name == "original") return Scheme::original;
    if (name == "single-level" || name == "single_level") return Scheme::single_level;
    if (name == "multilevel") return Scheme::multilevel;
    throw std::invalid_argument("unknown scheme: " + name);
}

std::vector<double> default_snr_grid() {
    std::vector<double> grid;
    for (int s = 0; s <= 14; s += 2) grid.push_back(static_cast<double>(s));
    return grid;
}

namespace {

std::vector<double> snr_grid_of(const RunSpec& spec) {
    return spec.snr_grid_db.empty() ? default_snr_grid() : spec.snr_grid_db;
}

std::vector<double> ccdf_grid_of(const RunSpec& spec) {
    if (spec.ccdf_step_db <= 0.0) throw std::invalid_argument("ccdf step must be positive");
    if (spec.ccdf_stop_db < spec.ccdf_start_db)
        throw std::invalid_argument("ccdf grid must be ascending");
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        double t = spec.ccdf_start_db + i * spec.ccdf_step_db;
        if (t > spec.ccdf_stop_db + 1e-12) break;
        grid.push_back(t);
    }
    return grid;
}

void validate(const RunSpec& spec) {
    if (spec.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (spec.oversample < 1) throw std::invalid_argument("oversample must be >= 1");
    if (spec.max_bits_per_point < 1) throw std::invalid_argument("max bits per point must be >= 1");
    if (spec.target_errors < 1) throw std::invalid_argument("target errors must be >= 1");
    auto grid = snr_grid_of(spec);
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw std::invalid_argument("SNR grid must be ascending");
}

struct Context {
    SystemConfig cfg;
    Constellation cons;
    LegalPatternSet set;
    Scheme scheme;
    double single_level_radius;
    double base_radius;
    bool allow_unsafe;
    SolverOptions solver;
    int oversample;
};

Context make_context(const RunSpec& spec) {
    SystemConfig cfg = make_config(spec.N, spec.n, spec.k, spec.M);
    Constellation cons = make_qam(spec.M);
    LegalPatternSet set = build_legal_set(spec.n, spec.k);
    return Context{std::move(cfg), std::move(cons), std::move(set), spec.scheme,
                   spec.single_level_radius, spec.base_radius, spec.allow_unsafe_radius,
                   spec.solver, spec.oversample};
}

BitVec draw_bits(Philox& rng, int m) {
    BitVec bits(static_cast<std::size_t>(m));
    int i = 0;
    while (i < m) {
        std::uint64_t w = rng.next_u64();
        for (int b = 0; b < 64 && i < m; ++b, ++i) {
            bits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(w & 1u);
            w >>= 1;
        }
    }
    return bits;
}

struct BlockRecord {
    double peak = 0.0;
    double block_energy = 0.0;
    double nu = 0.0;
    int iterations = 0;
    bool converged = true;
};

struct BlockWork {
    Philox rng;  // positioned after the bit draws; noise continues here
    BitVec bits;
    FrequencyBlock dithered;
    DitherPlan plan;  // empty groups for the original scheme
    TimeSignal dithered_time;
    BlockRecord record;
};

BlockWork make_block(const Context& ctx, std::uint64_t seed, std::uint64_t stream, bool want_time) {
    Philox rng(seed, stream);
    BitVec bits = draw_bits(rng, ctx.cfg.m);
    FrequencyBlock block = modulate_block(bits, ctx.cfg, ctx.cons, ctx.set);
    TimeSignal x = idft(block);

    BlockWork work{std::move(rng), std::move(bits), {}, {}, {}, {}};
    if (ctx.scheme == Scheme::original) {
        work.record.peak = ctx.oversample == 1 ? peak_power(x.samples)
                                               : oversampled_peak(block, ctx.oversample);
        work.dithered = std::move(block);
        if (want_time) work.dithered_time = std::move(x);
    } else {
        work.plan = ctx.scheme == Scheme::single_level
                        ? build_single_level_plan(block, ctx.cfg, ctx.single_level_radius)
                        : build_plan(block, ctx.cfg, ctx.cons, ctx.base_radius, ctx.allow_unsafe);
        DitherSolution sol = solve(x, work.plan, ctx.solver);
        work.dithered = apply_dither(block, work.plan, sol.coefficients);
        work.record.peak = ctx.oversample == 1 ? sol.objective
                                               : oversampled_peak(work.dithered, ctx.oversample);
        work.record.iterations = sol.iterations;
        work.record.converged = sol.converged;
        if (want_time) work.dithered_time = idft(work.dithered);
    }
    work.record.block_energy = energy(work.dithered.values);
    work.record.nu = realized_nu(work.dithered, ctx.cfg);
    return work;
}

std::vector<std::vector<int>> pattern_table(const LegalPatternSet& set) {
    std::vector<std::vector<int>> table;
    table.reserve(static_cast<std::size_t>(set.size()));
    for (const auto& pattern : set.patterns()) table.push_back(pattern.indices);
    return table;
}

struct CalibrationStats {
    double mean_power_per_sample = 0.0;
    double eb = 0.0;
    double mean_nu = 0.0;
    double min_nu = 0.0;
    long long nonconverged = 0;
    long long solver_iterations = 0;
};

// Serial reduction in block order, so the result is independent of the
// worker schedule.
CalibrationStats reduce_records(const std::vector<BlockRecord>& records, const SystemConfig& cfg) {
    CalibrationStats stats;
    double energy_sum = 0.0;
    double nu_sum = 0.0;
    double nu_min = std::numeric_limits<double>::infinity();
    for (const BlockRecord& r : records) {
        energy_sum += r.block_energy;
        nu_sum += r.nu;
        nu_min = std::min(nu_min, r.nu);
        stats.nonconverged += r.converged ? 0 : 1;
        stats.solver_iterations += r.iterations;
    }
    const double count = static_cast<double>(records.size());
    stats.mean_power_per_sample = energy_sum / count / static_cast<double>(cfg.N);
    stats.eb = energy_sum / count / static_cast<double>(cfg.m);
    stats.mean_nu = nu_sum / count;
    stats.min_nu = nu_min;
    return stats;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

std::string canonical_spec_json(const RunSpec& spec) {
    json s;
    s["N"] = spec.N;
    s["n"] = spec.n;
    s["k"] = spec.k;
    s["M"] = spec.M;
    s["scheme"] = to_string(spec.scheme);
    s["R"] = spec.single_level_radius;
    s["R1"] = spec.base_radius;
    s["allow_unsafe_radius"] = spec.allow_unsafe_radius;
    s["trials"] = spec.trials;
    s["seed"] = spec.seed;
    s["snr_grid_db"] = snr_grid_of(spec);
    s["ccdf_grid_db"] = {{"start", spec.ccdf_start_db},
                         {"stop", spec.ccdf_stop_db},
                         {"step", spec.ccdf_step_db}};
    s["solver"] = {{"max_iterations", spec.solver.max_iterations},
                   {"tolerance", spec.solver.tolerance},
                   {"patience", spec.solver.patience},
                   {"smoothing_start", spec.solver.smoothing_start},
                   {"smoothing_decay", spec.solver.smoothing_decay},
                   {"smoothing_interval", spec.solver.smoothing_interval},
                   {"smoothing_floor", spec.solver.smoothing_floor},
                   {"restarts", spec.solver.restarts},
                   {"random_init", spec.solver.random_init},
                   {"seed", spec.solver.seed}};
    s["denominator"] = spec.denominator == DenominatorMode::ensemble ? "ensemble" : "per-block";
    s["oversample"] = spec.oversample;
    s["max_bits_per_point"] = spec.max_bits_per_point;
    s["target_errors"] = spec.target_errors;
    return s.dump();
}

std::string RunReport::run_hash() const {
    std::uint64_t h = fnv1a64(kind + "\n" + spec_json);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string RunReport::report_json() const {
    json j;
    j["kind"] = kind;
    j["spec"] = json::parse(spec_json);
    j["rng"] = rng_algorithm;
    j["index_base"] = 0;
    j["legal_patterns"] = legal_patterns;
    j["calibration"] = {{"blocks", calibration_blocks},
                        {"mean_power_per_sample", mean_power_per_sample},
                        {"energy_per_bit", energy_per_bit}};
    j["nu"] = {{"mean", mean_nu}, {"min", min_nu}};
    j["solver"] = {{"nonconverged_fraction", nonconverged_fraction},
                   {"mean_iterations", mean_iterations}};
    if (!ccdf.thresholds_db.empty()) {
        j["ccdf"] = {{"thresholds_db", ccdf.thresholds_db},
                     {"probabilities", ccdf.probabilities},
                     {"samples", ccdf.sample_count}};
    }
    if (!ber.empty()) {
        json points = json::array();
        for (const BerPoint& p : ber)
            points.push_back({{"snr_db", p.snr_db}, {"ber", p.ber}, {"bits", p.bits}, {"errors", p.errors}});
        j["ber"] = points;
    }
    j["timing"] = {{"wall_seconds", wall_seconds}};
    return j.dump(2) + "\n";
}

std::string RunReport::ccdf_csv() const {
    std::string out = "threshold_db,ccdf\n";
    for (std::size_t i = 0; i < ccdf.thresholds_db.size(); ++i) {
        out += format_double(ccdf.thresholds_db[i]);
        out += ',';
        out += format_double(ccdf.probabilities[i]);
        out += '\n';
    }
    return out;
}

std::string RunReport::ber_csv() const {
    std::string out = "snr_db,ber,bits,errors\n";
    for (const BerPoint& p : ber) {
        out += format_double(p.snr_db);
        out += ',';
        out += format_double(p.ber);
        out += ',';
        out += std::to_string(p.bits);
        out += ',';
        out += std::to_string(p.errors);
        out += '\n';
    }
    return out;
}

RunReport run_papr(const RunSpec& spec) {
    validate(spec);
    auto start = std::chrono::steady_clock::now();
    Context ctx = make_context(spec);
    const std::size_t trials = static_cast<std::size_t>(spec.trials);

    std::vector<BlockRecord> records(trials);
    parallel_for(trials, spec.workers, [&](std::size_t b) {
        records[b] = make_block(ctx, spec.seed, static_cast<std::uint64_t>(b), false).record;
    });

    CalibrationStats stats = reduce_records(records, ctx.cfg);

    std::vector<double> papr_db(trials);
    for (std::size_t b = 0; b < trials; ++b) {
        double denom = spec.denominator == DenominatorMode::ensemble
                           ? stats.mean_power_per_sample
                           : records[b].block_energy / static_cast<double>(ctx.cfg.N);
        papr_db[b] = 10.0 * std::log10(records[b].peak / denom);
    }

    RunReport report;
    report.kind = "papr";
    report.spec_json = canonical_spec_json(spec);
    report.rng_algorithm = Philox::algorithm_id();
    report.legal_patterns = pattern_table(ctx.set);
    report.calibration_blocks = spec.trials;
    report.mean_power_per_sample = stats.mean_power_per_sample;
    report.energy_per_bit = stats.eb;
    auto grid = ccdf_grid_of(spec);
    report.ccdf = ccdf(papr_db, grid);
    report.mean_nu = stats.mean_nu;
    report.min_nu = stats.min_nu;
    report.nonconverged_fraction = static_cast<double>(stats.nonconverged) / static_cast<double>(trials);
    report.mean_iterations = static_cast<double>(stats.solver_iterations) / static_cast<double>(trials);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

RunReport run_ber(const RunSpec& spec) {
    validate(spec);
    auto start = std::chrono::steady_clock::now();
    Context ctx = make_context(spec);
    const std::size_t trials = static_cast<std::size_t>(spec.trials);

    // Calibration pass: measure this scheme's energy per bit.
    std::vector<BlockRecord> records(trials);
    parallel_for(trials, spec.workers, [&](std::size_t b) {
        records[b] = make_block(ctx, spec.seed, static_cast<std::uint64_t>(b), false).record;
    });
    CalibrationStats stats = reduce_records(records, ctx.cfg);

    const auto snr_grid = snr_grid_of(spec);
    const long long bits_per_block = ctx.cfg.m;
    long long nonconverged = stats.nonconverged;
    long long solver_iterations = stats.solver_iterations;
    long long solved_blocks = static_cast<long long>(trials);

    std::vector<BerPoint> points;
    points.reserve(snr_grid.size());
    for (std::size_t j = 0; j < snr_grid.size(); ++j) {
        const double snr_db = snr_grid[j];
        const std::uint64_t stream_base = (static_cast<std::uint64_t>(j) + 1) << 32;

        BerPoint point;
        point.snr_db = snr_db;
        std::uint64_t block = 0;
        bool done = false;
        const std::size_t batch_size = 64;
        std::vector<int> errors(batch_size);
        std::vector<int> iters(batch_size);
        std::vector<std::uint8_t> conv(batch_size);
        while (!done) {
            long long blocks_left =
                (spec.max_bits_per_point - point.bits + bits_per_block - 1) / bits_per_block;
            std::size_t batch = static_cast<std::size_t>(
                std::min<long long>(static_cast<long long>(batch_size), std::max<long long>(blocks_left, 1)));
            parallel_for(batch, spec.workers, [&](std::size_t i) {
                BlockWork work = make_block(ctx, spec.seed, stream_base + block + i, true);
                TimeSignal noisy = awgn(work.dithered_time, stats.eb, snr_db, work.rng);
                ReceiveResult rx = receive_block(noisy, ctx.cfg, ctx.cons, ctx.set);
                errors[i] = compare_block(work.bits, rx, ctx.cfg).bit_errors;
                iters[i] = work.record.iterations;
                conv[i] = work.record.converged ? 1 : 0;
            });
            // Consume in block order; the cut point is schedule-independent.
            for (std::size_t i = 0; i < batch; ++i) {
                point.bits += bits_per_block;
                point.errors += errors[i];
                if (ctx.scheme != Scheme::original) {
                    ++solved_blocks;
                    solver_iterations += iters[i];
                    nonconverged += conv[i] ? 0 : 1;
                }
                if (point.errors >= spec.target_errors || point.bits >= spec.max_bits_per_point) {
                    done = true;
                    break;
                }
            }
            block += batch;
        }
        point.ber = static_cast<double>(point.errors) / static_cast<double>(point.bits);
        points.push_back(point);
    }

    RunReport report;
    report.kind = "ber";
    report.spec_json = canonical_spec_json(spec);
    report.rng_algorithm = Philox::algorithm_id();
    report.legal_patterns = pattern_table(ctx.set);
    report.calibration_blocks = spec.trials;
    report.mean_power_per_sample = stats.mean_power_per_sample;
    report.energy_per_bit = stats.eb;
    report.ber = std::move(points);
    report.mean_nu = stats.mean_nu;
    report.min_nu = stats.min_nu;
    report.nonconverged_fraction =
        static_cast<double>(nonconverged) / static_cast<double>(std::max<long long>(solved_blocks, 1));
    report.mean_iterations =
        static_cast<double>(solver_iterations) / static_cast<double>(std::max<long long>(solved_blocks, 1));
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

RunReport dump_super_constellation(const RunSpec& spec) {
    validate(spec);
    auto start = std::chrono::steady_clock::now();
    Context ctx = make_context(spec);
    const std::size_t trials = static_cast<std::size_t>(spec.trials);

    std::vector<std::string> rows(trials);
    std::vector<BlockRecord> records(trials);
    parallel_for(trials, spec.workers, [&](std::size_t b) {
        BlockWork work = make_block(ctx, spec.seed, static_cast<std::uint64_t>(b), false);
        records[b] = work.record;
        std::vector<int> group_of(static_cast<std::size_t>(ctx.cfg.N), -1);
        for (std::size_t l = 0; l < work.plan.groups.size(); ++l)
            for (int idx : work.plan.groups[l]) group_of[static_cast<std::size_t>(idx)] = static_cast<int>(l);
        std::string& out = rows[b];
        for (int idx = 0; idx < ctx.cfg.N; ++idx) {
            const cplx v = work.dithered.values[static_cast<std::size_t>(idx)];
            const bool is_active = work.dithered.active[static_cast<std::size_t>(idx)] != 0;
            out += format_double(v.real());
            out += ',';
            out += format_double(v.imag());
            out += is_active ? ",active," : ",idle,";
            int level = 0;
            double radius = 0.0;
            if (is_active) {
                level = ctx.cons.level_index(std::abs(v)) + 1;
            } else if (group_of[static_cast<std::size_t>(idx)] >= 0) {
                level = group_of[static_cast<std::size_t>(idx)] + 1;
                radius = work.plan.radii[static_cast<std::size_t>(group_of[static_cast<std::size_t>(idx)])];
            }
            out += std::to_string(level);
            out += ',';
            out += format_double(radius);
            out += '\n';
        }
    });
    CalibrationStats stats = reduce_records(records, ctx.cfg);

    RunReport report;
    report.kind = "constellation";
    report.spec_json = canonical_spec_json(spec);
    report.rng_algorithm = Philox::algorithm_id();
    report.legal_patterns = pattern_table(ctx.set);
    report.calibration_blocks = spec.trials;
    report.mean_power_per_sample = stats.mean_power_per_sample;
    report.energy_per_bit = stats.eb;
    report.mean_nu = stats.mean_nu;
    report.min_nu = stats.min_nu;
    report.nonconverged_fraction = static_cast<double>(stats.nonconverged) / static_cast<double>(trials);
    report.mean_iterations = static_cast<double>(stats.solver_iterations) / static_cast<double>(trials);
    report.constellation_csv = "re,im,role,level,radius\n";
    for (const std::string& row : rows) report.constellation_csv += row;
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string solve_one_json(const RunSpec& spec, std::uint64_t block_index) {
    validate(spec);
    Context ctx = make_context(spec);

    Philox rng(spec.seed, block_index);
    BitVec bits = draw_bits(rng, ctx.cfg.m);
    FrequencyBlock block = modulate_block(bits, ctx.cfg, ctx.cons, ctx.set);
    TimeSignal x = idft(block);
    const double peak_before = peak_power(x.samples);
    const double nu_before = realized_nu(block, ctx.cfg);

    json j;
    j["block_index"] = block_index;
    j["spec"] = json::parse(canonical_spec_json(spec));
    j["peak_power_before"] = peak_before;
    j["nu_before"] = nu_before;

    if (ctx.scheme == Scheme::original) {
        j["peak_power_after"] = peak_before;
        j["nu_after"] = nu_before;
        j["papr_gain_db"] = 0.0;
    } else {
        DitherPlan plan = ctx.scheme == Scheme::single_level
                              ? build_single_level_plan(block, ctx.cfg, ctx.single_level_radius)
                              : build_plan(block, ctx.cfg, ctx.cons, ctx.base_radius, ctx.allow_unsafe);
        DitherSolution sol = solve(x, plan, ctx.solver);
        FrequencyBlock dithered = apply_dither(block, plan, sol.coefficients);
        j["peak_power_after"] = sol.objective;
        j["nu_after"] = realized_nu(dithered, ctx.cfg);
        j["papr_gain_db"] = 10.0 * std::log10(peak_before / sol.objective);
        j["iterations"] = sol.iterations;
        j["converged"] = sol.converged;
        j["radii"] = plan.radii;
        json sizes = json::array();
        for (const auto& group : plan.groups) sizes.push_back(group.size());
        j["group_sizes"] = sizes;
        j["lambda_per_subblock"] = sol.lambda_per_subblock;
    }
    return j.dump(2) + "\n";
}

std::string write_run(const RunReport& report, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::path dir = fs::path(out_dir) / report.run_hash();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create run directory " + dir.string() + ": " + ec.message());

    auto write_file = [&](const fs::path& name, const std::string& content) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + (dir / name).string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + (dir / name).string());
    };

    write_file("report.json", report.report_json());
    if (report.kind == "papr") write_file("ccdf.csv", report.ccdf_csv());
    if (report.kind == "ber") write_file("ber.csv", report.ber_csv());
    if (report.kind == "constellation") write_file("constellation.csv", report.constellation_csv);
    return dir.string();
}

}  // namespace ofdmim
