// Monte-Carlo harness for OFDM-IM PAPR dithering experiments.
//
// Subcommands:
//   papr          PAPR CCDF run
//   ber           BER-vs-SNR sweep
//   constellation frequency-domain scatter (super constellation)
//   solve-one     single-block solver inspection, JSON to stdout
//
// Exit codes: 0 success, 1 bad arguments, 2 I/O failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ofdmim/simulation.hpp"

namespace {

struct CliOptions {
    ofdmim::RunSpec spec;
    std::string scheme = "original";
    std::string denominator = "ensemble";
    std::vector<double> snr_grid;
    std::string out_dir = "runs";
    std::uint64_t block_index = 0;
    bool quiet = false;
};

void print_summary(const ofdmim::RunReport& report, const std::string& dir) {
    std::cout << "run " << report.run_hash() << " -> " << dir << "\n";
    std::cout << "  energy per bit: " << report.energy_per_bit
              << "  mean nu: " << report.mean_nu << "  min nu: " << report.min_nu << "\n";
    if (!report.ber.empty()) {
        for (const auto& p : report.ber)
            std::cout << "  snr " << p.snr_db << " dB: ber " << p.ber << " (" << p.errors
                      << " errors / " << p.bits << " bits)\n";
    }
    std::cout << "  solver: mean iterations " << report.mean_iterations
              << ", nonconverged fraction " << report.nonconverged_fraction << "\n";
    std::cout << "  wall: " << report.wall_seconds << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OFDM-IM PAPR dithering Monte-Carlo harness"};
    app.set_config("--config", "", "Read options from a key=value file");

    CliOptions opt;
    app.add_option("--N", opt.spec.N, "Subcarrier count")->capture_default_str();
    app.add_option("--n", opt.spec.n, "Subblock length")->capture_default_str();
    app.add_option("--k", opt.spec.k, "Active subcarriers per subblock")->capture_default_str();
    app.add_option("--M", opt.spec.M, "Constellation order")->capture_default_str();
    app.add_option("--scheme", opt.scheme, "original | single-level | multilevel")
        ->capture_default_str();
    app.add_option("--R", opt.spec.single_level_radius, "Single-level dither radius")
        ->capture_default_str();
    app.add_option("--R1", opt.spec.base_radius, "Multilevel base radius R1")->capture_default_str();
    app.add_flag("--allow-unsafe-radius", opt.spec.allow_unsafe_radius,
                 "Permit R1 >= A_1 (breaks the detection margin)");
    app.add_option("--trials", opt.spec.trials, "Blocks per run / calibration pass")
        ->capture_default_str();
    app.add_option("--seed", opt.spec.seed, "Master seed")->capture_default_str();
    app.add_option("--snr", opt.snr_grid, "BER SNR grid in dB (ascending)")->delimiter(',');
    app.add_option("--ccdf-start", opt.spec.ccdf_start_db, "CCDF grid start, dB")
        ->capture_default_str();
    app.add_option("--ccdf-stop", opt.spec.ccdf_stop_db, "CCDF grid stop, dB")->capture_default_str();
    app.add_option("--ccdf-step", opt.spec.ccdf_step_db, "CCDF grid step, dB")->capture_default_str();
    app.add_option("--oversample", opt.spec.oversample, "Peak oversampling factor J")
        ->capture_default_str();
    app.add_option("--denominator", opt.denominator, "ensemble | per-block")->capture_default_str();
    app.add_option("--max-bits", opt.spec.max_bits_per_point, "Bit budget per BER point")
        ->capture_default_str();
    app.add_option("--target-errors", opt.spec.target_errors, "Error target per BER point")
        ->capture_default_str();
    app.add_option("--workers", opt.spec.workers, "Worker threads (0 = hardware)")
        ->capture_default_str();
    app.add_option("--out", opt.out_dir, "Output directory root")->capture_default_str();
    app.add_flag("--quiet", opt.quiet, "Suppress the stdout summary");

    app.add_option("--max-iters", opt.spec.solver.max_iterations, "Solver iteration budget")
        ->capture_default_str();
    app.add_option("--tol", opt.spec.solver.tolerance, "Solver relative peak tolerance")
        ->capture_default_str();
    app.add_option("--patience", opt.spec.solver.patience, "Quiet iterations before stopping")
        ->capture_default_str();
    app.add_option("--smooth-start", opt.spec.solver.smoothing_start,
                   "Initial softmax temperature, x initial peak")
        ->capture_default_str();
    app.add_option("--smooth-decay", opt.spec.solver.smoothing_decay, "Temperature decay factor")
        ->capture_default_str();
    app.add_option("--smooth-interval", opt.spec.solver.smoothing_interval,
                   "Iterations between temperature decays")
        ->capture_default_str();
    app.add_option("--smooth-floor", opt.spec.solver.smoothing_floor,
                   "Temperature floor, x initial peak")
        ->capture_default_str();
    app.add_option("--restarts", opt.spec.solver.restarts, "Solver restart count")
        ->capture_default_str();
    app.add_option("--solver-seed", opt.spec.solver.seed, "Seed for solver random starts")
        ->capture_default_str();

    auto* papr = app.add_subcommand("papr", "PAPR CCDF run");
    auto* ber = app.add_subcommand("ber", "BER-vs-SNR sweep");
    auto* constellation = app.add_subcommand("constellation", "Super-constellation scatter");
    auto* solve_one = app.add_subcommand("solve-one", "Single-block solver inspection");
    solve_one->add_option("--block", opt.block_index, "Block (stream) index")
        ->capture_default_str();
    for (auto* sub : {papr, ber, constellation, solve_one}) sub->fallthrough();
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        opt.spec.scheme = ofdmim::scheme_from_string(opt.scheme);
        if (opt.denominator == "ensemble")
            opt.spec.denominator = ofdmim::DenominatorMode::ensemble;
        else if (opt.denominator == "per-block")
            opt.spec.denominator = ofdmim::DenominatorMode::per_block;
        else
            throw std::invalid_argument("unknown denominator mode: " + opt.denominator);
        if (!opt.snr_grid.empty()) opt.spec.snr_grid_db = opt.snr_grid;

        if (solve_one->parsed()) {
            std::cout << ofdmim::solve_one_json(opt.spec, opt.block_index);
            return 0;
        }

        ofdmim::RunReport report;
        if (papr->parsed())
            report = ofdmim::run_papr(opt.spec);
        else if (ber->parsed())
            report = ofdmim::run_ber(opt.spec);
        else
            report = ofdmim::dump_super_constellation(opt.spec);

        std::string dir;
        try {
            dir = ofdmim::write_run(report, opt.out_dir);
        } catch (const std::runtime_error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
        if (!opt.quiet) print_summary(report, dir);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
