#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ofdmim/dither.hpp"
#include "ofdmim/metrics.hpp"
#include "ofdmim/system_config.hpp"

namespace ofdmim {

enum class Scheme {
    original,      // no dither
    single_level,  // common radius R on every idle subcarrier
    multilevel,    // per-level radii R_l = A_l - A_1 + R1
};

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

/// Complete description of a Monte-Carlo run. Everything except `workers`
/// is part of the run identity (the report hash); the worker count never
/// changes any emitted number.
struct RunSpec {
    int N = 128;
    int n = 4;
    int k = 2;
    int M = 16;
    Scheme scheme = Scheme::original;
    double single_level_radius = 0.5;  // R, single-level scheme
    double base_radius = 0.0;          // R1, multilevel scheme
    bool allow_unsafe_radius = false;
    long long trials = 10000;
    std::uint64_t seed = 1;
    std::vector<double> snr_grid_db;   // BER runs; defaults to default_snr_grid()
    double ccdf_start_db = 4.0;
    double ccdf_stop_db = 13.0;
    double ccdf_step_db = 0.25;
    SolverOptions solver;
    DenominatorMode denominator = DenominatorMode::ensemble;
    int oversample = 1;
    long long max_bits_per_point = 1000000;
    long long target_errors = 200;
    int workers = 0;  // 0 = hardware concurrency
};

/// 0 .. 14 dB in 2 dB steps.
std::vector<double> default_snr_grid();

struct BerPoint {
    double snr_db = 0.0;
    double ber = 0.0;
    long long bits = 0;
    long long errors = 0;
};

struct RunReport {
    std::string kind;       // "papr" | "ber" | "constellation"
    std::string spec_json;  // canonical spec echo
    std::string rng_algorithm;
    std::vector<std::vector<int>> legal_patterns;  // 0-based subcarrier indices
    long long calibration_blocks = 0;
    double mean_power_per_sample = 0.0;
    double energy_per_bit = 0.0;
    CcdfTable ccdf;              // papr runs
    std::vector<BerPoint> ber;   // ber runs
    double mean_nu = 0.0;
    double min_nu = 0.0;
    double nonconverged_fraction = 0.0;
    double mean_iterations = 0.0;
    double wall_seconds = 0.0;
    std::string constellation_csv;  // constellation runs

    std::string run_hash() const;     // 16 hex digits over kind + spec echo
    std::string report_json() const;  // full envelope, timing included
    std::string ccdf_csv() const;     // "threshold_db,ccdf"
    std::string ber_csv() const;      // "snr_db,ber,bits,errors"
};

std::string canonical_spec_json(const RunSpec& spec);

/// Two-pass PAPR experiment: generates trials blocks, applies the scheme's
/// dither, estimates the ensemble power, and tabulates the CCDF.
RunReport run_papr(const RunSpec& spec);

/// BER sweep: a calibration pass measures the scheme's energy per bit, then
/// each SNR point simulates until target_errors bit errors or
/// max_bits_per_point bits, whichever first.
RunReport run_ber(const RunSpec& spec);

/// Frequency-domain scatter of trials processed blocks (active symbols plus
/// dither points), as CSV rows re,im,role,level,radius.
RunReport dump_super_constellation(const RunSpec& spec);

/// Single-block solver inspection; returns a JSON summary.
std::string solve_one_json(const RunSpec& spec, std::uint64_t block_index);

/// Writes report.json and the run kind's CSV into <out_dir>/<run_hash>/.
/// Returns the run directory. Throws std::runtime_error on I/O failure.
std::string write_run(const RunReport& report, const std::string& out_dir);

}  // namespace ofdmim
