#pragma once

#include <span>
#include <vector>

#include "ofdmim/system_config.hpp"
#include "ofdmim/types.hpp"

namespace ofdmim {

struct PaprSample {
    double papr_linear = 0.0;
    double papr_db = 0.0;
    double peak_power = 0.0;
    double denominator = 0.0;  // average power per sample
};

enum class DenominatorMode {
    ensemble,   // run-level mean power per sample, supplied by the caller
    per_block,  // this block's own mean power per sample
};

/// Peak power over average power per sample. In ensemble mode the caller
/// supplies the run-level mean power per sample (two-pass estimate).
PaprSample papr(const TimeSignal& x, DenominatorMode mode, double mean_power_per_sample = 0.0);

/// Detection margin of a (possibly dithered) block: per subblock the
/// minimum active modulus minus the maximum idle modulus, minimized over
/// subblocks.
double realized_nu(const FrequencyBlock& block, const SystemConfig& cfg);

struct CcdfTable {
    std::vector<double> thresholds_db;
    std::vector<double> probabilities;  // P(PAPR > threshold)
    long long sample_count = 0;
};

CcdfTable ccdf(std::span<const double> papr_db_samples, std::span<const double> thresholds_db);

/// 4.0 .. 13.0 dB in 0.25 dB steps.
std::vector<double> default_ccdf_grid();

/// Mean block energy divided by the bits per block.
double energy_per_bit(std::span<const double> block_energies, int bits_per_block);

}  // namespace ofdmim
