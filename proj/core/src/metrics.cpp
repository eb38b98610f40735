#include "ofdmim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ofdmim {

PaprSample papr(const TimeSignal& x, DenominatorMode mode, double mean_power_per_sample) {
    if (x.size() == 0) throw std::invalid_argument("papr: empty signal");
    const double e = energy(x.samples);
    if (e <= 0.0) throw std::invalid_argument("papr: zero signal");

    PaprSample sample;
    sample.peak_power = peak_power(x.samples);
    if (mode == DenominatorMode::per_block) {
        sample.denominator = e / static_cast<double>(x.size());
    } else {
        if (mean_power_per_sample <= 0.0)
            throw std::invalid_argument("papr: ensemble mode needs a positive mean power");
        sample.denominator = mean_power_per_sample;
    }
    sample.papr_linear = sample.peak_power / sample.denominator;
    sample.papr_db = 10.0 * std::log10(sample.papr_linear);
    return sample;
}

double realized_nu(const FrequencyBlock& block, const SystemConfig& cfg) {
    if (static_cast<int>(block.size()) != cfg.N)
        throw std::invalid_argument("block length does not match N");
    double nu = std::numeric_limits<double>::infinity();
    for (int beta = 0; beta < cfg.g; ++beta) {
        double mu = std::numeric_limits<double>::infinity();
        double lambda = 0.0;
        for (int i = 0; i < cfg.n; ++i) {
            std::size_t pos = static_cast<std::size_t>(beta) * cfg.n + i;
            double a = std::abs(block.values[pos]);
            if (block.active[pos])
                mu = std::min(mu, a);
            else
                lambda = std::max(lambda, a);
        }
        nu = std::min(nu, mu - lambda);
    }
    return nu;
}

CcdfTable ccdf(std::span<const double> papr_db_samples, std::span<const double> thresholds_db) {
    if (papr_db_samples.empty()) throw std::invalid_argument("ccdf: no samples");
    if (thresholds_db.empty()) throw std::invalid_argument("ccdf: no thresholds");
    if (!std::is_sorted(thresholds_db.begin(), thresholds_db.end()))
        throw std::invalid_argument("ccdf: thresholds must be ascending");

    CcdfTable table;
    table.thresholds_db.assign(thresholds_db.begin(), thresholds_db.end());
    table.sample_count = static_cast<long long>(papr_db_samples.size());

    std::vector<double> sorted(papr_db_samples.begin(), papr_db_samples.end());
    std::sort(sorted.begin(), sorted.end());
    table.probabilities.reserve(thresholds_db.size());
    for (double thr : thresholds_db) {
        auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), thr);
        table.probabilities.push_back(static_cast<double>(above) /
                                      static_cast<double>(sorted.size()));
    }
    return table;
}

std::vector<double> default_ccdf_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 36; ++i) grid.push_back(4.0 + 0.25 * i);
    return grid;
}

double energy_per_bit(std::span<const double> block_energies, int bits_per_block) {
    if (block_energies.empty()) throw std::invalid_argument("energy_per_bit: no blocks");
    if (bits_per_block <= 0) throw std::invalid_argument("energy_per_bit: bits per block must be positive");
    double sum = 0.0;
    for (double e : block_energies) sum += e;
    return sum / static_cast<double>(block_energies.size()) / static_cast<double>(bits_per_block);
}

}  // namespace ofdmim
