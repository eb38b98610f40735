#include "ofdmim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace ofdmim {

TimeSignal awgn(const TimeSignal& x, double energy_per_bit, double snr_db, Philox& rng) {
    if (energy_per_bit <= 0.0) throw std::invalid_argument("awgn: energy per bit must be positive");
    const double n0 = energy_per_bit / std::pow(10.0, snr_db / 10.0);
    const double sigma = std::sqrt(n0 / 2.0);

    TimeSignal y = x;
    for (cplx& sample : y.samples) {
        auto [g_re, g_im] = rng.next_gaussian_pair();
        sample += cplx(sigma * g_re, sigma * g_im);
    }
    return y;
}

}  // namespace ofdmim
