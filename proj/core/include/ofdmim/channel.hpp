#pragma once

#include "ofdmim/rng.hpp"
#include "ofdmim/types.hpp"

namespace ofdmim {

/// Adds circularly-symmetric complex Gaussian noise. The SNR is energy per
/// bit over noise power: each complex sample receives total variance
/// N0 = eb / 10^(snr_db/10), split evenly between the components.
TimeSignal awgn(const TimeSignal& x, double energy_per_bit, double snr_db, Philox& rng);

}  // namespace ofdmim
