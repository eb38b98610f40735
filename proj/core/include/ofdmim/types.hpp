#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace ofdmim {

using cplx = std::complex<double>;

/// Bit container, one bit per element (values 0/1).
using BitVec = std::vector<std::uint8_t>;

/// Frequency-domain OFDM-IM block: N subcarrier values plus the activation
/// mask. Active entries carry constellation symbols; idle entries are zero
/// until a dither is applied.
struct FrequencyBlock {
    std::vector<cplx> values;
    std::vector<std::uint8_t> active;  // 1 = carries a modulated symbol

    std::size_t size() const { return values.size(); }
    std::size_t active_count() const;
};

/// Time-domain signal, the unitary inverse transform of a FrequencyBlock.
struct TimeSignal {
    std::vector<cplx> samples;

    std::size_t size() const { return samples.size(); }
};

double energy(std::span<const cplx> v);      // squared 2-norm
double peak_power(std::span<const cplx> v);  // squared inf-norm

// MSB-first packing of small bit groups (at most 32 bits).
std::uint32_t bits_to_word(std::span<const std::uint8_t> bits);
void word_to_bits(std::uint32_t word, int count, std::uint8_t* out);

}  // namespace ofdmim
