#include "ofdmim/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace ofdmim {

std::size_t FrequencyBlock::active_count() const {
    return static_cast<std::size_t>(std::count(active.begin(), active.end(), std::uint8_t{1}));
}

double energy(std::span<const cplx> v) {
    double e = 0.0;
    for (const cplx& z : v) e += std::norm(z);
    return e;
}

double peak_power(std::span<const cplx> v) {
    double p = 0.0;
    for (const cplx& z : v) p = std::max(p, std::norm(z));
    return p;
}

std::uint32_t bits_to_word(std::span<const std::uint8_t> bits) {
    if (bits.size() > 32) throw std::invalid_argument("bits_to_word: more than 32 bits");
    std::uint32_t w = 0;
    for (std::uint8_t b : bits) w = (w << 1) | (b & 1u);
    return w;
}

void word_to_bits(std::uint32_t word, int count, std::uint8_t* out) {
    for (int i = 0; i < count; ++i) out[i] = static_cast<std::uint8_t>((word >> (count - 1 - i)) & 1u);
}

}  // namespace ofdmim
