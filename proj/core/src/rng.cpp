#include "ofdmim/rng.hpp"

#include <cmath>
#include <numbers>

namespace ofdmim {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi) {
    unsigned __int128 product = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(product >> 64);
    return static_cast<std::uint64_t>(product);
}

}  // namespace

Philox::Philox(std::uint64_t seed, std::uint64_t stream)
    : key_{seed, stream}, counter_{0, 0, 0, 0}, block_{0, 0, 0, 0}, cursor_(4) {}

void Philox::refill() {
    // The counter advances before the block is produced (reference
    // behavior): a fresh stream emits the blocks for counters 1, 2, ...
    if (++counter_[0] == 0)
        if (++counter_[1] == 0)
            if (++counter_[2] == 0) ++counter_[3];
    std::uint64_t k0 = key_[0];
    std::uint64_t k1 = key_[1];
    std::uint64_t c0 = counter_[0];
    std::uint64_t c1 = counter_[1];
    std::uint64_t c2 = counter_[2];
    std::uint64_t c3 = counter_[3];
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        std::uint64_t hi0, hi1;
        std::uint64_t lo0 = mulhilo(kMul0, c0, hi0);
        std::uint64_t lo1 = mulhilo(kMul1, c2, hi1);
        c0 = hi1 ^ c1 ^ k0;
        c1 = lo1;
        c2 = hi0 ^ c3 ^ k1;
        c3 = lo0;
    }
    block_[0] = c0;
    block_[1] = c1;
    block_[2] = c2;
    block_[3] = c3;
    cursor_ = 0;
}

void Philox::seek(std::uint64_t c0, std::uint64_t c1, std::uint64_t c2, std::uint64_t c3) {
    counter_[0] = c0;
    counter_[1] = c1;
    counter_[2] = c2;
    counter_[3] = c3;
    cursor_ = 4;
}

std::uint64_t Philox::next_u64() {
    if (cursor_ == 4) refill();
    return block_[cursor_++];
}

double Philox::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Philox::next_open_double() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::pair<double, double> Philox::next_gaussian_pair() {
    double u1 = next_open_double();
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace ofdmim
