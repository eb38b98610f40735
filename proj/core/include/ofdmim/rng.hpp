#pragma once

#include <cstdint>
#include <utility>

namespace ofdmim {

/// philox4x64-10 counter-based generator. The key is (seed, stream) and the
/// 256-bit counter is the draw index, so every (seed, stream) pair is an
/// independent substream and any draw is reachable in O(1). Matches the
/// reference Philox 4x64 with 10 rounds.
class Philox {
public:
    Philox(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    double next_double();       // [0, 1), 53-bit resolution
    double next_open_double();  // (0, 1]

    /// Positions the stream at an absolute 256-bit counter value; the next
    /// draw is word 0 of the following block (the counter advances before
    /// each block is produced).
    void seek(std::uint64_t c0, std::uint64_t c1 = 0, std::uint64_t c2 = 0, std::uint64_t c3 = 0);

    /// Two independent standard normals (Box-Muller).
    std::pair<double, double> next_gaussian_pair();

    static constexpr const char* algorithm_id() { return "philox4x64-10"; }

private:
    void refill();

    std::uint64_t key_[2];
    std::uint64_t counter_[4];
    std::uint64_t block_[4];
    int cursor_;
};

}  // namespace ofdmim
