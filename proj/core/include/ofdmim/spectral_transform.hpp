#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ofdmim/types.hpp"

namespace ofdmim {

/// Unitary DFT/IDFT of a fixed length, scaled 1/sqrt(N) in both directions
/// so that energy is preserved. Radix-2 in place for powers of two, direct
/// evaluation otherwise.
class Fourier {
public:
    explicit Fourier(std::size_t n);

    std::size_t size() const { return n_; }

    void forward(std::span<const cplx> in, std::span<cplx> out) const;  // x -> X
    void inverse(std::span<const cplx> in, std::span<cplx> out) const;  // X -> x

private:
    void transform(std::span<cplx> data, const std::vector<cplx>& roots) const;
    void direct(std::span<const cplx> in, std::span<cplx> out, const std::vector<cplx>& roots) const;

    std::size_t n_;
    bool radix2_;
    std::vector<cplx> roots_fwd_;  // e^{-2*pi*i*j/n}
    std::vector<cplx> roots_inv_;  // e^{+2*pi*i*j/n}
    std::vector<std::uint32_t> bitrev_;
};

/// Per-thread cached transform plan for length n.
const Fourier& fourier_for(std::size_t n);

TimeSignal idft(std::span<const cplx> spectrum);
TimeSignal idft(const FrequencyBlock& block);
std::vector<cplx> dft(const TimeSignal& signal);

/// IDFT of the sparse spectrum carrying `coeffs` at `indices` (all other
/// bins zero). Equals the dense zero-padded idft.
TimeSignal synthesize_from_indices(std::size_t n, std::span<const int> indices,
                                   std::span<const cplx> coeffs);

/// Peak instantaneous power of the `factor`-times oversampled time signal
/// (spectrum zero-padded in the middle). factor=1 is the Nyquist-rate peak.
double oversampled_peak(const FrequencyBlock& block, int factor);

}  // namespace ofdmim
