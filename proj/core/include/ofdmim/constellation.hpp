#pragma once

#include <cstdint>
#include <vector>

#include "ofdmim/types.hpp"

namespace ofdmim {

/// M-ary constellation with Gray bit mapping and its distinct amplitude
/// levels A_1 < ... < A_L. points[word] is the symbol for that bit word,
/// so the bit mapping is the vector index itself.
struct Constellation {
    std::vector<cplx> points;
    std::vector<double> levels;        // sorted distinct moduli
    std::vector<int> level_of_point;   // 0-based level index per point

    int order() const { return static_cast<int>(points.size()); }
    int bits_per_symbol() const;
    int level_count() const { return static_cast<int>(levels.size()); }

    cplx map(std::uint32_t word) const { return points[word]; }

    /// Nearest point in Euclidean distance; ties go to the smaller bit word.
    std::uint32_t demap(cplx received) const;

    /// Level index whose amplitude matches `modulus` within `tol`, or -1.
    int level_index(double modulus, double tol = 1e-9) const;
};

/// Square QAM on the odd-integer grid {+-1, +-3, ...} per axis (or BPSK for
/// M=2), with per-axis reflected Gray coding, in-phase bits first.
/// The grid is deliberately unnormalized; average-power bookkeeping is done
/// by the SNR accounting, not in the points.
Constellation make_qam(int M);

}  // namespace ofdmim
