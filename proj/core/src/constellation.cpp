#include "ofdmim/constellation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ofdmim {

namespace {

constexpr double kLevelTol = 1e-9;

// Position of a binary-reflected Gray codeword within the Gray sequence.
std::uint32_t gray_decode(std::uint32_t g) {
    std::uint32_t b = 0;
    for (; g; g >>= 1) b ^= g;
    return b;
}

}  // namespace

int Constellation::bits_per_symbol() const {
    return std::bit_width(static_cast<std::uint32_t>(points.size())) - 1;
}

std::uint32_t Constellation::demap(cplx received) const {
    std::uint32_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::uint32_t w = 0; w < points.size(); ++w) {
        double d = std::norm(received - points[w]);
        if (d < best_dist) {
            best_dist = d;
            best = w;
        }
    }
    return best;
}

int Constellation::level_index(double modulus, double tol) const {
    for (std::size_t l = 0; l < levels.size(); ++l)
        if (std::abs(modulus - levels[l]) <= tol) return static_cast<int>(l);
    return -1;
}

Constellation make_qam(int M) {
    if (M < 2 || (M & (M - 1)) != 0)
        throw std::invalid_argument("M: must be a power of two >= 2, got " + std::to_string(M));
    const int q = std::bit_width(static_cast<std::uint32_t>(M)) - 1;  // bits per symbol
    if (M > 4 && q % 2 != 0)
        throw std::invalid_argument("M: non-square constellations are not supported, got " +
                                    std::to_string(M));

    Constellation cons;
    cons.points.resize(M);

    if (M == 2) {
        cons.points[0] = cplx(-1.0, 0.0);
        cons.points[1] = cplx(+1.0, 0.0);
    } else {
        const int axis_bits = q / 2;
        const int side = 1 << axis_bits;
        for (std::uint32_t w = 0; w < static_cast<std::uint32_t>(M); ++w) {
            std::uint32_t i_word = w >> axis_bits;            // in-phase bits first
            std::uint32_t q_word = w & ((1u << axis_bits) - 1u);
            double re = 2.0 * gray_decode(i_word) - (side - 1);
            double im = 2.0 * gray_decode(q_word) - (side - 1);
            cons.points[w] = cplx(re, im);
        }
    }

    // Distinct amplitude levels, deduplicated within kLevelTol.
    std::vector<double> moduli(cons.points.size());
    std::transform(cons.points.begin(), cons.points.end(), moduli.begin(),
                   [](cplx p) { return std::abs(p); });
    std::sort(moduli.begin(), moduli.end());
    for (double a : moduli) {
        if (cons.levels.empty() || a - cons.levels.back() > kLevelTol) cons.levels.push_back(a);
    }

    cons.level_of_point.resize(cons.points.size());
    for (std::size_t w = 0; w < cons.points.size(); ++w) {
        int l = cons.level_index(std::abs(cons.points[w]), kLevelTol);
        if (l < 0) throw std::logic_error("make_qam: point modulus matches no level");
        cons.level_of_point[w] = l;
    }
    return cons;
}

}  // namespace ofdmim
