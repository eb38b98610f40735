#include "ofdmim/system_config.hpp"

#include <bit>
#include <limits>
#include <stdexcept>
#include <string>

namespace ofdmim {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (int i = 1; i <= k; ++i) {
        std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
        if (result > std::numeric_limits<std::uint64_t>::max() / num)
            throw std::overflow_error("binomial: overflow at n=" + std::to_string(n));
        result = result * num / static_cast<std::uint64_t>(i);
    }
    return result;
}

namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int ilog2(std::uint64_t v) { return std::bit_width(v) - 1; }  // floor(log2(v)), v > 0

// Supported constellation orders: 2, and even powers of two (square QAM).
bool is_supported_order(int M) {
    if (!is_power_of_two(M)) return false;
    return M == 2 || ilog2(static_cast<std::uint64_t>(M)) % 2 == 0;
}

}  // namespace

SystemConfig make_config(int N, int n, int k, int M) {
    if (N <= 0) throw std::invalid_argument("N: must be positive, got " + std::to_string(N));
    if (n <= 0) throw std::invalid_argument("n: must be positive, got " + std::to_string(n));
    if (N % n != 0)
        throw std::invalid_argument("n: " + std::to_string(n) + " does not divide N=" + std::to_string(N));
    if (k < 1 || k >= n)
        throw std::invalid_argument("k: need 1 <= k < n, got k=" + std::to_string(k) +
                                    " with n=" + std::to_string(n));
    if (!is_supported_order(M))
        throw std::invalid_argument("M: must be 2 or a square power of two, got " + std::to_string(M));

    SystemConfig cfg;
    cfg.N = N;
    cfg.n = n;
    cfg.k = k;
    cfg.g = N / n;
    cfg.M = M;
    cfg.p1 = ilog2(binomial(n, k));
    cfg.p2 = k * ilog2(static_cast<std::uint64_t>(M));
    cfg.p = cfg.p1 + cfg.p2;
    cfg.m = cfg.p * cfg.g;
    return cfg;
}

}  // namespace ofdmim
