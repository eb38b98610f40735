#include "ofdmim/spectral_transform.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace ofdmim {

Fourier::Fourier(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("transform length must be positive");
    radix2_ = (n & (n - 1)) == 0;

    roots_fwd_.resize(n);
    roots_inv_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(j) /
                            static_cast<long double>(n);
        cplx w(static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle)));
        roots_inv_[j] = w;
        roots_fwd_[j] = std::conj(w);
    }

    if (radix2_) {
        bitrev_.resize(n);
        std::uint32_t bits = 0;
        while ((std::size_t{1} << bits) < n) ++bits;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t r = 0;
            for (std::uint32_t b = 0; b < bits; ++b)
                if (i & (std::size_t{1} << b)) r |= (1u << (bits - 1 - b));
            bitrev_[i] = r;
        }
    }
}

void Fourier::transform(std::span<cplx> a, const std::vector<cplx>& roots) const {
    const std::size_t n = n_;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = bitrev_[i];
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t stride = n / len;
        for (std::size_t base = 0; base < n; base += len) {
            for (std::size_t j = 0; j < half; ++j) {
                cplx w = roots[j * stride];
                cplx u = a[base + j];
                cplx v = a[base + j + half] * w;
                a[base + j] = u + v;
                a[base + j + half] = u - v;
            }
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (cplx& z : a) z *= scale;
}

void Fourier::direct(std::span<const cplx> in, std::span<cplx> out,
                     const std::vector<cplx>& roots) const {
    const std::size_t n = n_;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
        cplx acc(0.0, 0.0);
        std::size_t idx = 0;
        for (std::size_t t = 0; t < n; ++t) {
            acc += in[t] * roots[idx];
            idx += j;
            if (idx >= n) idx -= n;
        }
        out[j] = acc * scale;
    }
}

void Fourier::forward(std::span<const cplx> in, std::span<cplx> out) const {
    if (in.size() != n_ || out.size() != n_)
        throw std::invalid_argument("forward: length mismatch");
    if (radix2_) {
        std::copy(in.begin(), in.end(), out.begin());
        transform(out, roots_fwd_);
    } else {
        direct(in, out, roots_fwd_);
    }
}

void Fourier::inverse(std::span<const cplx> in, std::span<cplx> out) const {
    if (in.size() != n_ || out.size() != n_)
        throw std::invalid_argument("inverse: length mismatch");
    if (radix2_) {
        std::copy(in.begin(), in.end(), out.begin());
        transform(out, roots_inv_);
    } else {
        direct(in, out, roots_inv_);
    }
}

const Fourier& fourier_for(std::size_t n) {
    thread_local std::unordered_map<std::size_t, std::unique_ptr<Fourier>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Fourier>(n);
    return *slot;
}

TimeSignal idft(std::span<const cplx> spectrum) {
    TimeSignal x;
    x.samples.resize(spectrum.size());
    fourier_for(spectrum.size()).inverse(spectrum, x.samples);
    return x;
}

TimeSignal idft(const FrequencyBlock& block) { return idft(std::span<const cplx>(block.values)); }

std::vector<cplx> dft(const TimeSignal& signal) {
    std::vector<cplx> spectrum(signal.size());
    fourier_for(signal.size()).forward(signal.samples, spectrum);
    return spectrum;
}

TimeSignal synthesize_from_indices(std::size_t n, std::span<const int> indices,
                                   std::span<const cplx> coeffs) {
    if (indices.size() != coeffs.size())
        throw std::invalid_argument("synthesize_from_indices: index/coefficient count mismatch");
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<cplx> spectrum(n, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < indices.size(); ++i) {
        int idx = indices[i];
        if (idx < 0 || static_cast<std::size_t>(idx) >= n)
            throw std::invalid_argument("synthesize_from_indices: index out of range");
        if (seen[static_cast<std::size_t>(idx)])
            throw std::invalid_argument("synthesize_from_indices: duplicate index");
        seen[static_cast<std::size_t>(idx)] = 1;
        spectrum[static_cast<std::size_t>(idx)] = coeffs[i];
    }
    return idft(spectrum);
}

double oversampled_peak(const FrequencyBlock& block, int factor) {
    if (factor < 1) throw std::invalid_argument("oversampling factor must be >= 1");
    const std::size_t n = block.size();
    if (factor == 1) return peak_power(idft(block).samples);

    const std::size_t total = n * static_cast<std::size_t>(factor);
    const std::size_t head = (n + 1) / 2;
    std::vector<cplx> padded(total, cplx(0.0, 0.0));
    std::copy(block.values.begin(), block.values.begin() + static_cast<std::ptrdiff_t>(head),
              padded.begin());
    std::copy(block.values.begin() + static_cast<std::ptrdiff_t>(head), block.values.end(),
              padded.end() - static_cast<std::ptrdiff_t>(n - head));

    // Unitary IDFT at length factor*n, rescaled so the lattice samples match
    // the length-n transform exactly.
    TimeSignal x = idft(padded);
    return peak_power(x.samples) * static_cast<double>(factor);
}

}  // namespace ofdmim
