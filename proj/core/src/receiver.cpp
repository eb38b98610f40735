#include "ofdmim/receiver.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>

#include "ofdmim/spectral_transform.hpp"

namespace ofdmim {

const ActivationPattern& detect_indices(std::span<const cplx> subblock,
                                        const LegalPatternSet& set) {
    const int n = set.subblock_size();
    const int k = set.active_per_subblock();
    if (static_cast<int>(subblock.size()) != n)
        throw std::invalid_argument("detect_indices: subblock length mismatch");

    std::array<double, 32> power;
    std::array<int, 32> order;
    for (int i = 0; i < n; ++i) {
        power[static_cast<std::size_t>(i)] = std::norm(subblock[static_cast<std::size_t>(i)]);
        order[static_cast<std::size_t>(i)] = i;
    }
    // Highest power first; equal powers keep the lower index first.
    std::stable_sort(order.begin(), order.begin() + n, [&](int a, int b) {
        return power[static_cast<std::size_t>(a)] > power[static_cast<std::size_t>(b)];
    });

    std::uint32_t mask = 0;
    for (int j = 0; j < k; ++j) mask |= (1u << order[static_cast<std::size_t>(j)]);
    int rank = set.rank_of(mask);
    if (rank >= 0) return set.pattern(rank);

    // The raw top-k set is not legal; fall back to the legal pattern that
    // captures the most power.
    int best = 0;
    double best_power = -1.0;
    for (int r = 0; r < set.size(); ++r) {
        double captured = 0.0;
        for (int idx : set.pattern(r).indices) captured += power[static_cast<std::size_t>(idx)];
        if (captured > best_power) {
            best_power = captured;
            best = r;
        }
    }
    return set.pattern(best);
}

std::vector<std::uint32_t> demod_symbols(std::span<const cplx> subblock,
                                         const ActivationPattern& pattern,
                                         const Constellation& cons) {
    std::vector<std::uint32_t> words;
    words.reserve(pattern.indices.size());
    for (int idx : pattern.indices) words.push_back(cons.demap(subblock[static_cast<std::size_t>(idx)]));
    return words;
}

ReceiveResult receive_block(const TimeSignal& y, const SystemConfig& cfg,
                            const Constellation& cons, const LegalPatternSet& set) {
    if (static_cast<int>(y.size()) != cfg.N)
        throw std::invalid_argument("receive_block: signal length does not match N");
    const std::vector<cplx> spectrum = dft(y);
    const int q = cons.bits_per_symbol();

    ReceiveResult result;
    result.bits.resize(static_cast<std::size_t>(cfg.m));
    result.pattern_ranks.reserve(static_cast<std::size_t>(cfg.g));
    result.symbol_words.reserve(static_cast<std::size_t>(cfg.k) * cfg.g);

    for (int beta = 0; beta < cfg.g; ++beta) {
        std::span<const cplx> sub(spectrum.data() + static_cast<std::size_t>(beta) * cfg.n,
                                  static_cast<std::size_t>(cfg.n));
        const ActivationPattern& pattern = detect_indices(sub, set);
        int rank = set.rank_of(pattern.mask);
        result.pattern_ranks.push_back(rank);

        std::uint8_t* out = result.bits.data() + static_cast<std::size_t>(beta) * cfg.p;
        word_to_bits(static_cast<std::uint32_t>(rank), cfg.p1, out);
        std::vector<std::uint32_t> words = demod_symbols(sub, pattern, cons);
        for (int gamma = 0; gamma < cfg.k; ++gamma) {
            word_to_bits(words[static_cast<std::size_t>(gamma)], q, out + cfg.p1 + gamma * q);
            result.symbol_words.push_back(words[static_cast<std::size_t>(gamma)]);
        }
    }
    return result;
}

BlockErrors compare_block(const BitVec& tx_bits, const ReceiveResult& rx, const SystemConfig& cfg) {
    if (static_cast<int>(tx_bits.size()) != cfg.m || static_cast<int>(rx.bits.size()) != cfg.m)
        throw std::invalid_argument("compare_block: bit length mismatch");
    const int q = cfg.p2 / cfg.k;

    BlockErrors errors;
    for (int i = 0; i < cfg.m; ++i)
        errors.bit_errors += (tx_bits[static_cast<std::size_t>(i)] ^ rx.bits[static_cast<std::size_t>(i)]) & 1;

    std::span<const std::uint8_t> all(tx_bits);
    for (int beta = 0; beta < cfg.g; ++beta) {
        auto sub_bits = all.subspan(static_cast<std::size_t>(beta) * cfg.p, cfg.p);
        std::uint32_t tx_rank = bits_to_word(sub_bits.subspan(0, cfg.p1));
        if (static_cast<int>(tx_rank) != rx.pattern_ranks[static_cast<std::size_t>(beta)])
            ++errors.index_errors;
        for (int gamma = 0; gamma < cfg.k; ++gamma) {
            std::uint32_t tx_word = bits_to_word(sub_bits.subspan(cfg.p1 + gamma * q, q));
            if (tx_word != rx.symbol_words[static_cast<std::size_t>(beta) * cfg.k + gamma])
                ++errors.symbol_errors;
        }
    }
    return errors;
}

}  // namespace ofdmim
