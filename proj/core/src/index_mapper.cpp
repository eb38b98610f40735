#include "ofdmim/index_mapper.hpp"

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>

namespace ofdmim {

LegalPatternSet::LegalPatternSet(int n, int k, std::vector<ActivationPattern> patterns)
    : n_(n), k_(k), patterns_(std::move(patterns)) {
    rank_.reserve(patterns_.size());
    for (std::size_t j = 0; j < patterns_.size(); ++j) rank_.emplace(patterns_[j].mask, static_cast<int>(j));
}

const ActivationPattern& LegalPatternSet::pattern(int rank) const {
    if (rank < 0 || rank >= size())
        throw std::out_of_range("pattern rank " + std::to_string(rank) + " out of range");
    return patterns_[static_cast<std::size_t>(rank)];
}

int LegalPatternSet::rank_of(std::uint32_t mask) const {
    auto it = rank_.find(mask);
    return it == rank_.end() ? -1 : it->second;
}

LegalPatternSet build_legal_set(int n, int k) {
    if (n < 2 || n > 31) throw std::invalid_argument("n: subblock length must be in [2, 31]");
    if (k < 1 || k >= n) throw std::invalid_argument("k: need 1 <= k < n");

    const std::uint64_t total = binomial(n, k);
    std::uint64_t count = 1;
    while (count * 2 <= total) count *= 2;  // 2^p1

    std::vector<ActivationPattern> patterns;
    patterns.reserve(count);
    std::vector<int> comb(k);
    for (int i = 0; i < k; ++i) comb[i] = i;
    for (std::uint64_t taken = 0; taken < count; ++taken) {
        ActivationPattern pat;
        pat.indices = comb;
        for (int idx : comb) pat.mask |= (1u << idx);
        patterns.push_back(std::move(pat));
        // lexicographically next k-combination of {0..n-1}
        int i = k - 1;
        while (i >= 0 && comb[i] == n - k + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
    return LegalPatternSet(n, k, std::move(patterns));
}

const ActivationPattern& bits_to_pattern(std::uint32_t word, const LegalPatternSet& set) {
    if (word >= static_cast<std::uint32_t>(set.size()))
        throw std::out_of_range("index word " + std::to_string(word) + " exceeds the legal set");
    return set.pattern(static_cast<int>(word));
}

std::uint32_t pattern_to_bits(const ActivationPattern& pattern, const LegalPatternSet& set) {
    int rank = set.rank_of(pattern.mask);
    if (rank < 0) throw std::invalid_argument("pattern is not a member of the legal set");
    return static_cast<std::uint32_t>(rank);
}

FrequencyBlock modulate_block(const BitVec& bits, const SystemConfig& cfg,
                              const Constellation& cons, const LegalPatternSet& set) {
    if (static_cast<int>(bits.size()) != cfg.m)
        throw std::invalid_argument("bit count " + std::to_string(bits.size()) +
                                    " does not match m=" + std::to_string(cfg.m));
    const int q = cons.bits_per_symbol();

    FrequencyBlock block;
    block.values.assign(static_cast<std::size_t>(cfg.N), cplx(0.0, 0.0));
    block.active.assign(static_cast<std::size_t>(cfg.N), 0);

    std::span<const std::uint8_t> all(bits);
    for (int beta = 0; beta < cfg.g; ++beta) {
        auto sub_bits = all.subspan(static_cast<std::size_t>(beta) * cfg.p, cfg.p);
        std::uint32_t index_word = bits_to_word(sub_bits.subspan(0, cfg.p1));
        const ActivationPattern& pat = set.pattern(static_cast<int>(index_word));
        for (int gamma = 0; gamma < cfg.k; ++gamma) {
            std::uint32_t sym_word = bits_to_word(sub_bits.subspan(cfg.p1 + gamma * q, q));
            std::size_t pos = static_cast<std::size_t>(beta) * cfg.n + pat.indices[gamma];
            block.values[pos] = cons.map(sym_word);
            block.active[pos] = 1;
        }
    }
    return block;
}

BitVec disassemble_block(const FrequencyBlock& block, const SystemConfig& cfg,
                         const Constellation& cons, const LegalPatternSet& set) {
    if (static_cast<int>(block.size()) != cfg.N)
        throw std::invalid_argument("block length does not match N");
    const int q = cons.bits_per_symbol();

    BitVec bits(static_cast<std::size_t>(cfg.m));
    for (int beta = 0; beta < cfg.g; ++beta) {
        std::uint32_t mask = 0;
        for (int i = 0; i < cfg.n; ++i)
            if (block.active[static_cast<std::size_t>(beta) * cfg.n + i]) mask |= (1u << i);
        int rank = set.rank_of(mask);
        if (rank < 0) throw std::invalid_argument("block carries an illegal activation pattern");

        std::uint8_t* out = bits.data() + static_cast<std::size_t>(beta) * cfg.p;
        word_to_bits(static_cast<std::uint32_t>(rank), cfg.p1, out);
        const ActivationPattern& pat = set.pattern(rank);
        for (int gamma = 0; gamma < cfg.k; ++gamma) {
            cplx value = block.values[static_cast<std::size_t>(beta) * cfg.n + pat.indices[gamma]];
            word_to_bits(cons.demap(value), q, out + cfg.p1 + gamma * q);
        }
    }
    return bits;
}

}  // namespace ofdmim
