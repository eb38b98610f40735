#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ofdmim/constellation.hpp"
#include "ofdmim/system_config.hpp"
#include "ofdmim/types.hpp"

namespace ofdmim {

/// Sorted k-subset of {0..n-1} marking the active subcarriers of a subblock.
struct ActivationPattern {
    std::vector<int> indices;  // strictly increasing
    std::uint32_t mask = 0;    // bit i set iff local index i is active
};

/// The 2^p1 legal activation patterns in lexicographic order, with inverse
/// (rank) lookup by mask.
class LegalPatternSet {
public:
    LegalPatternSet(int n, int k, std::vector<ActivationPattern> patterns);

    int subblock_size() const { return n_; }
    int active_per_subblock() const { return k_; }
    int size() const { return static_cast<int>(patterns_.size()); }
    const ActivationPattern& pattern(int rank) const;
    const std::vector<ActivationPattern>& patterns() const { return patterns_; }

    /// Rank of the pattern with this mask, or -1 if the mask is not legal.
    int rank_of(std::uint32_t mask) const;

private:
    int n_;
    int k_;
    std::vector<ActivationPattern> patterns_;
    std::unordered_map<std::uint32_t, int> rank_;
};

/// First 2^p1 k-subsets of {0..n-1} in lexicographic order.
LegalPatternSet build_legal_set(int n, int k);

const ActivationPattern& bits_to_pattern(std::uint32_t word, const LegalPatternSet& set);
std::uint32_t pattern_to_bits(const ActivationPattern& pattern, const LegalPatternSet& set);

/// Maps m information bits to a frequency-domain block: per subblock, the
/// first p1 bits pick the activation pattern and the next p2 bits the k
/// symbols, filled into the active indices in ascending order.
FrequencyBlock modulate_block(const BitVec& bits, const SystemConfig& cfg,
                              const Constellation& cons, const LegalPatternSet& set);

/// Exact inverse of modulate_block for a clean (noiseless, undithered or
/// mask-carrying) block; throws if the block structure is not legal.
BitVec disassemble_block(const FrequencyBlock& block, const SystemConfig& cfg,
                         const Constellation& cons, const LegalPatternSet& set);

}  // namespace ofdmim
