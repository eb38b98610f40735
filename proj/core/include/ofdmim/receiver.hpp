#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ofdmim/constellation.hpp"
#include "ofdmim/index_mapper.hpp"
#include "ofdmim/system_config.hpp"
#include "ofdmim/types.hpp"

namespace ofdmim {

/// Receiver output for one block: the detected bits plus the per-subblock
/// decisions they came from.
struct ReceiveResult {
    BitVec bits;
    std::vector<int> pattern_ranks;           // one per subblock
    std::vector<std::uint32_t> symbol_words;  // k per subblock, ascending index order
};

/// Power-based index detection: the k highest-power entries win. If that
/// set is not in the legal table, the legal pattern capturing the most
/// power is chosen. Ties break toward the lowest index (ranking) and the
/// earliest table entry (captured power).
const ActivationPattern& detect_indices(std::span<const cplx> subblock,
                                        const LegalPatternSet& set);

/// Nearest constellation point per active index; ties go to the smaller
/// bit word.
std::vector<std::uint32_t> demod_symbols(std::span<const cplx> subblock,
                                         const ActivationPattern& pattern,
                                         const Constellation& cons);

/// Forward transform, then subblock-by-subblock index detection and symbol
/// demodulation. Idle entries (and any dither on them) are discarded; the
/// receiver needs no side information.
ReceiveResult receive_block(const TimeSignal& y, const SystemConfig& cfg,
                            const Constellation& cons, const LegalPatternSet& set);

struct BlockErrors {
    int bit_errors = 0;
    int index_errors = 0;   // subblocks with the wrong pattern, at most g
    int symbol_errors = 0;  // wrong symbol decisions, at most k*g
};

/// Scores a receive result against the transmitted bits.
BlockErrors compare_block(const BitVec& tx_bits, const ReceiveResult& rx,
                          const SystemConfig& cfg);

}  // namespace ofdmim
