#pragma once

#include <cstdint>

namespace ofdmim {

/// OFDM-IM dimensioning. All derived fields are computed by make_config:
/// g = N/n subblocks, p1 = floor(log2(C(n,k))) index bits and
/// p2 = k*log2(M) symbol bits per subblock, m = (p1+p2)*g bits per block.
struct SystemConfig {
    int N = 0;   // subcarrier count
    int n = 0;   // subblock length
    int k = 0;   // active subcarriers per subblock
    int g = 0;   // subblock count
    int M = 0;   // constellation order
    int p1 = 0;  // index bits per subblock
    int p2 = 0;  // symbol bits per subblock
    int p = 0;   // bits per subblock
    int m = 0;   // bits per block

    int active_count() const { return k * g; }  // active subcarriers per block
    int idle_count() const { return N - k * g; }
};

/// Validates (N, n, k, M) and fills in the derived fields.
/// Throws std::invalid_argument naming the offending parameter.
SystemConfig make_config(int N, int n, int k, int M);

/// Exact binomial coefficient (throws on internal overflow).
std::uint64_t binomial(int n, int k);

}  // namespace ofdmim
