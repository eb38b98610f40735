#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "ofdmim/index_mapper.hpp"
#include "ofdmim/rng.hpp"

using namespace ofdmim;

namespace {

// Independent enumeration oracle: all k-subsets of {0..n-1} in
// lexicographic order via sorted-set generation.
std::vector<std::vector<int>> all_subsets_lex(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> comb(static_cast<std::size_t>(k));
    std::vector<bool> select(static_cast<std::size_t>(n), false);
    std::fill(select.begin(), select.begin() + k, true);
    // std::prev_permutation over the selection mask yields lexicographic
    // subset order.
    do {
        std::vector<int> subset;
        for (int i = 0; i < n; ++i)
            if (select[static_cast<std::size_t>(i)]) subset.push_back(i);
        out.push_back(subset);
    } while (std::prev_permutation(select.begin(), select.end()));
    return out;
}

BitVec random_bits(Philox& rng, int m) {
    BitVec bits(static_cast<std::size_t>(m));
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
    return bits;
}

}  // namespace

TEST_CASE("legal set is the lexicographic prefix") {
    SUBCASE("(4,2)") {
        auto set = build_legal_set(4, 2);
        auto oracle = all_subsets_lex(4, 2);
        REQUIRE(set.size() == 4);
        for (int r = 0; r < set.size(); ++r)
            CHECK(set.pattern(r).indices == oracle[static_cast<std::size_t>(r)]);
    }
    SUBCASE("(2,1)") {
        auto set = build_legal_set(2, 1);
        REQUIRE(set.size() == 2);
        CHECK(set.pattern(0).indices == std::vector<int>{0});
        CHECK(set.pattern(1).indices == std::vector<int>{1});
    }
    SUBCASE("(4,3)") {
        // C(4,3) = 4 = 2^2, so the whole enumeration is legal.
        auto set = build_legal_set(4, 3);
        auto oracle = all_subsets_lex(4, 3);
        REQUIRE(set.size() == 4);
        for (int r = 0; r < set.size(); ++r)
            CHECK(set.pattern(r).indices == oracle[static_cast<std::size_t>(r)]);
    }
    SUBCASE("(6,3) truncates to the leading 16 of 20") {
        auto set = build_legal_set(6, 3);
        auto oracle = all_subsets_lex(6, 3);  // C(6,3) = 20 -> 16 legal
        REQUIRE(set.size() == 16);
        for (int r = 0; r < set.size(); ++r)
            CHECK(set.pattern(r).indices == oracle[static_cast<std::size_t>(r)]);
    }
}

TEST_CASE("pattern lookups") {
    auto set = build_legal_set(4, 2);
    CHECK(bits_to_pattern(0b00, set).indices == std::vector<int>{0, 1});
    CHECK(bits_to_pattern(0b11, set).indices == std::vector<int>{1, 2});
    for (std::uint32_t w = 0; w < 4; ++w)
        CHECK(pattern_to_bits(bits_to_pattern(w, set), set) == w);
    CHECK_THROWS_AS(bits_to_pattern(4, set), std::out_of_range);
    CHECK(set.rank_of(0b1010) == -1);  // {1,3} is not legal under the 4-entry table
}

TEST_CASE("all-zero word modulation") {
    auto cfg = make_config(8, 4, 2, 4);
    auto cons = make_qam(4);
    auto set = build_legal_set(4, 2);
    BitVec bits(static_cast<std::size_t>(cfg.m), 0);
    FrequencyBlock block = modulate_block(bits, cfg, cons, set);

    REQUIRE(block.size() == 8);
    CHECK(block.active_count() == 4);
    for (int beta = 0; beta < 2; ++beta) {
        CHECK(block.active[beta * 4 + 0] == 1);
        CHECK(block.active[beta * 4 + 1] == 1);
        CHECK(block.active[beta * 4 + 2] == 0);
        CHECK(block.active[beta * 4 + 3] == 0);
        CHECK(block.values[beta * 4 + 0] == cons.map(0));
        CHECK(block.values[beta * 4 + 1] == cons.map(0));
        CHECK(block.values[beta * 4 + 2] == cplx(0.0, 0.0));
        CHECK(block.values[beta * 4 + 3] == cplx(0.0, 0.0));
    }
}

TEST_CASE("structure of every modulated block") {
    auto cfg = make_config(128, 4, 2, 16);
    auto cons = make_qam(16);
    auto set = build_legal_set(4, 2);
    Philox rng(11, 0);
    for (int trial = 0; trial < 50; ++trial) {
        BitVec bits = random_bits(rng, cfg.m);
        FrequencyBlock block = modulate_block(bits, cfg, cons, set);
        CHECK(block.active_count() == static_cast<std::size_t>(cfg.active_count()));
        int nonzero = 0;
        for (std::size_t i = 0; i < block.size(); ++i) {
            if (block.active[i]) {
                ++nonzero;
            } else {
                CHECK(block.values[i] == cplx(0.0, 0.0));  // exactly zero
            }
        }
        CHECK(nonzero == cfg.active_count());
    }
}

TEST_CASE("modulate then disassemble is the identity") {
    auto cfg = make_config(128, 4, 2, 16);
    auto cons = make_qam(16);
    auto set = build_legal_set(4, 2);
    Philox rng(12, 0);
    for (int trial = 0; trial < 10000; ++trial) {
        BitVec bits = random_bits(rng, cfg.m);
        FrequencyBlock block = modulate_block(bits, cfg, cons, set);
        CHECK(disassemble_block(block, cfg, cons, set) == bits);
    }
}

TEST_CASE("exactly 2^p1 patterns appear over exhaustive index words") {
    auto cfg = make_config(8, 4, 2, 4);
    auto cons = make_qam(4);
    auto set = build_legal_set(4, 2);
    std::set<std::uint32_t> seen;
    for (std::uint32_t w = 0; w < (1u << cfg.p1); ++w) {
        BitVec bits(static_cast<std::size_t>(cfg.m), 0);
        word_to_bits(w, cfg.p1, bits.data());
        FrequencyBlock block = modulate_block(bits, cfg, cons, set);
        std::uint32_t mask = 0;
        for (int i = 0; i < 4; ++i)
            if (block.active[static_cast<std::size_t>(i)]) mask |= 1u << i;
        seen.insert(mask);
    }
    CHECK(seen.size() == (1u << cfg.p1));
}

TEST_CASE("wrong bit length is rejected") {
    auto cfg = make_config(8, 4, 2, 4);
    auto cons = make_qam(4);
    auto set = build_legal_set(4, 2);
    BitVec bits(static_cast<std::size_t>(cfg.m) - 1, 0);
    CHECK_THROWS_AS(modulate_block(bits, cfg, cons, set), std::invalid_argument);
}
