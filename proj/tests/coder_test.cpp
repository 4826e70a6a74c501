#include "support/oracles.hpp"

#include "mhsteg/mhsteg.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mhsteg;

namespace {

CandidatePool pool_of(std::vector<std::uint64_t> counts, WordId first = 10)
{
    CandidatePool p;
    for (std::size_t i = 0; i < counts.size(); ++i)
        p.entries.push_back({static_cast<WordId>(first + i), counts[i]});
    return p;
}

std::string code_string(const HuffmanTree& t, WordId w)
{
    return to_string(codeword_of(t, w));
}

// Random counts, sorted into pool order; mixes flat, skewed and tied shapes.
std::vector<std::uint64_t> random_counts(std::mt19937_64& rng, std::size_t n)
{
    std::vector<std::uint64_t> c(n);
    const int shape = static_cast<int>(rng() % 3);
    for (auto& x : c) {
        if (shape == 0)
            x = 1 + rng() % 4;
        else if (shape == 1)
            x = 1 + rng() % 1000;
        else
            x = 1 + (std::uint64_t{1} << (rng() % 20)) + rng() % 3;
    }
    std::sort(c.rbegin(), c.rend());
    return c;
}

} // namespace

TEST(Pool, TruncatesAndKeepsOrder)
{
    const std::vector<Successor> two = {{20, 2}, {21, 1}};
    EXPECT_EQ(build_candidate_pool(two, 8).entries, two);

    const std::vector<Successor> four = {{10, 5}, {11, 3}, {14, 3}, {15, 1}};
    EXPECT_EQ(build_candidate_pool(four, 2).entries, (std::vector<Successor>{{10, 5}, {11, 3}}));
}

TEST(Pool, ExcludesUnk)
{
    const std::vector<Successor> d = {{kUnk, 9}, {30, 1}};
    EXPECT_EQ(build_candidate_pool(d, 2).entries, (std::vector<Successor>{{30, 1}}));
    const std::vector<Successor> mid = {{5, 9}, {kUnk, 4}, {6, 2}, {7, 1}};
    EXPECT_EQ(build_candidate_pool(mid, 2).entries, (std::vector<Successor>{{5, 9}, {6, 2}}));
}

TEST(Pool, Errors)
{
    const std::vector<Successor> only_unk = {{kUnk, 3}};
    try {
        build_candidate_pool(only_unk, 4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::empty_pool);
    }
    EXPECT_THROW(build_candidate_pool(std::span<const Successor>{}, 4), Error);
    const std::vector<Successor> d = {{5, 1}};
    EXPECT_THROW(build_candidate_pool(d, 1), Error);
}

TEST(Huffman, CanonicalSkewedExample)
{
    const auto t = build_huffman_tree(pool_of({4, 2, 1, 1}));
    EXPECT_EQ(code_string(t, 10), "0");
    EXPECT_EQ(code_string(t, 11), "10");
    EXPECT_EQ(code_string(t, 12), "110");
    EXPECT_EQ(code_string(t, 13), "111");
}

TEST(Huffman, UniformFour)
{
    const auto t = build_huffman_tree(pool_of({1, 1, 1, 1}));
    EXPECT_EQ(code_string(t, 10), "00");
    EXPECT_EQ(code_string(t, 11), "01");
    EXPECT_EQ(code_string(t, 12), "10");
    EXPECT_EQ(code_string(t, 13), "11");
}

TEST(Huffman, TwoLeavesLessProbableGoesLeft)
{
    const auto t = build_huffman_tree(pool_of({3, 2}));
    EXPECT_EQ(code_string(t, 10), "1");
    EXPECT_EQ(code_string(t, 11), "0");
    const auto tied = build_huffman_tree(pool_of({2, 2}));
    EXPECT_EQ(code_string(tied, 10), "0");
    EXPECT_EQ(code_string(tied, 11), "1");
}

TEST(Huffman, SingleLeaf)
{
    const auto t = build_huffman_tree(pool_of({7}));
    EXPECT_EQ(t.leaf_count(), 1u);
    EXPECT_TRUE(codeword_of(t, 10).empty());
    const BitString src = {1, 0, 1};
    BitReader r(src);
    const auto d = decode_word(t, r);
    EXPECT_EQ(d.word, 10u);
    EXPECT_EQ(d.bits_consumed, 0u);
    EXPECT_EQ(d.code_length, 0u);
    EXPECT_EQ(r.position(), 0u);
}

TEST(Huffman, EmptyPoolAndMissingWord)
{
    EXPECT_THROW(build_huffman_tree(CandidatePool{}), Error);
    const auto t = build_huffman_tree(pool_of({4, 2, 1, 1}));
    try {
        codeword_of(t, 99);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::not_in_pool);
    }
}

TEST(Huffman, DecodeWalk)
{
    const auto t = build_huffman_tree(pool_of({4, 2, 1, 1}));
    const BitString src = {1, 1, 0, 1, 0};
    BitReader r(src);
    const auto d = decode_word(t, r);
    EXPECT_EQ(d.word, 12u);
    EXPECT_EQ(d.bits_consumed, 3u);
    EXPECT_EQ(d.code_length, 3u);
    EXPECT_EQ(r.position(), 3u);
}

TEST(Huffman, DecodePastEndFollowsZeroEdges)
{
    const auto t = build_huffman_tree(pool_of({4, 2, 1, 1}));
    BitReader empty;
    const auto a = decode_word(t, empty);
    EXPECT_EQ(a.word, 10u);
    EXPECT_EQ(a.bits_consumed, 0u);
    EXPECT_EQ(a.code_length, 1u);

    const BitString one = {1};
    BitReader r(one);
    const auto b = decode_word(t, r);
    EXPECT_EQ(b.word, 11u);
    EXPECT_EQ(b.bits_consumed, 1u);
    EXPECT_EQ(b.code_length, 2u);
}

TEST(HuffmanProperty, SoundOnRandomPools)
{
    std::mt19937_64 rng(1234);
    for (int iter = 0; iter < 400; ++iter) {
        const std::size_t n = 2 + rng() % 63;
        const auto counts = random_counts(rng, n);
        const auto pool = pool_of(counts);
        const HuffmanTree t(pool);
        ASSERT_EQ(t.leaf_count(), n);
        ASSERT_EQ(t.nodes().size(), 2 * n - 1);

        std::vector<std::string> codes;
        std::uint64_t kraft = 0;
        std::uint64_t cost = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = code_string(t, pool.entries[i].word);
            ASSERT_FALSE(c.empty());
            ASSERT_LE(c.size(), 63u);
            kraft += std::uint64_t{1} << (63 - c.size());
            cost += counts[i] * c.size();
            codes.push_back(c);
        }
        EXPECT_EQ(kraft, std::uint64_t{1} << 63);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j)
                    ASSERT_NE(codes[j].rfind(codes[i], 0), 0u) << codes[i] << " prefixes " << codes[j];

        EXPECT_EQ(cost, mhsteg::testing::merge_cost(counts));
        EXPECT_EQ(cost, mhsteg::testing::optimal_prefix_cost(counts));

        double total = 0;
        for (auto c : counts)
            total += static_cast<double>(c);
        const double expected = static_cast<double>(cost) / total;
        const double h = mhsteg::testing::entropy_bits(counts);
        EXPECT_GE(expected, h - 1e-12);
        EXPECT_LT(expected, h + 1.0);

        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (counts[i] > counts[j])
                    ASSERT_LE(codes[i].size(), codes[j].size());

        // Every codeword decodes back to its word.
        for (std::size_t i = 0; i < n; ++i) {
            const auto bits = bits_from_string(codes[i]);
            BitReader r(bits);
            const auto d = decode_word(t, r);
            ASSERT_EQ(d.word, pool.entries[i].word);
            ASSERT_EQ(d.bits_consumed, codes[i].size());
        }
    }
}

TEST(HuffmanProperty, DeterministicRebuild)
{
    std::mt19937_64 rng(99);
    for (int iter = 0; iter < 100; ++iter) {
        const auto pool = pool_of(random_counts(rng, 2 + rng() % 30));
        const HuffmanTree a(pool);
        const HuffmanTree b(pool);
        for (const auto& e : pool.entries)
            ASSERT_EQ(codeword_of(a, e.word), codeword_of(b, e.word));
    }
}

TEST(Oracle, DynamicProgramMatchesExhaustiveSearch)
{
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 150; ++iter) {
        const std::size_t n = 2 + rng() % 6;
        const auto counts = random_counts(rng, n);
        EXPECT_EQ(mhsteg::testing::optimal_prefix_cost(counts), mhsteg::testing::exhaustive_prefix_cost(counts));
    }
    const std::vector<std::uint64_t> w = {4, 2, 1, 1};
    EXPECT_EQ(mhsteg::testing::optimal_prefix_cost(w), 4u * 1 + 2u * 2 + 1u * 3 + 1u * 3);
}

TEST(FixedLength, PowerOfTwoPool)
{
    const auto cb = fixed_length_codebook(pool_of({5, 4, 3, 2}));
    EXPECT_EQ(cb.width(), 2u);
    EXPECT_EQ(to_string(cb.codeword(0)), "00");
    EXPECT_EQ(to_string(cb.codeword(1)), "01");
    EXPECT_EQ(to_string(cb.codeword(2)), "10");
    EXPECT_EQ(to_string(cb.codeword(3)), "11");
    EXPECT_EQ(cb.find(12), 2);
}

TEST(FixedLength, TruncatesToPowerOfTwo)
{
    const auto cb = fixed_length_codebook(pool_of({5, 4, 3}));
    EXPECT_EQ(cb.width(), 1u);
    ASSERT_EQ(cb.words().size(), 2u);
    EXPECT_EQ(to_string(cb.codeword(0)), "0");
    EXPECT_EQ(to_string(cb.codeword(1)), "1");
    EXPECT_EQ(cb.find(12), -1);

    const auto pair = fixed_length_codebook(pool_of({1, 1}));
    EXPECT_EQ(pair.width(), 1u);
    EXPECT_EQ(pool_of({1, 1, 1, 1, 1, 1, 1, 1, 1}).size(), 9u);
    EXPECT_EQ(fixed_length_codebook(pool_of({1, 1, 1, 1, 1, 1, 1, 1, 1})).width(), 3u);
}

TEST(FixedLength, DecodeAndErrors)
{
    EXPECT_THROW(fixed_length_codebook(pool_of({5})), Error);
    const auto cb = fixed_length_codebook(pool_of({5, 4, 3, 2, 1, 1, 1, 1}));
    const BitString src = {1, 1, 0, 1};
    BitReader r(src);
    const auto d = cb.decode(r);
    EXPECT_EQ(d.word, 16u);
    EXPECT_EQ(d.bits_consumed, 3u);
    const auto rest = cb.decode(r);
    EXPECT_EQ(rest.word, 14u); // 1 then default zeros: 100
    EXPECT_EQ(rest.bits_consumed, 1u);
    EXPECT_EQ(rest.code_length, 3u);
}

TEST(Bits, UintAndBytes)
{
    BitString b;
    append_uint(b, 0xA5, 8);
    EXPECT_EQ(to_string(b), "10100101");
    EXPECT_EQ(read_uint(b, 0, 8), 0xA5u);
    EXPECT_EQ(read_uint(b, 4, 4), 0x5u);
    BitString c;
    const std::vector<std::uint8_t> bytes = {0x01, 0x80};
    append_bytes(c, bytes);
    EXPECT_EQ(to_string(c), "0000000110000000");
    EXPECT_EQ(bits_from_string("1 0_1"), (BitString{1, 0, 1}));
}
