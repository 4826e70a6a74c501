#pragma once

#include "mhsteg/bits.hpp"
#include "mhsteg/markov.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mhsteg {

/// Top-cps successors of a context, UNK removed, in distribution order.
struct CandidatePool {
    std::vector<Successor> entries;

    std::size_t size() const noexcept { return entries.size(); }
    bool operator==(const CandidatePool&) const = default;
};

/// `ordered` must already be sorted by (count desc, id asc).
/// Throws Error(invalid_argument) for cps < 2, Error(empty_pool) when only UNK is left.
CandidatePool build_candidate_pool(std::span<const Successor> ordered, std::size_t cps);

inline CandidatePool build_candidate_pool(const DistributionView& dist, std::size_t cps)
{
    return build_candidate_pool(dist.successors, cps);
}

/// Huffman tree over a candidate pool with a fixed tie-breaking rule, so the
/// sender and the receiver always build the same tree.
///
/// Leaves get creation indices 0..n-1 in pool order; each merge pops the two
/// smallest (count, creation index) nodes, the first becoming the left child
/// (bit 0) and the second the right child (bit 1), and the merged node takes
/// the next creation index.
class HuffmanTree {
public:
    struct Node {
        std::uint64_t count = 0;
        WordId word = 0; // leaves only
        std::int32_t left = -1;
        std::int32_t right = -1;

        bool is_leaf() const noexcept { return left < 0; }
    };

    explicit HuffmanTree(const CandidatePool& pool);

    std::size_t leaf_count() const noexcept { return leaf_count_; }
    std::int32_t root() const noexcept { return static_cast<std::int32_t>(nodes_.size()) - 1; }
    std::span<const Node> nodes() const noexcept { return nodes_; }

    /// Leaf index of `word`, or -1.
    std::int32_t find_leaf(WordId word) const noexcept;

    /// Root-to-leaf edge labels for leaf `leaf` (0 <= leaf < leaf_count()).
    std::span<const Bit> code(std::size_t leaf) const noexcept
    {
        return std::span(code_bits_).subspan(code_offsets_[leaf], code_offsets_[leaf + 1] - code_offsets_[leaf]);
    }

private:
    std::vector<Node> nodes_; // leaves first, then internal nodes in creation order
    std::size_t leaf_count_ = 0;
    std::vector<Bit> code_bits_;
    std::vector<std::size_t> code_offsets_;
};

HuffmanTree build_huffman_tree(const CandidatePool& pool);

/// Throws Error(not_in_pool) when `word` is not a leaf.
BitString codeword_of(const HuffmanTree& tree, WordId word);

struct DecodedWord {
    WordId word = 0;
    std::size_t bits_consumed = 0; // real bits taken from the source
    std::size_t code_length = 0;   // depth of the chosen leaf
};

/// Walks from the root, one bit per edge. Once `bits` is exhausted the walk
/// continues along 0 edges; those steps do not count as consumed.
DecodedWord decode_word(const HuffmanTree& tree, BitReader& bits);

/// Fixed-width coding of a pool truncated to a power of two: entry i maps to
/// i in binary, most-significant bit first.
class FixedLengthCodebook {
public:
    /// Throws Error(invalid_argument) when the pool has fewer than 2 entries.
    explicit FixedLengthCodebook(const CandidatePool& pool);

    unsigned width() const noexcept { return width_; }
    std::span<const WordId> words() const noexcept { return words_; }

    /// Index of `word` in the truncated pool, or -1.
    std::int32_t find(WordId word) const noexcept;

    BitString codeword(std::size_t index) const;
    DecodedWord decode(BitReader& bits) const;

private:
    std::vector<WordId> words_;
    unsigned width_ = 0;
};

FixedLengthCodebook fixed_length_codebook(const CandidatePool& pool);

} // namespace mhsteg
