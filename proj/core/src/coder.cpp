#include "mhsteg/coder.hpp"

#include "mhsteg/error.hpp"

#include <algorithm>
#include <bit>
#include <queue>

namespace mhsteg {

CandidatePool build_candidate_pool(std::span<const Successor> ordered, std::size_t cps)
{
    if (cps < 2)
        throw Error(ErrorCode::invalid_argument, "candidate pool size must be >= 2");
    CandidatePool pool;
    pool.entries.reserve(std::min(cps, ordered.size()));
    for (const auto& s : ordered) {
        if (pool.entries.size() == cps)
            break;
        if (s.word != kUnk)
            pool.entries.push_back(s);
    }
    if (pool.entries.empty())
        throw Error(ErrorCode::empty_pool, "no candidates after removing UNK");
    return pool;
}

HuffmanTree::HuffmanTree(const CandidatePool& pool)
{
    const std::size_t n = pool.entries.size();
    if (n == 0)
        throw Error(ErrorCode::empty_pool, "cannot build a Huffman tree over an empty pool");
    leaf_count_ = n;
    nodes_.reserve(2 * n - 1);
    for (const auto& e : pool.entries)
        nodes_.push_back({e.count, e.word, -1, -1});

    using Item = std::pair<std::uint64_t, std::int32_t>; // (count, creation index)
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    for (std::size_t i = 0; i < n; ++i)
        queue.emplace(nodes_[i].count, static_cast<std::int32_t>(i));
    while (queue.size() > 1) {
        const auto left = queue.top();
        queue.pop();
        const auto right = queue.top();
        queue.pop();
        const auto merged = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back({left.first + right.first, 0, left.second, right.second});
        queue.emplace(left.first + right.first, merged);
    }

    // Codes by depth-first walk; path holds the edge labels from the root.
    std::vector<BitString> codes(n);
    std::vector<std::pair<std::int32_t, BitString>> stack;
    stack.emplace_back(root(), BitString{});
    while (!stack.empty()) {
        auto [idx, path] = std::move(stack.back());
        stack.pop_back();
        const Node& node = nodes_[static_cast<std::size_t>(idx)];
        if (node.is_leaf()) {
            codes[static_cast<std::size_t>(idx)] = std::move(path);
            continue;
        }
        BitString right_path = path;
        right_path.push_back(1);
        path.push_back(0);
        stack.emplace_back(node.right, std::move(right_path));
        stack.emplace_back(node.left, std::move(path));
    }
    code_offsets_.reserve(n + 1);
    code_offsets_.push_back(0);
    for (const auto& c : codes) {
        code_bits_.insert(code_bits_.end(), c.begin(), c.end());
        code_offsets_.push_back(code_bits_.size());
    }
}

std::int32_t HuffmanTree::find_leaf(WordId word) const noexcept
{
    for (std::size_t i = 0; i < leaf_count_; ++i) {
        if (nodes_[i].word == word)
            return static_cast<std::int32_t>(i);
    }
    return -1;
}

HuffmanTree build_huffman_tree(const CandidatePool& pool)
{
    return HuffmanTree(pool);
}

BitString codeword_of(const HuffmanTree& tree, WordId word)
{
    const auto leaf = tree.find_leaf(word);
    if (leaf < 0)
        throw Error(ErrorCode::not_in_pool, "word id " + std::to_string(word) + " is not in the pool");
    const auto code = tree.code(static_cast<std::size_t>(leaf));
    return BitString(code.begin(), code.end());
}

DecodedWord decode_word(const HuffmanTree& tree, BitReader& bits)
{
    const auto nodes = tree.nodes();
    DecodedWord out;
    auto idx = static_cast<std::size_t>(tree.root());
    while (!nodes[idx].is_leaf()) {
        Bit b = 0;
        if (const auto next = bits.next()) {
            b = *next;
            ++out.bits_consumed;
        }
        ++out.code_length;
        idx = static_cast<std::size_t>(b ? nodes[idx].right : nodes[idx].left);
    }
    out.word = nodes[idx].word;
    return out;
}

FixedLengthCodebook::FixedLengthCodebook(const CandidatePool& pool)
{
    if (pool.entries.size() < 2)
        throw Error(ErrorCode::invalid_argument, "fixed-length coding needs at least 2 candidates");
    const std::size_t usable = std::bit_floor(pool.entries.size());
    width_ = static_cast<unsigned>(std::countr_zero(usable));
    words_.reserve(usable);
    for (std::size_t i = 0; i < usable; ++i)
        words_.push_back(pool.entries[i].word);
}

std::int32_t FixedLengthCodebook::find(WordId word) const noexcept
{
    const auto it = std::find(words_.begin(), words_.end(), word);
    return it == words_.end() ? -1 : static_cast<std::int32_t>(it - words_.begin());
}

BitString FixedLengthCodebook::codeword(std::size_t index) const
{
    BitString out;
    append_uint(out, index, width_);
    return out;
}

DecodedWord FixedLengthCodebook::decode(BitReader& bits) const
{
    DecodedWord out;
    std::size_t index = 0;
    for (unsigned i = 0; i < width_; ++i) {
        Bit b = 0;
        if (const auto next = bits.next()) {
            b = *next;
            ++out.bits_consumed;
        }
        index = (index << 1) | b;
    }
    out.code_length = width_;
    out.word = words_[index];
    return out;
}

FixedLengthCodebook fixed_length_codebook(const CandidatePool& pool)
{
    return FixedLengthCodebook(pool);
}

} // namespace mhsteg
