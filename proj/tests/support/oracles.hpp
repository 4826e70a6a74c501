#pragma once

#include "mhsteg/corpus.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

// Reference implementations written without touching the library's code paths.
namespace mhsteg::testing {

/// Minimum of sum(w_i * len_i) over all binary prefix codes, by dynamic
/// programming over tree levels.
std::uint64_t optimal_prefix_cost(std::span<const std::uint64_t> weights);

/// Same quantity by enumerating every length vector satisfying Kraft's
/// inequality. Exponential; keep n small.
std::uint64_t exhaustive_prefix_cost(std::span<const std::uint64_t> weights);

/// Textbook Huffman cost: sum of all merged weights.
std::uint64_t merge_cost(std::span<const std::uint64_t> weights);

/// Entropy in bits of the distribution proportional to `weights`.
double entropy_bits(std::span<const std::uint64_t> weights);

/// n-gram windows: key = context ids followed by the successor id.
using WindowCounts = std::map<std::vector<WordId>, std::uint64_t>;

/// Counts every (k+1)-window for k = 1..order over BOS^order, words, EOS,
/// mapping words to ids through `word_id` (UNK when absent).
WindowCounts brute_window_counts(std::span<const TokenSentence> sentences,
                                 const std::map<std::string, WordId>& word_id, unsigned order);

} // namespace mhsteg::testing
