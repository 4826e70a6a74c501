#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mhsteg::testing {

/// Deterministic English-like corpus from a small phrase grammar with Zipfian
/// word choice and verb-dependent objects. About 2% of noun slots draw from a
/// long tail of rare pseudo-words so min_count actually cuts something.
/// Returns raw lines (mixed case and punctuation) for the normalizer.
std::vector<std::string> desk_corpus_lines(std::size_t sentences, std::uint64_t seed);

/// One sentence walking an Eulerian circuit of the complete digraph (loops
/// included) on `words` tokens, repeated `repeats` times. Under an order-1
/// model every successor of every word has the same count, so pools are
/// uniform up to size `words`.
std::vector<std::string> uniform_circuit_lines(std::size_t words, std::size_t repeats);

/// Small random corpus over a tiny vocabulary, for brute-force comparisons.
std::vector<std::string> random_toy_lines(std::size_t max_sentences, std::uint64_t seed);

/// Joins lines with '\n' (trailing newline included).
std::string join_lines(const std::vector<std::string>& lines);

} // namespace mhsteg::testing
