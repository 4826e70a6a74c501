#pragma once

#include "mhsteg/markov.hpp"
#include "mhsteg/stego.hpp"

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace mhsteg {

enum class PerplexityMode {
    per_word,     // 2^(-log2 p(s) / transitions), averaged over sentences
    per_sentence, // 2^(-log2 p(s)), averaged over sentences
};

struct PerplexityReport {
    double mean = 0.0;
    double std_dev = 0.0;
    PerplexityMode mode = PerplexityMode::per_word;
    std::size_t sentence_count = 0;
    /// Pooled over all sentences: per-word mode uses total transitions,
    /// per-sentence mode is 2^(-(1/N) sum log2 p(s_i)).
    double pooled = 0.0;
    std::size_t transitions = 0;
    /// Transitions unseen at every backoff order, scored at the floor probability.
    std::size_t floored_transitions = 0;
};

/// Scores sentences word by word, including the final EOS transition.
/// A word is scored by the longest stored context suffix whose distribution
/// contains it; a word unseen at every order gets probability
/// 1 / (training tokens). Words outside the dictionary score as UNK.
PerplexityReport perplexity(const MarkovModel& model, std::span<const TokenSentence> sentences,
                            PerplexityMode mode = PerplexityMode::per_word);

PerplexityReport perplexity(const MarkovModel& model, const StegoText& text,
                            PerplexityMode mode = PerplexityMode::per_word);

/// log2 p(sentence) and the number of transitions scored.
struct SentenceScore {
    double log2_prob = 0.0;
    std::size_t transitions = 0;
    std::size_t floored = 0;
};

SentenceScore score_sentence(const MarkovModel& model, std::span<const std::string> words);

struct EmbedRateReport {
    double k = 0.0;
    double mean_len = 0.0;
    double mean_letters = 0.0;
    double rate = 0.0;
};

/// (mean_len - 1) * k / (8 * mean_len * mean_letters).
/// Throws Error(invalid_argument) unless mean_len >= 1, mean_letters > 0, k >= 0.
EmbedRateReport embedding_rate(double k, double mean_len, double mean_letters);

struct BpwStats {
    double mean = 0.0;
    double std_dev = 0.0;
    std::size_t steps = 0;
    std::size_t bits = 0;
};

/// Bits per coding step over every step that began while payload bits
/// remained. Each step is a word after the keyword or a sentence end.
/// The standard deviation is over per-sentence means.
/// Throws Error(invalid_argument) when `traces` is empty.
BpwStats bpw_stats(std::span<const EmbedTrace> traces);

struct EvalRow {
    std::size_t cps = 0;
    BpwStats bpw;
    PerplexityReport ppl;
};

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const EvalRow& row);
void write_key_values(std::ostream& out, const EvalRow& row);

std::string_view mode_name(PerplexityMode mode) noexcept;

} // namespace mhsteg
