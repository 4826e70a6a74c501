#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mhsteg {

using WordId = std::uint32_t;

inline constexpr WordId kBos = 0;
inline constexpr WordId kEos = 1;
inline constexpr WordId kUnk = 2;
inline constexpr WordId kFirstWordId = 3;

inline constexpr std::string_view kBosText = "<s>";
inline constexpr std::string_view kEosText = "</s>";
inline constexpr std::string_view kUnkText = "<unk>";

struct PreprocessConfig {
    std::uint64_t min_count = 5;
    std::size_t keyword_count = 100;
    std::size_t max_sentence_tokens = 64;

    /// Throws Error(invalid_argument) when a field is out of range.
    void validate() const;

    bool operator==(const PreprocessConfig&) const = default;
};

/// Normalized words of one corpus line. BOS/EOS are added only at model time.
struct TokenSentence {
    std::vector<std::string> tokens;

    bool operator==(const TokenSentence&) const = default;
};

struct DictEntry {
    std::string word;
    WordId id = 0;
    std::uint64_t count = 0;

    bool operator==(const DictEntry&) const = default;
};

/// Word <-> id bijection. Ids 0..2 are the reserved markers; ordinary words
/// follow sorted by (count desc, word asc).
///
/// Reserved counts are bookkeeping: BOS and EOS hold the training sentence
/// count, UNK holds the number of occurrences cut by min_count.
class Dictionary {
public:
    Dictionary() = default;

    /// Builds from explicit entries and checks every ordering invariant.
    /// Throws Error(invalid_argument) on violation.
    static Dictionary from_entries(std::vector<DictEntry> entries, std::uint64_t min_count);

    std::optional<WordId> find(std::string_view word) const;
    WordId id_or_unk(std::string_view word) const;

    const std::string& word(WordId id) const { return entries_.at(id).word; }
    std::uint64_t count(WordId id) const { return entries_.at(id).count; }
    std::size_t size() const noexcept { return entries_.size(); }
    std::span<const DictEntry> entries() const noexcept { return entries_; }

    /// Tokens seen in training, cut words included (as UNK).
    std::uint64_t training_tokens() const noexcept;

    bool operator==(const Dictionary& other) const { return entries_ == other.entries_; }

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept
        {
            return std::hash<std::string_view>{}(s);
        }
    };

    std::vector<DictEntry> entries_;
    std::unordered_map<std::string, WordId, Hash, std::equal_to<>> index_;
};

struct KeywordList {
    std::vector<WordId> ids;

    bool operator==(const KeywordList&) const = default;
};

struct CorpusStats {
    std::size_t sentence_count = 0;
    std::size_t total_tokens = 0;
    std::size_t unique_words = 0;
    double mean_sentence_length = 0.0;
    double mean_letters_per_word = 0.0;
};

/// Lowercases, drops URLs, keeps only [a-z0-9'-] runs as tokens. Returns
/// nullopt when nothing survives. `line_number` is used only in errors.
///
/// Rules, in order:
///  - the line must be valid UTF-8, otherwise Error(ingest) naming the line;
///  - ASCII letters are lowercased, the line is split on whitespace;
///  - a whitespace token that starts with "http://", "https://" or "www."
///    (after leading punctuation) is dropped whole;
///  - any codepoint outside [a-z0-9'-] separates tokens (emoji included);
///  - apostrophes and hyphens are trimmed from token edges, and tokens with
///    no letter or digit are dropped;
///  - the result is truncated to max_sentence_tokens.
std::optional<TokenSentence> normalize_sentence(std::string_view raw, const PreprocessConfig& config,
                                                std::size_t line_number = 0);

/// Reads one sentence per line, skipping lines that normalize to nothing.
std::vector<TokenSentence> read_corpus(std::istream& in, const PreprocessConfig& config);

Dictionary build_dictionary(std::span<const TokenSentence> sentences, const PreprocessConfig& config);

KeywordList build_keyword_list(std::span<const TokenSentence> sentences, const Dictionary& dict,
                               const PreprocessConfig& config);

CorpusStats corpus_stats(std::span<const TokenSentence> sentences);

/// key=value lines; blank lines and '#' comments skipped, whitespace around
/// key and value trimmed. Throws Error(invalid_argument) on a malformed line.
std::map<std::string, std::string> read_key_values(std::istream& in);

/// Applies min_count / keyword_count / max_sentence_tokens from `values` on
/// top of `base`. Other keys are ignored.
PreprocessConfig apply_preprocess_keys(const std::map<std::string, std::string>& values,
                                       PreprocessConfig base);

/// Strict decimal parse of an unsigned integer; throws Error(invalid_argument).
std::uint64_t parse_unsigned(std::string_view text, std::string_view what);

} // namespace mhsteg
