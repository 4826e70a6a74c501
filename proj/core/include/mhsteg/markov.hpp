#pragma once

#include "mhsteg/corpus.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mhsteg {

struct ModelConfig {
    unsigned order = 2;
    PreprocessConfig preprocess;

    void validate() const;
};

/// Word ids of a conditioning context, oldest first.
struct ContextKey {
    std::vector<WordId> ids;

    bool operator==(const ContextKey&) const = default;
    auto operator<=>(const ContextKey&) const = default;
};

struct Successor {
    WordId word = 0;
    std::uint64_t count = 0;

    bool operator==(const Successor&) const = default;
};

/// Successor counts of one context, ordered by (count desc, word id asc).
struct ConditionalDistribution {
    std::vector<Successor> successors;
    std::uint64_t total = 0;

    bool operator==(const ConditionalDistribution&) const = default;
};

/// Result of a backoff lookup; `order` is the table that served it.
struct DistributionView {
    std::span<const Successor> successors;
    std::uint64_t total = 0;
    unsigned order = 0;

    /// count(word) or 0 when absent.
    std::uint64_t count_of(WordId word) const noexcept;
};

struct ContextHash {
    using is_transparent = void;
    std::size_t operator()(std::span<const WordId> ids) const noexcept;
    std::size_t operator()(const ContextKey& key) const noexcept { return (*this)(std::span(key.ids)); }
};

struct ContextEq {
    using is_transparent = void;
    bool operator()(std::span<const WordId> a, std::span<const WordId> b) const noexcept
    {
        return std::equal(a.begin(), a.end(), b.begin(), b.end());
    }
    bool operator()(const ContextKey& a, const ContextKey& b) const noexcept { return a.ids == b.ids; }
    bool operator()(const ContextKey& a, std::span<const WordId> b) const noexcept
    {
        return (*this)(std::span(a.ids), b);
    }
    bool operator()(std::span<const WordId> a, const ContextKey& b) const noexcept
    {
        return (*this)(a, std::span(b.ids));
    }
};

/// Context of length k -> successor counts, for one k.
using NgramTable = std::unordered_map<ContextKey, ConditionalDistribution, ContextHash, ContextEq>;

using Digest = std::array<std::uint8_t, 32>;

std::string to_hex(const Digest& digest);

/// Immutable m-order count model with lower-order tables kept for backoff.
class MarkovModel {
public:
    /// `tables[k-1]` holds contexts of length k, for k = 1..config.order.
    MarkovModel(ModelConfig config, Dictionary dictionary, KeywordList keywords,
                std::vector<NgramTable> tables);

    const ModelConfig& config() const noexcept { return config_; }
    unsigned order() const noexcept { return config_.order; }
    const Dictionary& dictionary() const noexcept { return dictionary_; }
    const KeywordList& keywords() const noexcept { return keywords_; }

    /// Table for contexts of length k (1 <= k <= order).
    const NgramTable& table(unsigned k) const { return tables_.at(k - 1); }

    /// Looks up the full context, then ever shorter suffixes down to length 1.
    /// `context` must have length order(). Throws Error(unknown_context).
    DistributionView successor_distribution(std::span<const WordId> context) const;

    /// Context that starts generation after a keyword: BOS^(order-1), keyword.
    ContextKey start_context(WordId keyword) const;

    const Digest& fingerprint() const noexcept { return fingerprint_; }

    /// Equal models serialize to equal bytes.
    bool operator==(const MarkovModel& other) const noexcept
    {
        return fingerprint_ == other.fingerprint_;
    }

private:
    ModelConfig config_;
    Dictionary dictionary_;
    KeywordList keywords_;
    std::vector<NgramTable> tables_;
    Digest fingerprint_{};
};

/// Sentence -> ids with cut words mapped to UNK, padded with `order` BOS and one EOS.
std::vector<WordId> padded_ids(const TokenSentence& sentence, const Dictionary& dict, unsigned order);

struct TrainOptions {
    /// Shards counted concurrently; the merged result does not depend on it.
    unsigned threads = 1;
};

MarkovModel train(std::span<const TokenSentence> sentences, const ModelConfig& config,
                  const TrainOptions& options = {});

/// Canonical model file bytes, trailer included.
std::string serialize_model(const MarkovModel& model);

/// Strict inverse of serialize_model; throws ParseError naming a byte offset.
MarkovModel parse_model(std::string_view bytes);

/// SHA-256 over the canonical bytes preceding the trailer line.
Digest model_fingerprint(const MarkovModel& model);

Digest sha256(std::string_view bytes);

namespace detail {
/// Canonical bytes up to, not including, the sha256 trailer line.
std::string serialize_body(const MarkovModel& model);
} // namespace detail

} // namespace mhsteg
