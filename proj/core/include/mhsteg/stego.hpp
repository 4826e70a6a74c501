#pragma once

#include "mhsteg/bits.hpp"
#include "mhsteg/coder.hpp"
#include "mhsteg/markov.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mhsteg {

inline constexpr unsigned kLengthHeaderBits = 32;

struct Payload {
    std::vector<std::uint8_t> data;

    std::uint64_t bit_length() const noexcept { return data.size() * 8; }
    bool operator==(const Payload&) const = default;
};

/// 32-bit big-endian bit length, then the bytes MSB first.
/// Throws Error(invalid_argument) when the payload has 2^32 bits or more.
BitString frame_payload(const Payload& payload);

/// Reads the header and exactly that many bits; surplus bits are ignored.
/// Throws Error(truncated_payload) when too few bits are present.
Payload unframe_payload(std::span<const Bit> bits);

Payload payload_from_hex(std::string_view hex);
std::string payload_to_hex(const Payload& payload);

enum class CodingScheme {
    huffman,
    fixed_length, // baseline: uniform codes over the top 2^k candidates
};

struct EmbedConfig {
    std::size_t cps = 8;
    std::size_t max_sentence_words = 32;
    std::optional<std::uint64_t> keyword_seed; // unset: seeded from std::random_device
    CodingScheme scheme = CodingScheme::huffman;

    void validate() const;
};

/// Generated sentences, words only.
struct StegoText {
    std::vector<std::vector<std::string>> sentences;

    bool operator==(const StegoText&) const = default;
};

/// One line per sentence, words separated by single spaces.
std::string format_stego_text(const StegoText& text);

/// Inverse of format_stego_text; blank lines are skipped.
StegoText parse_stego_text(std::string_view bytes);

/// One coding decision: a word after the keyword, or a sentence end.
struct TraceStep {
    std::uint32_t sentence = 0;
    std::uint32_t context_order = 0; // table order that served the pool
    std::uint32_t pool_size = 0;
    std::uint32_t code_length = 0;
    std::uint32_t payload_bits = 0;  // bits actually taken from the payload
    WordId word = 0;                 // kEos for a sentence end
    bool payload_active = true;      // payload bits remained when the step began
};

struct EmbedTrace {
    std::vector<TraceStep> steps;
    std::size_t sentences = 0;
    std::size_t bits_consumed = 0;
};

struct EmbedResult {
    StegoText text;
    EmbedTrace trace;
};

/// Embeds and extracts with one model and configuration. Caches the coding
/// structure per context, so reusing a codec across many payloads is cheap.
/// Not safe for concurrent use; the model may be shared by several codecs.
class StegoCodec {
public:
    StegoCodec(const MarkovModel& model, EmbedConfig config);
    ~StegoCodec();
    StegoCodec(StegoCodec&&) noexcept;
    StegoCodec& operator=(StegoCodec&&) noexcept;

    const EmbedConfig& config() const noexcept { return config_; }
    const MarkovModel& model() const noexcept { return *model_; }

    /// Generates sentences until every bit is consumed and the current
    /// sentence has ended. Throws Error(empty_corpus) for an empty keyword
    /// list and Error(capacity) when the model cannot carry any bits.
    EmbedResult embed(std::span<const Bit> bits);

    /// Same as embed(), using `seed` for keyword choice.
    EmbedResult embed(std::span<const Bit> bits, std::uint64_t seed);

    /// Every bit carried by the text, padding included.
    /// Throws DecodeMismatchError when a word is absent from its rebuilt pool.
    BitString extract_bits(const StegoText& text, EmbedTrace* trace = nullptr);

    /// Decodes a framed payload, reading only as many sentences as needed.
    Payload extract(const StegoText& text);

private:
    struct Step;
    struct Cache;

    const Step& step_for(std::span<const WordId> context);
    EmbedResult embed_with(std::span<const Bit> bits, std::uint64_t seed);
    BitString decode_text(const StegoText& text, EmbedTrace* trace, bool stop_at_payload);

    const MarkovModel* model_;
    EmbedConfig config_;
    std::unique_ptr<Cache> cache_;
};

EmbedResult embed(const MarkovModel& model, std::span<const Bit> framed, const EmbedConfig& config);
Payload extract(const MarkovModel& model, const StegoText& text, const EmbedConfig& config);

/// Re-derives the coding decisions a receiver would make for `text`.
EmbedTrace trace_text(const MarkovModel& model, const StegoText& text, const EmbedConfig& config);

} // namespace mhsteg
