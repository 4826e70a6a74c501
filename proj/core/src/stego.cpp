#include "mhsteg/stego.hpp"

#include "mhsteg/error.hpp"

#include <algorithm>
#include <random>
#include <variant>

namespace mhsteg {

namespace {

// Consecutive sentences that carry no bits before embed() gives up.
constexpr std::size_t kMaxIdleSentences = 4096;

int hex_value(char c) noexcept
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

} // namespace

BitString frame_payload(const Payload& payload)
{
    const std::uint64_t n = payload.bit_length();
    if (n >= (std::uint64_t{1} << kLengthHeaderBits))
        throw Error(ErrorCode::invalid_argument, "payload too large for a 32-bit length header");
    BitString bits;
    bits.reserve(kLengthHeaderBits + n);
    append_uint(bits, n, kLengthHeaderBits);
    append_bytes(bits, payload.data);
    return bits;
}

Payload unframe_payload(std::span<const Bit> bits)
{
    if (bits.size() < kLengthHeaderBits)
        throw Error(ErrorCode::truncated_payload, "only " + std::to_string(bits.size()) +
                                                      " bits, length header needs " +
                                                      std::to_string(kLengthHeaderBits));
    const std::uint64_t n = read_uint(bits, 0, kLengthHeaderBits);
    if (bits.size() - kLengthHeaderBits < n)
        throw Error(ErrorCode::truncated_payload, "header declares " + std::to_string(n) + " bits, only " +
                                                      std::to_string(bits.size() - kLengthHeaderBits) +
                                                      " available");
    if (n % 8 != 0)
        throw Error(ErrorCode::truncated_payload,
                    "header declares " + std::to_string(n) + " bits, not a whole number of bytes");
    Payload p;
    p.data.resize(n / 8);
    for (std::size_t i = 0; i < p.data.size(); ++i)
        p.data[i] = static_cast<std::uint8_t>(read_uint(bits, kLengthHeaderBits + 8 * i, 8));
    return p;
}

Payload payload_from_hex(std::string_view hex)
{
    if (hex.starts_with("0x") || hex.starts_with("0X"))
        hex.remove_prefix(2);
    if (hex.size() % 2 != 0)
        throw Error(ErrorCode::invalid_argument, "hex payload has odd length");
    Payload p;
    p.data.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        const int hi = hex_value(hex[i]);
        const int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0)
            throw Error(ErrorCode::invalid_argument, "invalid hex digit near position " + std::to_string(i));
        p.data.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
    }
    return p;
}

std::string payload_to_hex(const Payload& payload)
{
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(payload.data.size() * 2);
    for (std::uint8_t b : payload.data) {
        out.push_back(kHex[b >> 4]);
        out.push_back(kHex[b & 0xF]);
    }
    return out;
}

void EmbedConfig::validate() const
{
    if (cps < 2)
        throw Error(ErrorCode::invalid_argument, "cps must be >= 2");
    if (max_sentence_words < 2)
        throw Error(ErrorCode::invalid_argument, "max_sentence_words must be >= 2");
}

std::string format_stego_text(const StegoText& text)
{
    std::string out;
    for (const auto& sentence : text.sentences) {
        for (std::size_t i = 0; i < sentence.size(); ++i) {
            if (i)
                out += ' ';
            out += sentence[i];
        }
        out += '\n';
    }
    return out;
}

StegoText parse_stego_text(std::string_view bytes)
{
    StegoText text;
    while (!bytes.empty()) {
        const auto nl = bytes.find('\n');
        std::string_view line = bytes.substr(0, nl);
        bytes = nl == std::string_view::npos ? std::string_view{} : bytes.substr(nl + 1);

        std::vector<std::string> words;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
                ++i;
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
                ++j;
            if (j > i)
                words.emplace_back(line.substr(i, j - i));
            i = j;
        }
        if (!words.empty())
            text.sentences.push_back(std::move(words));
    }
    return text;
}

struct StegoCodec::Step {
    CandidatePool pool;
    unsigned order = 0;
    std::variant<std::monostate, HuffmanTree, FixedLengthCodebook> code;

    DecodedWord decode(BitReader& bits) const
    {
        if (const auto* tree = std::get_if<HuffmanTree>(&code))
            return decode_word(*tree, bits);
        if (const auto* book = std::get_if<FixedLengthCodebook>(&code))
            return book->decode(bits);
        return {pool.entries.front().word, 0, 0};
    }

    // Appends the codeword of `word`; false when the word cannot be chosen here.
    bool encode(WordId word, BitString& out, std::uint32_t& length) const
    {
        if (const auto* tree = std::get_if<HuffmanTree>(&code)) {
            const auto leaf = tree->find_leaf(word);
            if (leaf < 0)
                return false;
            const auto c = tree->code(static_cast<std::size_t>(leaf));
            out.insert(out.end(), c.begin(), c.end());
            length = static_cast<std::uint32_t>(c.size());
            return true;
        }
        if (const auto* book = std::get_if<FixedLengthCodebook>(&code)) {
            const auto idx = book->find(word);
            if (idx < 0)
                return false;
            append_uint(out, static_cast<std::uint64_t>(idx), book->width());
            length = book->width();
            return true;
        }
        length = 0;
        return pool.entries.front().word == word;
    }
};

struct StegoCodec::Cache {
    std::unordered_map<ContextKey, Step, ContextHash, ContextEq> steps;
};

StegoCodec::StegoCodec(const MarkovModel& model, EmbedConfig config)
    : model_(&model), config_(config), cache_(std::make_unique<Cache>())
{
    config_.validate();
}

StegoCodec::~StegoCodec() = default;
StegoCodec::StegoCodec(StegoCodec&&) noexcept = default;
StegoCodec& StegoCodec::operator=(StegoCodec&&) noexcept = default;

// Pool for a context: the longest stored suffix whose successors are not all
// UNK. A context whose every stored suffix is UNK-only can only end the
// sentence.
const StegoCodec::Step& StegoCodec::step_for(std::span<const WordId> context)
{
    if (const auto it = cache_->steps.find(context); it != cache_->steps.end())
        return it->second;

    Step step;
    bool stored = false;
    for (unsigned k = model_->order(); k >= 1 && step.pool.entries.empty(); --k) {
        const auto& table = model_->table(k);
        const auto it = table.find(context.last(k));
        if (it == table.end())
            continue;
        stored = true;
        const auto& succ = it->second.successors;
        if (std::all_of(succ.begin(), succ.end(), [](const Successor& s) { return s.word == kUnk; }))
            continue;
        step.pool = build_candidate_pool(succ, config_.cps);
        step.order = k;
    }
    if (!stored)
        throw Error(ErrorCode::unknown_context, "context has no stored successors at any order");
    if (step.pool.entries.empty())
        step.pool.entries.push_back({kEos, 1});

    if (step.pool.size() >= 2) {
        if (config_.scheme == CodingScheme::huffman)
            step.code.emplace<HuffmanTree>(step.pool);
        else
            step.code.emplace<FixedLengthCodebook>(step.pool);
    }
    return cache_->steps.emplace(ContextKey{{context.begin(), context.end()}}, std::move(step)).first->second;
}

EmbedResult StegoCodec::embed(std::span<const Bit> bits)
{
    if (config_.keyword_seed)
        return embed_with(bits, *config_.keyword_seed);
    std::random_device rd;
    return embed_with(bits, (std::uint64_t{rd()} << 32) | rd());
}

EmbedResult StegoCodec::embed(std::span<const Bit> bits, std::uint64_t seed)
{
    return embed_with(bits, seed);
}

EmbedResult StegoCodec::embed_with(std::span<const Bit> bits, std::uint64_t seed)
{
    const auto& keywords = model_->keywords().ids;
    if (keywords.empty())
        throw Error(ErrorCode::empty_corpus, "model has an empty keyword list");
    const auto& dict = model_->dictionary();
    const unsigned order = model_->order();

    std::mt19937_64 rng(seed);
    BitReader reader(bits);
    EmbedResult result;
    std::vector<WordId> context(order);
    std::size_t idle = 0;

    while (!reader.exhausted()) {
        const auto sentence_index = static_cast<std::uint32_t>(result.text.sentences.size());
        const std::size_t bits_before = reader.position();
        const WordId keyword = keywords[static_cast<std::size_t>(rng() % keywords.size())];

        std::vector<std::string> words{dict.word(keyword)};
        std::fill(context.begin(), context.end(), kBos);
        context.back() = keyword;

        while (words.size() < config_.max_sentence_words) {
            const Step& step = step_for(context);
            const bool active = !reader.exhausted();
            const DecodedWord d = step.decode(reader);
            result.trace.steps.push_back({sentence_index, step.order, static_cast<std::uint32_t>(step.pool.size()),
                                          static_cast<std::uint32_t>(d.code_length),
                                          static_cast<std::uint32_t>(d.bits_consumed), d.word, active});
            if (d.word == kEos)
                break;
            words.push_back(dict.word(d.word));
            std::shift_left(context.begin(), context.end(), 1);
            context.back() = d.word;
        }
        result.text.sentences.push_back(std::move(words));

        if (reader.position() == bits_before) {
            if (++idle >= kMaxIdleSentences)
                throw Error(ErrorCode::capacity,
                            std::to_string(idle) + " consecutive sentences carried no bits; model cannot embed");
        } else {
            idle = 0;
        }
    }
    result.trace.sentences = result.text.sentences.size();
    result.trace.bits_consumed = reader.position();
    return result;
}

BitString StegoCodec::decode_text(const StegoText& text, EmbedTrace* trace, bool stop_at_payload)
{
    const auto& dict = model_->dictionary();
    const auto& keywords = model_->keywords().ids;
    const unsigned order = model_->order();
    std::vector<WordId> context(order);
    BitString acc;

    auto append_step = [&](std::size_t si, std::size_t pos, WordId word) {
        const Step& step = step_for(context);
        std::uint32_t length = 0;
        if (!step.encode(word, acc, length)) {
            throw DecodeMismatchError(si, pos,
                                      word == kEos ? "sentence end is not a candidate here"
                                                   : "'" + dict.word(word) + "' is not in the candidate pool");
        }
        if (trace) {
            trace->steps.push_back({static_cast<std::uint32_t>(si), step.order,
                                    static_cast<std::uint32_t>(step.pool.size()), length, length, word, true});
        }
    };

    for (std::size_t si = 0; si < text.sentences.size(); ++si) {
        const auto& sentence = text.sentences[si];
        if (sentence.empty())
            throw DecodeMismatchError(si, 0, "empty sentence");
        if (sentence.size() > config_.max_sentence_words)
            throw DecodeMismatchError(si, config_.max_sentence_words, "sentence longer than max_sentence_words");

        const auto keyword = dict.find(sentence.front());
        if (!keyword || std::find(keywords.begin(), keywords.end(), *keyword) == keywords.end())
            throw DecodeMismatchError(si, 0, "'" + sentence.front() + "' is not a keyword");
        std::fill(context.begin(), context.end(), kBos);
        context.back() = *keyword;

        for (std::size_t pos = 1; pos < sentence.size(); ++pos) {
            const auto id = dict.find(sentence[pos]);
            if (!id || *id < kFirstWordId)
                throw DecodeMismatchError(si, pos, "'" + sentence[pos] + "' is not a dictionary word");
            append_step(si, pos, *id);
            std::shift_left(context.begin(), context.end(), 1);
            context.back() = *id;
        }
        if (sentence.size() < config_.max_sentence_words)
            append_step(si, sentence.size(), kEos);

        if (trace)
            trace->sentences = si + 1;
        if (stop_at_payload && acc.size() >= kLengthHeaderBits &&
            acc.size() - kLengthHeaderBits >= read_uint(acc, 0, kLengthHeaderBits))
            break;
    }
    if (trace)
        trace->bits_consumed = acc.size();
    return acc;
}

BitString StegoCodec::extract_bits(const StegoText& text, EmbedTrace* trace)
{
    return decode_text(text, trace, false);
}

Payload StegoCodec::extract(const StegoText& text)
{
    return unframe_payload(decode_text(text, nullptr, true));
}

EmbedResult embed(const MarkovModel& model, std::span<const Bit> framed, const EmbedConfig& config)
{
    return StegoCodec(model, config).embed(framed);
}

Payload extract(const MarkovModel& model, const StegoText& text, const EmbedConfig& config)
{
    return StegoCodec(model, config).extract(text);
}

EmbedTrace trace_text(const MarkovModel& model, const StegoText& text, const EmbedConfig& config)
{
    EmbedTrace trace;
    StegoCodec(model, config).extract_bits(text, &trace);
    return trace;
}

} // namespace mhsteg
