#include "mhsteg/corpus.hpp"

#include "mhsteg/error.hpp"

#include <algorithm>
#include <charconv>
#include <tuple>

namespace mhsteg {

namespace {

bool is_word_char(char c) noexcept
{
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'' || c == '-';
}

bool is_alnum(char c) noexcept
{
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

bool is_space(char c) noexcept
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Byte offset of the first invalid sequence, or npos.
std::size_t find_invalid_utf8(std::string_view s) noexcept
{
    std::size_t i = 0;
    while (i < s.size()) {
        const auto b0 = static_cast<unsigned char>(s[i]);
        if (b0 < 0x80) {
            ++i;
            continue;
        }
        std::size_t len = 0;
        char32_t cp = 0;
        char32_t min = 0;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
            min = 0x80;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
            min = 0x800;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
            min = 0x10000;
        } else {
            return i;
        }
        if (i + len > s.size())
            return i;
        for (std::size_t k = 1; k < len; ++k) {
            const auto b = static_cast<unsigned char>(s[i + k]);
            if ((b & 0xC0) != 0x80)
                return i;
            cp = (cp << 6) | (b & 0x3F);
        }
        if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
            return i;
        i += len;
    }
    return std::string_view::npos;
}

bool starts_with_url(std::string_view token) noexcept
{
    const auto first = std::find_if(token.begin(), token.end(), is_alnum);
    const std::string_view rest(first, token.end());
    return rest.starts_with("http://") || rest.starts_with("https://") || rest.starts_with("www.");
}

// Splits one whitespace-delimited piece into word tokens.
void split_piece(std::string_view piece, std::vector<std::string>& out)
{
    std::size_t i = 0;
    while (i < piece.size()) {
        while (i < piece.size() && !is_word_char(piece[i]))
            ++i;
        std::size_t j = i;
        while (j < piece.size() && is_word_char(piece[j]))
            ++j;
        std::string_view run = piece.substr(i, j - i);
        while (!run.empty() && (run.front() == '\'' || run.front() == '-'))
            run.remove_prefix(1);
        while (!run.empty() && (run.back() == '\'' || run.back() == '-'))
            run.remove_suffix(1);
        if (std::any_of(run.begin(), run.end(), is_alnum))
            out.emplace_back(run);
        i = j;
    }
}

} // namespace

void PreprocessConfig::validate() const
{
    if (min_count < 1)
        throw Error(ErrorCode::invalid_argument, "min_count must be >= 1");
    if (keyword_count < 1)
        throw Error(ErrorCode::invalid_argument, "keyword_count must be >= 1");
    if (max_sentence_tokens < 2)
        throw Error(ErrorCode::invalid_argument, "max_sentence_tokens must be >= 2");
}

std::optional<TokenSentence> normalize_sentence(std::string_view raw, const PreprocessConfig& config,
                                                std::size_t line_number)
{
    if (const auto bad = find_invalid_utf8(raw); bad != std::string_view::npos) {
        throw Error(ErrorCode::ingest, "line " + std::to_string(line_number) +
                                           ": invalid UTF-8 at byte " + std::to_string(bad));
    }

    // Non-ASCII bytes never belong to a token, so lowercasing ASCII and
    // treating every byte >= 0x80 as a separator is equivalent to working
    // on codepoints.
    std::string lowered(raw);
    for (char& c : lowered) {
        if (c >= 'A' && c <= 'Z')
            c = static_cast<char>(c - 'A' + 'a');
    }

    TokenSentence sentence;
    std::string_view rest(lowered);
    while (!rest.empty() && sentence.tokens.size() < config.max_sentence_tokens) {
        const auto start = std::find_if_not(rest.begin(), rest.end(), is_space);
        const auto stop = std::find_if(start, rest.end(), is_space);
        const std::string_view piece(start, stop);
        rest = std::string_view(stop, rest.end());
        if (piece.empty() || starts_with_url(piece))
            continue;
        split_piece(piece, sentence.tokens);
    }
    if (sentence.tokens.size() > config.max_sentence_tokens)
        sentence.tokens.resize(config.max_sentence_tokens);
    if (sentence.tokens.empty())
        return std::nullopt;
    return sentence;
}

std::vector<TokenSentence> read_corpus(std::istream& in, const PreprocessConfig& config)
{
    std::vector<TokenSentence> sentences;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (auto s = normalize_sentence(line, config, line_number))
            sentences.push_back(std::move(*s));
    }
    if (in.bad())
        throw Error(ErrorCode::io, "read failed after line " + std::to_string(line_number));
    return sentences;
}

Dictionary Dictionary::from_entries(std::vector<DictEntry> entries, std::uint64_t min_count)
{
    if (entries.size() < kFirstWordId)
        throw Error(ErrorCode::invalid_argument, "dictionary lacks reserved entries");
    const std::string_view reserved[] = {kBosText, kEosText, kUnkText};
    for (WordId id = 0; id < kFirstWordId; ++id) {
        if (entries[id].id != id || entries[id].word != reserved[id])
            throw Error(ErrorCode::invalid_argument, "reserved entry " + std::to_string(id) + " malformed");
    }

    Dictionary dict;
    dict.index_.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const DictEntry& e = entries[i];
        if (e.id != i)
            throw Error(ErrorCode::invalid_argument, "dictionary id " + std::to_string(e.id) +
                                                         " out of sequence at " + std::to_string(i));
        if (i >= kFirstWordId) {
            if (e.word.empty() || e.word.front() == '<')
                throw Error(ErrorCode::invalid_argument, "bad dictionary word at id " + std::to_string(i));
            if (e.count < min_count)
                throw Error(ErrorCode::invalid_argument,
                            "word '" + e.word + "' below min_count");
            if (i > kFirstWordId) {
                const DictEntry& prev = entries[i - 1];
                if (!(prev.count > e.count || (prev.count == e.count && prev.word < e.word)))
                    throw Error(ErrorCode::invalid_argument,
                                "dictionary not in (count desc, word asc) order at id " +
                                    std::to_string(i));
            }
        }
        if (!dict.index_.emplace(e.word, e.id).second)
            throw Error(ErrorCode::invalid_argument, "duplicate dictionary word '" + e.word + "'");
    }
    dict.entries_ = std::move(entries);
    return dict;
}

std::optional<WordId> Dictionary::find(std::string_view word) const
{
    const auto it = index_.find(word);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

WordId Dictionary::id_or_unk(std::string_view word) const
{
    const auto id = find(word);
    return id && *id >= kFirstWordId ? *id : kUnk;
}

std::uint64_t Dictionary::training_tokens() const noexcept
{
    std::uint64_t total = entries_.size() > kUnk ? entries_[kUnk].count : 0;
    for (std::size_t i = kFirstWordId; i < entries_.size(); ++i)
        total += entries_[i].count;
    return total;
}

Dictionary build_dictionary(std::span<const TokenSentence> sentences, const PreprocessConfig& config)
{
    config.validate();
    std::unordered_map<std::string_view, std::uint64_t> counts;
    std::size_t nonempty = 0;
    for (const auto& s : sentences) {
        if (!s.tokens.empty())
            ++nonempty;
        for (const auto& t : s.tokens)
            ++counts[t];
    }
    if (nonempty == 0)
        throw Error(ErrorCode::empty_corpus, "corpus has no sentences");

    std::vector<DictEntry> words;
    std::uint64_t cut = 0;
    for (const auto& [w, c] : counts) {
        if (c >= config.min_count)
            words.push_back({std::string(w), 0, c});
        else
            cut += c;
    }
    if (words.empty())
        throw Error(ErrorCode::empty_corpus, "no words survive cutoff min_count=" +
                                                 std::to_string(config.min_count));

    std::sort(words.begin(), words.end(), [](const DictEntry& a, const DictEntry& b) {
        return std::tie(b.count, a.word) < std::tie(a.count, b.word);
    });

    std::vector<DictEntry> entries;
    entries.reserve(words.size() + kFirstWordId);
    entries.push_back({std::string(kBosText), kBos, nonempty});
    entries.push_back({std::string(kEosText), kEos, nonempty});
    entries.push_back({std::string(kUnkText), kUnk, cut});
    for (auto& w : words) {
        w.id = static_cast<WordId>(entries.size());
        entries.push_back(std::move(w));
    }
    return Dictionary::from_entries(std::move(entries), config.min_count);
}

KeywordList build_keyword_list(std::span<const TokenSentence> sentences, const Dictionary& dict,
                               const PreprocessConfig& config)
{
    config.validate();
    std::unordered_map<WordId, std::uint64_t> first;
    for (const auto& s : sentences) {
        if (s.tokens.empty())
            continue;
        if (const auto id = dict.find(s.tokens.front()); id && *id >= kFirstWordId)
            ++first[*id];
    }
    if (first.empty())
        throw Error(ErrorCode::empty_corpus, "no sentence starts with a dictionary word");

    std::vector<std::pair<WordId, std::uint64_t>> ranked(first.begin(), first.end());
    std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
        if (a.second != b.second)
            return a.second > b.second;
        return dict.word(a.first) < dict.word(b.first);
    });
    if (ranked.size() > config.keyword_count)
        ranked.resize(config.keyword_count);

    KeywordList list;
    list.ids.reserve(ranked.size());
    for (const auto& [id, _] : ranked)
        list.ids.push_back(id);
    return list;
}

CorpusStats corpus_stats(std::span<const TokenSentence> sentences)
{
    CorpusStats stats;
    std::unordered_map<std::string_view, char> seen;
    std::size_t letters = 0;
    for (const auto& s : sentences) {
        ++stats.sentence_count;
        stats.total_tokens += s.tokens.size();
        for (const auto& t : s.tokens) {
            seen.try_emplace(t, 0);
            letters += static_cast<std::size_t>(std::count_if(t.begin(), t.end(), is_word_char));
        }
    }
    stats.unique_words = seen.size();
    if (stats.sentence_count > 0)
        stats.mean_sentence_length =
            static_cast<double>(stats.total_tokens) / static_cast<double>(stats.sentence_count);
    if (stats.total_tokens > 0)
        stats.mean_letters_per_word =
            static_cast<double>(letters) / static_cast<double>(stats.total_tokens);
    return stats;
}

std::map<std::string, std::string> read_key_values(std::istream& in)
{
    auto trim = [](std::string_view s) {
        const auto b = std::find_if_not(s.begin(), s.end(), is_space);
        const auto e = std::find_if_not(s.rbegin(), s.rend(), is_space).base();
        return b < e ? std::string(b, e) : std::string();
    };

    std::map<std::string, std::string> values;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string body = trim(line);
        if (body.empty() || body.front() == '#')
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::invalid_argument,
                        "config line " + std::to_string(line_number) + ": expected key=value");
        std::string key = trim(std::string_view(body).substr(0, eq));
        if (key.empty())
            throw Error(ErrorCode::invalid_argument,
                        "config line " + std::to_string(line_number) + ": empty key");
        values[std::move(key)] = trim(std::string_view(body).substr(eq + 1));
    }
    return values;
}

std::uint64_t parse_unsigned(std::string_view text, std::string_view what)
{
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw Error(ErrorCode::invalid_argument,
                    std::string(what) + ": expected unsigned integer, got '" + std::string(text) + "'");
    return value;
}

PreprocessConfig apply_preprocess_keys(const std::map<std::string, std::string>& values,
                                       PreprocessConfig base)
{
    if (const auto it = values.find("min_count"); it != values.end())
        base.min_count = parse_unsigned(it->second, "min_count");
    if (const auto it = values.find("keyword_count"); it != values.end())
        base.keyword_count = parse_unsigned(it->second, "keyword_count");
    if (const auto it = values.find("max_sentence_tokens"); it != values.end())
        base.max_sentence_tokens = parse_unsigned(it->second, "max_sentence_tokens");
    return base;
}

} // namespace mhsteg
