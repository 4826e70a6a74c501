// Canonical model file:
//
//   MHSTEG/1
//   order=<m>
//   min_count=<n>
//   dict_size=<N>
//   keyword_count=<K>
//   [DICT]            N lines "id word count", id order
//   [KEYWORDS]        K lines "id", list order
//   [NGRAMS k]        k = 1..m, lines "ctx_1 .. ctx_k succ count" sorted by id tuple
//   sha256=<hex>      over every preceding byte
//
// Every line ends with '\n'. Numbers are plain decimal without leading zeros.

#include "mhsteg/error.hpp"
#include "mhsteg/markov.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <optional>

namespace mhsteg {

namespace {

constexpr std::string_view kMagic = "MHSTEG/1";
constexpr std::string_view kMagicPrefix = "MHSTEG/";
constexpr std::string_view kTrailerKey = "sha256=";

void append_number(std::string& out, std::uint64_t v)
{
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

class LineCursor {
public:
    explicit LineCursor(std::string_view bytes) : bytes_(bytes) {}

    bool at_end() const noexcept { return pos_ >= bytes_.size(); }
    std::size_t offset() const noexcept { return pos_; }

    std::string_view peek() const
    {
        const auto nl = bytes_.find('\n', pos_);
        if (nl == std::string_view::npos)
            return bytes_.substr(pos_);
        return bytes_.substr(pos_, nl - pos_);
    }

    // Returns the line and its starting offset; the '\n' is required.
    std::pair<std::string_view, std::size_t> next(std::string_view what)
    {
        if (at_end())
            throw ParseError(pos_, "unexpected end of file, expected " + std::string(what));
        const auto nl = bytes_.find('\n', pos_);
        if (nl == std::string_view::npos)
            throw ParseError(bytes_.size(), "missing newline after " + std::string(what));
        const std::size_t start = pos_;
        pos_ = nl + 1;
        return {bytes_.substr(start, nl - start), start};
    }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

// Canonical decimal: digits only, no leading zero unless the value is 0.
std::optional<std::uint64_t> canonical_number(std::string_view s)
{
    if (s.empty() || s.size() > 20 || (s.size() > 1 && s.front() == '0'))
        return std::nullopt;
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        return std::nullopt;
    return v;
}

std::vector<std::string_view> split_spaces(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (true) {
        const auto sp = line.find(' ', i);
        fields.push_back(line.substr(i, sp == std::string_view::npos ? std::string_view::npos : sp - i));
        if (sp == std::string_view::npos)
            break;
        i = sp + 1;
    }
    return fields;
}

std::uint64_t number_field(std::string_view field, std::size_t offset, std::string_view what)
{
    const auto v = canonical_number(field);
    if (!v)
        throw ParseError(offset, "bad " + std::string(what) + " '" + std::string(field) + "'");
    return *v;
}

std::uint64_t header_value(LineCursor& cur, std::string_view key)
{
    const auto [line, offset] = cur.next(key);
    if (!line.starts_with(key) || line.size() <= key.size() || line[key.size()] != '=')
        throw ParseError(offset, "expected '" + std::string(key) + "=<n>'");
    return number_field(line.substr(key.size() + 1), offset + key.size() + 1, key);
}

void expect_line(LineCursor& cur, std::string_view expected)
{
    const auto [line, offset] = cur.next(expected);
    if (line != expected)
        throw ParseError(offset, "expected '" + std::string(expected) + "'");
}

} // namespace

Digest sha256(std::string_view bytes)
{
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size())
        throw Error(ErrorCode::io, "SHA-256 computation failed");
    return out;
}

namespace detail {

std::string serialize_body(const MarkovModel& model)
{
    const auto& dict = model.dictionary();
    std::string out;
    out.reserve(64 + dict.size() * 24);
    out += kMagic;
    out += "\norder=";
    append_number(out, model.order());
    out += "\nmin_count=";
    append_number(out, model.config().preprocess.min_count);
    out += "\ndict_size=";
    append_number(out, dict.size());
    out += "\nkeyword_count=";
    append_number(out, model.keywords().ids.size());
    out += "\n[DICT]\n";
    for (const auto& e : dict.entries()) {
        append_number(out, e.id);
        out += ' ';
        out += e.word;
        out += ' ';
        append_number(out, e.count);
        out += '\n';
    }
    out += "[KEYWORDS]\n";
    for (WordId id : model.keywords().ids) {
        append_number(out, id);
        out += '\n';
    }
    for (unsigned k = 1; k <= model.order(); ++k) {
        out += "[NGRAMS ";
        append_number(out, k);
        out += "]\n";

        const auto& table = model.table(k);
        std::vector<const std::pair<const ContextKey, ConditionalDistribution>*> rows;
        rows.reserve(table.size());
        for (const auto& row : table)
            rows.push_back(&row);
        std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->first < b->first; });

        std::vector<Successor> succ;
        for (const auto* row : rows) {
            succ.assign(row->second.successors.begin(), row->second.successors.end());
            std::sort(succ.begin(), succ.end(), [](const Successor& a, const Successor& b) { return a.word < b.word; });
            for (const auto& s : succ) {
                for (WordId id : row->first.ids) {
                    append_number(out, id);
                    out += ' ';
                }
                append_number(out, s.word);
                out += ' ';
                append_number(out, s.count);
                out += '\n';
            }
        }
    }
    return out;
}

} // namespace detail

std::string serialize_model(const MarkovModel& model)
{
    std::string out = detail::serialize_body(model);
    const auto digest = to_hex(sha256(out));
    out += kTrailerKey;
    out += digest;
    out += '\n';
    return out;
}

Digest model_fingerprint(const MarkovModel& model)
{
    return model.fingerprint();
}

MarkovModel parse_model(std::string_view bytes)
{
    LineCursor cur(bytes);

    {
        const auto [line, offset] = cur.next("magic");
        if (line != kMagic) {
            if (line.starts_with(kMagicPrefix))
                throw ParseError(offset + kMagicPrefix.size(),
                                 "unsupported format version '" + std::string(line.substr(kMagicPrefix.size())) + "'");
            throw ParseError(offset, "bad magic, not a model file");
        }
    }

    ModelConfig config;
    const std::size_t order_offset = cur.offset();
    const auto order = header_value(cur, "order");
    if (order < 1 || order > 64)
        throw ParseError(order_offset, "order out of range");
    config.order = static_cast<unsigned>(order);
    const std::size_t min_count_offset = cur.offset();
    config.preprocess.min_count = header_value(cur, "min_count");
    if (config.preprocess.min_count < 1)
        throw ParseError(min_count_offset, "min_count must be >= 1");
    const std::size_t dict_offset = cur.offset();
    const auto dict_size = header_value(cur, "dict_size");
    if (dict_size < kFirstWordId + 1 || dict_size > 0xFFFFFFFFull)
        throw ParseError(dict_offset, "dict_size out of range");
    const std::size_t kw_offset = cur.offset();
    const auto keyword_count = header_value(cur, "keyword_count");
    if (keyword_count < 1 || keyword_count > dict_size)
        throw ParseError(kw_offset, "keyword_count out of range");
    config.preprocess.keyword_count = keyword_count;

    expect_line(cur, "[DICT]");
    const std::size_t dict_section = cur.offset();
    std::vector<DictEntry> entries;
    entries.reserve(dict_size);
    for (std::uint64_t i = 0; i < dict_size; ++i) {
        const auto [line, offset] = cur.next("dictionary entry");
        const auto f = split_spaces(line);
        if (f.size() != 3 || f[1].empty())
            throw ParseError(offset, "dictionary line needs 'id word count'");
        const auto id = number_field(f[0], offset, "dictionary id");
        if (id != i)
            throw ParseError(offset, "dictionary id " + std::to_string(id) + " out of order");
        const auto count = number_field(f[2], offset + f[0].size() + f[1].size() + 2, "dictionary count");
        entries.push_back({std::string(f[1]), static_cast<WordId>(id), count});
    }
    Dictionary dict;
    try {
        dict = Dictionary::from_entries(std::move(entries), config.preprocess.min_count);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(dict_section, e.what());
    }

    expect_line(cur, "[KEYWORDS]");
    KeywordList keywords;
    for (std::uint64_t i = 0; i < keyword_count; ++i) {
        const auto [line, offset] = cur.next("keyword id");
        const auto id = number_field(line, offset, "keyword id");
        if (id < kFirstWordId || id >= dict_size)
            throw ParseError(offset, "keyword id " + std::to_string(id) + " is not a word");
        keywords.ids.push_back(static_cast<WordId>(id));
    }

    std::vector<NgramTable> tables(config.order);
    std::vector<std::uint64_t> tuple, prev;
    for (unsigned k = 1; k <= config.order; ++k) {
        expect_line(cur, "[NGRAMS " + std::to_string(k) + "]");
        prev.clear();
        NgramTable& table = tables[k - 1];
        ConditionalDistribution* current = nullptr;
        while (!cur.at_end()) {
            const auto peeked = cur.peek();
            if (peeked.starts_with("[") || peeked.starts_with(kTrailerKey))
                break;
            const auto [line, offset] = cur.next("n-gram line");
            const auto f = split_spaces(line);
            if (f.size() != k + 2)
                throw ParseError(offset, "n-gram line needs " + std::to_string(k + 2) + " fields");
            tuple.clear();
            std::size_t field_offset = offset;
            for (std::size_t j = 0; j < f.size(); ++j) {
                tuple.push_back(number_field(f[j], field_offset, "n-gram field"));
                field_offset += f[j].size() + 1;
            }
            for (std::size_t j = 0; j <= k; ++j) {
                if (tuple[j] >= dict_size)
                    throw ParseError(offset, "id " + std::to_string(tuple[j]) + " outside dictionary");
            }
            if (tuple[k] == kBos || tuple[k + 1] == 0)
                throw ParseError(offset, "invalid successor or zero count");
            if (!prev.empty() && !std::lexicographical_compare(prev.begin(), prev.begin() + k + 1,
                                                               tuple.begin(), tuple.begin() + k + 1))
                throw ParseError(offset, "n-gram lines not in canonical order");

            const bool same_ctx = !prev.empty() && std::equal(prev.begin(), prev.begin() + k, tuple.begin());
            if (!same_ctx) {
                ContextKey key;
                key.ids.assign(tuple.begin(), tuple.begin() + k);
                current = &table[std::move(key)];
            }
            current->successors.push_back({static_cast<WordId>(tuple[k]), tuple[k + 1]});
            prev = tuple;
        }
    }

    const auto [trailer, trailer_offset] = cur.next("sha256 trailer");
    if (!trailer.starts_with(kTrailerKey))
        throw ParseError(trailer_offset, "expected sha256 trailer");
    const std::string expected = to_hex(sha256(bytes.substr(0, trailer_offset)));
    if (trailer.substr(kTrailerKey.size()) != expected)
        throw ParseError(trailer_offset + kTrailerKey.size(), "checksum mismatch");
    if (!cur.at_end())
        throw ParseError(cur.offset(), "trailing bytes after checksum");

    std::optional<MarkovModel> model;
    try {
        model.emplace(config, std::move(dict), std::move(keywords), std::move(tables));
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(0, std::string("inconsistent model: ") + e.what());
    }

    const std::string canonical = serialize_model(*model);
    if (canonical != bytes) {
        const auto diff = std::mismatch(canonical.begin(), canonical.end(), bytes.begin(), bytes.end());
        throw ParseError(static_cast<std::size_t>(diff.second - bytes.begin()), "non-canonical encoding");
    }
    return std::move(*model);
}

} // namespace mhsteg
