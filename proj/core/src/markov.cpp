#include "mhsteg/markov.hpp"

#include "mhsteg/error.hpp"

#include <algorithm>
#include <thread>

namespace mhsteg {

namespace {

using SuccessorCounts = std::unordered_map<WordId, std::uint64_t>;
using NgramCounts = std::unordered_map<ContextKey, SuccessorCounts, ContextHash, ContextEq>;

void count_shard(std::span<const TokenSentence> sentences, const Dictionary& dict, unsigned order,
                 std::vector<NgramCounts>& counts)
{
    for (const auto& s : sentences) {
        if (s.tokens.empty())
            continue;
        const auto seq = padded_ids(s, dict, order);
        for (unsigned k = 1; k <= order; ++k) {
            NgramCounts& table = counts[k - 1];
            for (std::size_t i = 0; i + k < seq.size(); ++i) {
                const WordId next = seq[i + k];
                if (next == kBos)
                    continue;
                const std::span<const WordId> ctx(seq.data() + i, k);
                auto it = table.find(ctx);
                if (it == table.end())
                    it = table.emplace(ContextKey{{ctx.begin(), ctx.end()}}, SuccessorCounts{}).first;
                ++it->second[next];
            }
        }
    }
}

void merge_into(std::vector<NgramCounts>& dst, std::vector<NgramCounts>&& src)
{
    for (std::size_t k = 0; k < dst.size(); ++k) {
        for (auto& [ctx, succ] : src[k]) {
            auto& target = dst[k][ctx];
            for (const auto& [w, c] : succ)
                target[w] += c;
        }
    }
}

void canonicalize(ConditionalDistribution& dist)
{
    std::sort(dist.successors.begin(), dist.successors.end(), [](const Successor& a, const Successor& b) {
        return a.count != b.count ? a.count > b.count : a.word < b.word;
    });
    dist.total = 0;
    for (const auto& s : dist.successors)
        dist.total += s.count;
}

} // namespace

void ModelConfig::validate() const
{
    if (order < 1)
        throw Error(ErrorCode::invalid_argument, "order must be >= 1");
    preprocess.validate();
}

std::size_t ContextHash::operator()(std::span<const WordId> ids) const noexcept
{
    std::uint64_t h = 0x9E3779B97F4A7C15ull ^ ids.size();
    for (WordId id : ids) {
        h ^= id + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        h *= 0xBF58476D1CE4E5B9ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 31));
}

std::uint64_t DistributionView::count_of(WordId word) const noexcept
{
    for (const auto& s : successors) {
        if (s.word == word)
            return s.count;
    }
    return 0;
}

std::string to_hex(const Digest& digest)
{
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(digest.size() * 2);
    for (std::uint8_t b : digest) {
        out.push_back(kHex[b >> 4]);
        out.push_back(kHex[b & 0xF]);
    }
    return out;
}

MarkovModel::MarkovModel(ModelConfig config, Dictionary dictionary, KeywordList keywords,
                         std::vector<NgramTable> tables)
    : config_(std::move(config)), dictionary_(std::move(dictionary)), keywords_(std::move(keywords)),
      tables_(std::move(tables))
{
    config_.validate();
    if (tables_.size() != config_.order)
        throw Error(ErrorCode::invalid_argument, "expected one table per order");
    if (keywords_.ids.empty())
        throw Error(ErrorCode::invalid_argument, "keyword list is empty");
    const auto dict_size = dictionary_.size();
    for (WordId k : keywords_.ids) {
        if (k < kFirstWordId || k >= dict_size)
            throw Error(ErrorCode::invalid_argument, "keyword id " + std::to_string(k) + " invalid");
    }
    for (unsigned k = 1; k <= config_.order; ++k) {
        for (auto& [ctx, dist] : tables_[k - 1]) {
            if (ctx.ids.size() != k)
                throw Error(ErrorCode::invalid_argument, "context length mismatch in table " + std::to_string(k));
            for (WordId id : ctx.ids) {
                if (id >= dict_size || id == kEos)
                    throw Error(ErrorCode::invalid_argument, "context id " + std::to_string(id) + " invalid");
            }
            if (dist.successors.empty())
                throw Error(ErrorCode::invalid_argument, "context without successors");
            for (const auto& s : dist.successors) {
                if (s.word >= dict_size || s.word == kBos || s.count == 0)
                    throw Error(ErrorCode::invalid_argument, "bad successor entry");
            }
            canonicalize(dist);
        }
    }
    fingerprint_ = sha256(detail::serialize_body(*this));
}

DistributionView MarkovModel::successor_distribution(std::span<const WordId> context) const
{
    if (context.size() != config_.order)
        throw Error(ErrorCode::invalid_argument, "context length " + std::to_string(context.size()) +
                                                     " != order " + std::to_string(config_.order));
    for (unsigned k = config_.order; k >= 1; --k) {
        const auto& table = tables_[k - 1];
        const auto it = table.find(context.last(k));
        if (it != table.end())
            return {it->second.successors, it->second.total, k};
    }
    std::string ids;
    for (WordId id : context)
        ids += (ids.empty() ? "" : " ") + std::to_string(id);
    throw Error(ErrorCode::unknown_context, "no stored context for (" + ids + ")");
}

ContextKey MarkovModel::start_context(WordId keyword) const
{
    ContextKey key;
    key.ids.assign(config_.order - 1, kBos);
    key.ids.push_back(keyword);
    return key;
}

std::vector<WordId> padded_ids(const TokenSentence& sentence, const Dictionary& dict, unsigned order)
{
    std::vector<WordId> seq(order, kBos);
    seq.reserve(order + sentence.tokens.size() + 1);
    for (const auto& t : sentence.tokens)
        seq.push_back(dict.id_or_unk(t));
    seq.push_back(kEos);
    return seq;
}

MarkovModel train(std::span<const TokenSentence> sentences, const ModelConfig& config,
                  const TrainOptions& options)
{
    config.validate();
    Dictionary dict = build_dictionary(sentences, config.preprocess);
    KeywordList keywords = build_keyword_list(sentences, dict, config.preprocess);

    const unsigned shards = std::clamp<unsigned>(options.threads, 1u,
                                                 static_cast<unsigned>(std::max<std::size_t>(1, sentences.size())));
    std::vector<std::vector<NgramCounts>> partial(shards, std::vector<NgramCounts>(config.order));
    const std::size_t per = (sentences.size() + shards - 1) / shards;
    auto shard_span = [&](unsigned s) {
        const std::size_t b = std::min(sentences.size(), s * per);
        const std::size_t e = std::min(sentences.size(), b + per);
        return sentences.subspan(b, e - b);
    };

    if (shards == 1) {
        count_shard(sentences, dict, config.order, partial[0]);
    } else {
        std::vector<std::jthread> workers;
        workers.reserve(shards);
        for (unsigned s = 0; s < shards; ++s)
            workers.emplace_back([&, s] { count_shard(shard_span(s), dict, config.order, partial[s]); });
    }
    for (unsigned s = 1; s < shards; ++s)
        merge_into(partial[0], std::move(partial[s]));

    std::vector<NgramTable> tables(config.order);
    for (unsigned k = 0; k < config.order; ++k) {
        tables[k].reserve(partial[0][k].size());
        for (auto& [ctx, succ] : partial[0][k]) {
            ConditionalDistribution dist;
            dist.successors.reserve(succ.size());
            for (const auto& [w, c] : succ)
                dist.successors.push_back({w, c});
            tables[k].emplace(ctx, std::move(dist));
        }
    }
    return MarkovModel(config, std::move(dict), std::move(keywords), std::move(tables));
}

} // namespace mhsteg
