#include "mhsteg/eval.hpp"

#include "mhsteg/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

namespace mhsteg {

namespace {

struct MeanStd {
    double mean = 0.0;
    double std_dev = 0.0;
};

// Population standard deviation.
MeanStd mean_std(std::span<const double> values)
{
    MeanStd out;
    if (values.empty())
        return out;
    double sum = 0.0;
    for (double v : values)
        sum += v;
    out.mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values)
        sq += (v - out.mean) * (v - out.mean);
    out.std_dev = std::sqrt(sq / static_cast<double>(values.size()));
    return out;
}

PerplexityReport aggregate(std::span<const SentenceScore> scores, PerplexityMode mode)
{
    PerplexityReport report;
    report.mode = mode;
    report.sentence_count = scores.size();
    std::vector<double> values;
    values.reserve(scores.size());
    double total_log = 0.0;
    for (const auto& s : scores) {
        report.transitions += s.transitions;
        report.floored_transitions += s.floored;
        total_log += s.log2_prob;
        if (mode == PerplexityMode::per_word)
            values.push_back(std::exp2(-s.log2_prob / static_cast<double>(s.transitions)));
        else
            values.push_back(std::exp2(-s.log2_prob));
    }
    const auto ms = mean_std(values);
    report.mean = ms.mean;
    report.std_dev = ms.std_dev;
    if (!scores.empty()) {
        report.pooled = mode == PerplexityMode::per_word
                            ? std::exp2(-total_log / static_cast<double>(report.transitions))
                            : std::exp2(-total_log / static_cast<double>(scores.size()));
    }
    return report;
}

} // namespace

std::string_view mode_name(PerplexityMode mode) noexcept
{
    return mode == PerplexityMode::per_word ? "per-word" : "per-sentence";
}

SentenceScore score_sentence(const MarkovModel& model, std::span<const std::string> words)
{
    const auto& dict = model.dictionary();
    const unsigned order = model.order();
    const double floor_log = -std::log2(static_cast<double>(std::max<std::uint64_t>(1, dict.training_tokens())));

    std::vector<WordId> context(order, kBos);
    SentenceScore score;
    auto score_one = [&](WordId word) {
        bool found = false;
        for (unsigned k = order; k >= 1 && !found; --k) {
            const auto& table = model.table(k);
            const auto it = table.find(std::span<const WordId>(context).last(k));
            if (it == table.end())
                continue;
            for (const auto& s : it->second.successors) {
                if (s.word == word) {
                    score.log2_prob += std::log2(static_cast<double>(s.count)) -
                                       std::log2(static_cast<double>(it->second.total));
                    found = true;
                    break;
                }
            }
        }
        if (!found) {
            score.log2_prob += floor_log;
            ++score.floored;
        }
        ++score.transitions;
        std::shift_left(context.begin(), context.end(), 1);
        context.back() = word;
    };

    for (const auto& w : words)
        score_one(dict.id_or_unk(w));
    score_one(kEos);
    return score;
}

PerplexityReport perplexity(const MarkovModel& model, std::span<const TokenSentence> sentences,
                            PerplexityMode mode)
{
    std::vector<SentenceScore> scores;
    scores.reserve(sentences.size());
    for (const auto& s : sentences)
        scores.push_back(score_sentence(model, s.tokens));
    return aggregate(scores, mode);
}

PerplexityReport perplexity(const MarkovModel& model, const StegoText& text, PerplexityMode mode)
{
    std::vector<SentenceScore> scores;
    scores.reserve(text.sentences.size());
    for (const auto& s : text.sentences)
        scores.push_back(score_sentence(model, s));
    return aggregate(scores, mode);
}

EmbedRateReport embedding_rate(double k, double mean_len, double mean_letters)
{
    if (!(mean_len >= 1.0) || !(mean_letters > 0.0) || !(k >= 0.0) || !std::isfinite(k) ||
        !std::isfinite(mean_len) || !std::isfinite(mean_letters))
        throw Error(ErrorCode::invalid_argument, "embedding_rate needs mean_len >= 1, mean_letters > 0, k >= 0");
    return {k, mean_len, mean_letters, (mean_len - 1.0) * k / (8.0 * mean_len * mean_letters)};
}

BpwStats bpw_stats(std::span<const EmbedTrace> traces)
{
    if (traces.empty())
        throw Error(ErrorCode::invalid_argument, "bpw_stats needs at least one trace");
    BpwStats stats;
    std::vector<double> per_sentence;
    for (const auto& trace : traces) {
        std::size_t sentence_bits = 0;
        std::size_t sentence_steps = 0;
        std::uint32_t current = 0;
        auto flush = [&] {
            if (sentence_steps > 0)
                per_sentence.push_back(static_cast<double>(sentence_bits) / static_cast<double>(sentence_steps));
            sentence_bits = sentence_steps = 0;
        };
        for (const auto& step : trace.steps) {
            if (!step.payload_active)
                continue;
            if (step.sentence != current) {
                flush();
                current = step.sentence;
            }
            sentence_bits += step.code_length;
            ++sentence_steps;
            stats.bits += step.code_length;
            ++stats.steps;
        }
        flush();
    }
    if (stats.steps > 0)
        stats.mean = static_cast<double>(stats.bits) / static_cast<double>(stats.steps);
    stats.std_dev = mean_std(per_sentence).std_dev;
    return stats;
}

void write_csv_header(std::ostream& out)
{
    out << "cps,bpw_mean,bpw_std,ppl_mean,ppl_std\n";
}

void write_csv_row(std::ostream& out, const EvalRow& row)
{
    const auto flags = out.flags();
    out << row.cps << ',' << std::fixed << std::setprecision(6) << row.bpw.mean << ',' << row.bpw.std_dev << ','
        << row.ppl.mean << ',' << row.ppl.std_dev << '\n';
    out.flags(flags);
}

void write_key_values(std::ostream& out, const EvalRow& row)
{
    const auto flags = out.flags();
    out << std::fixed << std::setprecision(6);
    if (row.cps)
        out << "cps=" << row.cps << '\n' << "bpw_mean=" << row.bpw.mean << '\n' << "bpw_std=" << row.bpw.std_dev << '\n';
    out << "mode=" << mode_name(row.ppl.mode) << '\n'
        << "sentences=" << row.ppl.sentence_count << '\n'
        << "ppl_mean=" << row.ppl.mean << '\n'
        << "ppl_std=" << row.ppl.std_dev << '\n'
        << "ppl_pooled=" << row.ppl.pooled << '\n'
        << "floored_transitions=" << row.ppl.floored_transitions << '\n';
    out.flags(flags);
}

} // namespace mhsteg
