#include "support/corpora.hpp"

#include "mhsteg/mhsteg.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

using namespace mhsteg;

namespace {

std::vector<TokenSentence> desk_sentences(std::size_t n)
{
    PreprocessConfig pre;
    std::istringstream in(testing::join_lines(testing::desk_corpus_lines(n, 7)));
    return read_corpus(in, pre);
}

const MarkovModel& model()
{
    static const MarkovModel m = train(desk_sentences(20000), ModelConfig{});
    return m;
}

void BM_Normalize(benchmark::State& state)
{
    const auto lines = testing::desk_corpus_lines(1000, 1);
    PreprocessConfig pre;
    for (auto _ : state)
        for (const auto& l : lines)
            benchmark::DoNotOptimize(normalize_sentence(l, pre));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lines.size()));
}
BENCHMARK(BM_Normalize);

void BM_Train(benchmark::State& state)
{
    const auto sentences = desk_sentences(static_cast<std::size_t>(state.range(0)));
    ModelConfig config;
    for (auto _ : state)
        benchmark::DoNotOptimize(train(sentences, config));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Train)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_Serialize(benchmark::State& state)
{
    const auto& m = model();
    for (auto _ : state)
        benchmark::DoNotOptimize(serialize_model(m));
}
BENCHMARK(BM_Serialize)->Unit(benchmark::kMillisecond);

void BM_Parse(benchmark::State& state)
{
    const auto bytes = serialize_model(model());
    for (auto _ : state)
        benchmark::DoNotOptimize(parse_model(bytes));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes.size()));
}
BENCHMARK(BM_Parse)->Unit(benchmark::kMillisecond);

void BM_HuffmanBuild(benchmark::State& state)
{
    std::mt19937_64 rng(1);
    CandidatePool pool;
    for (std::int64_t i = 0; i < state.range(0); ++i)
        pool.entries.push_back({static_cast<WordId>(3 + i), 1 + rng() % 1000});
    std::sort(pool.entries.begin(), pool.entries.end(),
              [](const Successor& a, const Successor& b) { return a.count > b.count; });
    for (auto _ : state)
        benchmark::DoNotOptimize(HuffmanTree(pool));
}
BENCHMARK(BM_HuffmanBuild)->RangeMultiplier(2)->Range(2, 64);

Payload payload(std::size_t bytes)
{
    std::mt19937_64 rng(5);
    Payload p;
    p.data.resize(bytes);
    for (auto& b : p.data)
        b = static_cast<std::uint8_t>(rng());
    return p;
}

void BM_Embed(benchmark::State& state)
{
    EmbedConfig config;
    config.cps = static_cast<std::size_t>(state.range(0));
    StegoCodec codec(model(), config);
    const auto framed = frame_payload(payload(1024));
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(codec.embed(framed, ++seed));
    state.SetBytesProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_Embed)->RangeMultiplier(4)->Range(2, 32)->Unit(benchmark::kMicrosecond);

void BM_Extract(benchmark::State& state)
{
    EmbedConfig config;
    config.cps = static_cast<std::size_t>(state.range(0));
    StegoCodec codec(model(), config);
    const auto text = codec.embed(frame_payload(payload(1024)), 1).text;
    for (auto _ : state)
        benchmark::DoNotOptimize(codec.extract(text));
    state.SetBytesProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_Extract)->RangeMultiplier(4)->Range(2, 32)->Unit(benchmark::kMicrosecond);

void BM_Perplexity(benchmark::State& state)
{
    StegoCodec codec(model(), EmbedConfig{});
    const auto text = codec.embed(frame_payload(payload(1024)), 1).text;
    for (auto _ : state)
        benchmark::DoNotOptimize(perplexity(model(), text));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(text.sentences.size()));
}
BENCHMARK(BM_Perplexity)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
