#include "corpora.hpp"

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <string_view>

namespace mhsteg::testing {

namespace {

using Words = std::vector<std::string_view>;

const Words kDeterminers = {"the", "a", "my", "this", "our", "your", "that", "his", "her", "their", "every", "some"};
const Words kPronouns = {"i", "we", "you", "they", "she", "he", "it"};
const Words kAdjectives = {
    "old",   "new",    "small",  "big",    "quiet",  "bright", "cold",   "warm",  "dark",   "green",
    "heavy", "little", "strange", "simple", "happy",  "tired",  "broken", "empty", "early",  "late",
    "red",   "soft",   "loud",   "sharp",  "narrow", "gentle", "clever", "brave", "lonely", "wooden",
    "rusty", "golden", "silent", "quick",  "slow",   "young",  "ancient", "plain", "wild",   "careful"};
const Words kNouns = {
    "day",     "house",  "dog",    "cat",    "river",  "city",   "window", "book",    "road",    "friend",
    "teacher", "garden", "letter", "table",  "car",    "song",   "morning", "night",  "door",    "child",
    "tree",    "market", "train",  "bridge", "story",  "field",  "kitchen", "doctor", "bird",    "school",
    "phone",   "coffee", "paper",  "office", "boat",   "island", "hill",   "village", "lamp",    "chair",
    "picture", "horse",  "shop",   "sister", "brother", "winter", "summer", "forest", "camera",  "dinner",
    "ticket",  "key",    "wall",   "box",    "room",   "street", "apple",  "bottle",  "machine", "student",
    "music",   "film",   "game",   "plan",   "idea",   "voice",  "name",   "bag",     "shirt",   "clock",
    "station", "church", "farm",   "beach",  "stone",  "cloud",  "flower", "engine",  "ladder",  "mirror"};
const Words kVerbs = {
    "saw",    "found",   "liked",  "opened",  "closed", "painted", "visited", "bought", "sold",    "carried",
    "watched", "cleaned", "fixed", "heard",   "wanted", "moved",   "needed",  "kept",   "lost",    "built",
    "drew",   "read",    "wrote",  "called",  "left",   "took",    "brought", "sent",   "followed", "remembered",
    "loved",  "missed",  "checked", "shared", "helped", "passed",  "crossed", "chose",  "noticed", "ignored"};
const Words kAuxVerbs = {"see",   "find", "like", "open", "close", "paint", "visit", "buy",  "sell", "carry",
                         "watch", "clean", "fix", "hear", "want",  "move",  "need",  "keep", "lose", "build"};
const Words kAux = {"will", "can", "should", "would", "might", "must", "could", "did"};
const Words kAdverbs = {"slowly",  "quickly", "again",    "today",   "yesterday", "later",  "often",
                        "quietly", "happily", "together", "outside", "inside",    "early",  "suddenly",
                        "finally", "sometimes", "carefully", "twice", "now",      "there"};
const Words kPreps = {"in", "on", "near", "with", "behind", "under", "from", "by", "across", "beside", "after", "before"};
const Words kConj = {"and", "but", "so", "because", "while"};
const Words kPunct = {".", ".", ".", "!", "?", "..."};

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return uniform() < p; }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

    // Rank r drawn with weight 1 / (r + 1)^s.
    std::size_t zipf(std::size_t n, double s = 1.1)
    {
        auto& cdf = cdfs_[{n, s}];
        if (cdf.empty()) {
            double acc = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                acc += 1.0 / std::pow(static_cast<double>(r + 1), s);
                cdf.push_back(acc);
            }
        }
        const double u = uniform() * cdf.back();
        std::size_t lo = 0;
        std::size_t hi = n - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cdf[mid] > u)
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo;
    }

    std::string_view pick(const Words& words, double s = 1.1) { return words[zipf(words.size(), s)]; }

private:
    std::mt19937_64 rng_;
    std::map<std::pair<std::size_t, double>, std::vector<double>> cdfs_;
};

std::size_t mix(std::string_view word)
{
    std::uint64_t h = 1469598103934665603ull;
    for (char c : word)
        h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
    return static_cast<std::size_t>(h);
}

class Generator {
public:
    explicit Generator(std::uint64_t seed) : s_(seed) {}

    std::string sentence()
    {
        out_.clear();
        clause();
        if (s_.chance(0.25)) {
            emit(s_.pick(kConj));
            clause();
        }
        std::string line;
        for (std::size_t i = 0; i < out_.size(); ++i) {
            if (i)
                line += ' ';
            line += out_[i];
        }
        if (!line.empty() && s_.chance(0.3))
            line[0] = static_cast<char>(line[0] - 'a' + 'A');
        line += s_.pick(kPunct);
        return line;
    }

private:
    void emit(std::string_view w) { out_.emplace_back(w); }

    // Object nouns favour a verb-specific ordering, so longer contexts carry information.
    void noun(std::string_view governor)
    {
        if (s_.chance(0.02)) {
            out_.push_back("zq" + std::to_string(s_.below(4000)));
            return;
        }
        const std::size_t shift = governor.empty() ? 0 : mix(governor) % kNouns.size();
        emit(kNouns[(s_.zipf(kNouns.size()) + shift) % kNouns.size()]);
    }

    void noun_phrase(std::string_view governor)
    {
        emit(s_.pick(kDeterminers));
        if (s_.chance(0.4))
            emit(s_.pick(kAdjectives));
        noun(governor);
    }

    void clause()
    {
        if (s_.chance(0.45))
            emit(s_.pick(kPronouns, 0.8));
        else
            noun_phrase({});
        std::string_view verb;
        if (s_.chance(0.3)) {
            emit(s_.pick(kAux));
            verb = s_.pick(kAuxVerbs);
        } else {
            verb = s_.pick(kVerbs);
        }
        emit(verb);
        if (s_.chance(0.8))
            noun_phrase(verb);
        if (s_.chance(0.3))
            emit(s_.pick(kAdverbs));
        if (s_.chance(0.35)) {
            const auto prep = s_.pick(kPreps);
            emit(prep);
            noun_phrase(prep);
        }
    }

    Sampler s_;
    std::vector<std::string> out_;
};

} // namespace

std::vector<std::string> desk_corpus_lines(std::size_t sentences, std::uint64_t seed)
{
    Generator gen(seed);
    std::vector<std::string> lines;
    lines.reserve(sentences);
    for (std::size_t i = 0; i < sentences; ++i)
        lines.push_back(gen.sentence());
    return lines;
}

std::vector<std::string> uniform_circuit_lines(std::size_t words, std::size_t repeats)
{
    // Hierholzer on the complete digraph with loops; every vertex has in = out = words.
    std::vector<std::size_t> next_edge(words, 0);
    std::vector<std::size_t> stack{0};
    std::vector<std::size_t> circuit;
    while (!stack.empty()) {
        const std::size_t v = stack.back();
        if (next_edge[v] < words) {
            stack.push_back(next_edge[v]++);
        } else {
            circuit.push_back(v);
            stack.pop_back();
        }
    }
    std::string line;
    for (auto it = circuit.rbegin(); it != circuit.rend(); ++it) {
        if (!line.empty())
            line += ' ';
        line += "w" + std::to_string(100 + *it);
    }
    return std::vector<std::string>(repeats, line);
}

std::vector<std::string> random_toy_lines(std::size_t max_sentences, std::uint64_t seed)
{
    static constexpr std::array<std::string_view, 6> kVocab = {"a", "b", "c", "d", "e", "f"};
    std::mt19937_64 rng(seed);
    const std::size_t n = 1 + rng() % max_sentences;
    const std::size_t vocab = 2 + rng() % (kVocab.size() - 1);
    std::vector<std::string> lines;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t len = 1 + rng() % 7;
        std::string line;
        for (std::size_t j = 0; j < len; ++j) {
            if (j)
                line += ' ';
            line += kVocab[rng() % vocab];
        }
        lines.push_back(line);
    }
    return lines;
}

std::string join_lines(const std::vector<std::string>& lines)
{
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

} // namespace mhsteg::testing
