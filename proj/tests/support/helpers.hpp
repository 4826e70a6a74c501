#pragma once

#include "corpora.hpp"
#include "mhsteg/mhsteg.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace mhsteg::testing {

inline std::vector<TokenSentence> sentences_of(const std::vector<std::string>& lines, const PreprocessConfig& pre)
{
    std::istringstream in(join_lines(lines));
    return read_corpus(in, pre);
}

inline MarkovModel model_of(const std::vector<std::string>& lines, unsigned order, std::uint64_t min_count,
                            std::size_t max_tokens = 64, std::size_t keywords = 100)
{
    ModelConfig config;
    config.order = order;
    config.preprocess.min_count = min_count;
    config.preprocess.max_sentence_tokens = max_tokens;
    config.preprocess.keyword_count = keywords;
    return train(sentences_of(lines, config.preprocess), config);
}

/// Order-2, min_count-5 model over 20000 generated sentences. Built once.
inline const MarkovModel& desk_model()
{
    static const MarkovModel model = model_of(desk_corpus_lines(20000, 7), 2, 5);
    return model;
}

inline Payload random_payload(std::mt19937_64& rng, std::size_t min_bytes, std::size_t max_bytes)
{
    Payload p;
    p.data.resize(min_bytes + rng() % (max_bytes - min_bytes + 1));
    for (auto& b : p.data)
        b = static_cast<std::uint8_t>(rng());
    return p;
}

inline BitString random_bits(std::mt19937_64& rng, std::size_t n)
{
    BitString bits(n);
    for (auto& b : bits)
        b = static_cast<Bit>(rng() & 1u);
    return bits;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("mhsteg-" + tag + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& bytes)
{
    std::ofstream out(p, std::ios::binary);
    out << bytes;
}

inline std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace mhsteg::testing
