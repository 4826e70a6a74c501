#include "cli.hpp"

#include "mhsteg/mhsteg.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace mhsteg::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FingerprintMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw Error(ErrorCode::io, "read failed for '" + path + "'");
    return std::move(ss).str();
}

void write_file(const std::string& path, std::string_view bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::io, "cannot create '" + path + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error(ErrorCode::io, "write failed for '" + path + "'");
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value)
{
    try {
        return parse_unsigned(value, key);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

// A config-file key bound to a command-line option. The file value applies
// only when the flag was not given.
struct Setting {
    std::vector<std::string> keys;
    CLI::Option* option = nullptr;
    std::function<void(const std::string&)> apply;
};

const std::set<std::string>& known_config_keys()
{
    static const std::set<std::string> keys = {
        "min_count", "keyword_count", "keywords", "max_sentence_tokens", "order", "threads",
        "cps", "seed", "max_words", "max_sentence_words", "scheme", "mode", "format",
    };
    return keys;
}

void apply_config(const std::string& path, const std::vector<Setting>& settings)
{
    std::map<std::string, std::string> values;
    {
        std::ifstream in(path);
        if (!in)
            throw Error(ErrorCode::io, "cannot open config '" + path + "'");
        try {
            values = read_key_values(in);
        } catch (const Error& e) {
            throw UsageError(path + ": " + e.what());
        }
    }
    for (const auto& [key, value] : values) {
        if (!known_config_keys().contains(key))
            throw UsageError(path + ": unknown config key '" + key + "'");
        for (const auto& s : settings) {
            if (std::find(s.keys.begin(), s.keys.end(), key) != s.keys.end() && s.option->count() == 0)
                s.apply(value);
        }
    }
}

CodingScheme parse_scheme(const std::string& s)
{
    if (s == "huffman")
        return CodingScheme::huffman;
    if (s == "fixed")
        return CodingScheme::fixed_length;
    throw UsageError("scheme must be 'huffman' or 'fixed', got '" + s + "'");
}

PerplexityMode parse_mode(const std::string& s)
{
    if (s == "per-word")
        return PerplexityMode::per_word;
    if (s == "per-sentence")
        return PerplexityMode::per_sentence;
    throw UsageError("mode must be 'per-word' or 'per-sentence', got '" + s + "'");
}

std::vector<TokenSentence> load_corpus(const std::string& path, const PreprocessConfig& config)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::io, "cannot open corpus '" + path + "'");
    return read_corpus(in, config);
}

MarkovModel load_model(const std::string& path)
{
    return parse_model(read_file(path));
}

struct Options {
    std::string config_path;

    std::string corpus;
    std::string model;
    std::string out;
    std::string text;
    std::string payload_file;
    std::string payload_hex;
    std::string expect_fingerprint;

    unsigned order = 2;
    std::uint64_t min_count = 5;
    std::uint64_t keyword_count = 100;
    std::uint64_t max_sentence_tokens = 64;
    unsigned threads = 1;

    std::uint64_t cps = 0;
    std::uint64_t seed = 0;
    bool seed_from_config = false;
    std::uint64_t max_words = 32;
    std::string scheme = "huffman";
    std::string mode = "per-word";
    std::string format = "text";
};

PreprocessConfig preprocess_from(const Options& o)
{
    PreprocessConfig p;
    p.min_count = o.min_count;
    p.keyword_count = o.keyword_count;
    p.max_sentence_tokens = o.max_sentence_tokens;
    try {
        p.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    return p;
}

EmbedConfig embed_config_from(const Options& o, bool seeded)
{
    EmbedConfig c;
    c.cps = o.cps;
    c.max_sentence_words = o.max_words;
    c.scheme = parse_scheme(o.scheme);
    if (seeded)
        c.keyword_seed = o.seed;
    try {
        c.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    return c;
}

int cmd_train(const Options& o, std::ostream& out)
{
    ModelConfig config;
    config.order = o.order;
    config.preprocess = preprocess_from(o);
    if (config.order < 1)
        throw UsageError("--order must be >= 1");
    const auto sentences = load_corpus(o.corpus, config.preprocess);
    const auto model = train(sentences, config, TrainOptions{o.threads});
    write_file(o.out, serialize_model(model));
    out << "fingerprint=" << to_hex(model.fingerprint()) << '\n'
        << "sentences=" << sentences.size() << '\n'
        << "dict_size=" << model.dictionary().size() << '\n'
        << "keywords=" << model.keywords().ids.size() << '\n';
    return kSuccess;
}

int cmd_embed(const Options& o, bool seeded, std::ostream& out)
{
    const auto config = embed_config_from(o, seeded);
    Payload payload;
    if (!o.payload_file.empty()) {
        const auto bytes = read_file(o.payload_file);
        payload.data.assign(bytes.begin(), bytes.end());
    } else {
        try {
            payload = payload_from_hex(o.payload_hex);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }
    const auto model = load_model(o.model);
    const auto framed = frame_payload(payload);
    const auto result = embed(model, framed, config);
    write_file(o.out, format_stego_text(result.text));

    const auto bpw = bpw_stats(std::span(&result.trace, 1));
    std::size_t words = 0;
    for (const auto& s : result.text.sentences)
        words += s.size();
    out << "fingerprint=" << to_hex(model.fingerprint()) << '\n'
        << "payload_bits=" << payload.bit_length() << '\n'
        << "framed_bits=" << framed.size() << '\n'
        << "sentences=" << result.text.sentences.size() << '\n'
        << "words=" << words << '\n'
        << std::fixed << std::setprecision(6)
        << "bpw_mean=" << bpw.mean << '\n'
        << "bpw_std=" << bpw.std_dev << '\n';
    return kSuccess;
}

int cmd_extract(const Options& o, std::ostream& out)
{
    const auto config = embed_config_from(o, false);
    const auto model = load_model(o.model);
    const std::string fp = to_hex(model.fingerprint());
    if (!o.expect_fingerprint.empty() && o.expect_fingerprint != fp)
        throw FingerprintMismatch("model fingerprint " + fp + " != expected " + o.expect_fingerprint);

    const auto text = parse_stego_text(read_file(o.text));
    Payload payload;
    try {
        payload = extract(model, text, config);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::decode_mismatch || e.code() == ErrorCode::truncated_payload)
            throw Error(e.code(), std::string(e.what()) + " (model fingerprint " + fp + ")");
        throw;
    }
    write_file(o.out, std::string_view(reinterpret_cast<const char*>(payload.data.data()), payload.data.size()));
    out << "fingerprint=" << fp << '\n' << "payload_bytes=" << payload.data.size() << '\n';
    return kSuccess;
}

int cmd_eval(const Options& o, bool with_cps, std::ostream& out)
{
    const auto mode = parse_mode(o.mode);
    if (o.format != "text" && o.format != "kv" && o.format != "csv")
        throw UsageError("format must be text, kv or csv");
    if (o.format == "csv" && !with_cps)
        throw UsageError("--format csv needs --cps");
    const auto model = load_model(o.model);
    const auto text = parse_stego_text(read_file(o.text));

    EvalRow row;
    row.ppl = perplexity(model, text, mode);
    if (with_cps) {
        const auto config = embed_config_from(o, false);
        row.cps = config.cps;
        const auto trace = trace_text(model, text, config);
        row.bpw = bpw_stats(std::span(&trace, 1));
    }

    if (o.format == "csv") {
        write_csv_header(out);
        write_csv_row(out, row);
    } else if (o.format == "kv") {
        write_key_values(out, row);
    } else {
        out << std::fixed << std::setprecision(4) << "perplexity (" << mode_name(mode) << "): " << row.ppl.mean
            << " +/- " << row.ppl.std_dev << " over " << row.ppl.sentence_count << " sentences\n";
        if (row.ppl.floored_transitions)
            out << "warning: " << row.ppl.floored_transitions << " unseen transitions scored at the floor\n";
        if (with_cps)
            out << "bits per word (cps " << row.cps << "): " << row.bpw.mean << " +/- " << row.bpw.std_dev << '\n';
    }
    return kSuccess;
}

int cmd_stats(const Options& o, std::ostream& out)
{
    const auto sentences = load_corpus(o.corpus, preprocess_from(o));
    const auto stats = corpus_stats(sentences);
    out << "sentences=" << stats.sentence_count << '\n'
        << "total_tokens=" << stats.total_tokens << '\n'
        << "unique_words=" << stats.unique_words << '\n'
        << std::fixed << std::setprecision(4)
        << "mean_sentence_length=" << stats.mean_sentence_length << '\n'
        << "mean_letters_per_word=" << stats.mean_letters_per_word << '\n';
    return kSuccess;
}

int report(std::ostream& err, std::string_view code, std::string_view detail, int exit_code)
{
    err << code << ": " << detail << '\n';
    return exit_code;
}

} // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Hide bytes in Markov-generated sentences with per-step Huffman coding", "mhsteg"};
    app.require_subcommand(1);
    Options o;

    auto bind_config = [&o](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "key=value file; flags override it");
    };
    auto u64_setting = [](std::vector<std::string> keys, CLI::Option* opt, std::uint64_t& target) {
        return Setting{keys, opt, [&target, name = keys.front()](const std::string& v) { target = to_unsigned(name, v); }};
    };
    auto unsigned_setting = [](std::vector<std::string> keys, CLI::Option* opt, unsigned& target) {
        return Setting{keys, opt, [&target, name = keys.front()](const std::string& v) {
                           target = static_cast<unsigned>(to_unsigned(name, v));
                       }};
    };
    auto string_setting = [](std::vector<std::string> keys, CLI::Option* opt, std::string& target) {
        return Setting{keys, opt, [&target](const std::string& v) { target = v; }};
    };

    std::map<CLI::App*, std::vector<Setting>> settings;

    auto* train_cmd = app.add_subcommand("train", "Train a model from a one-sentence-per-line corpus");
    train_cmd->add_option("--corpus", o.corpus, "UTF-8 corpus file")->required();
    train_cmd->add_option("--out", o.out, "model file to write")->required();
    settings[train_cmd] = {
        unsigned_setting({"order"}, train_cmd->add_option("--order", o.order, "Markov order")->check(CLI::PositiveNumber), o.order),
        u64_setting({"min_count"}, train_cmd->add_option("--min-count", o.min_count, "drop words seen fewer times"), o.min_count),
        u64_setting({"keyword_count", "keywords"}, train_cmd->add_option("--keywords", o.keyword_count, "keyword list size"), o.keyword_count),
        u64_setting({"max_sentence_tokens"}, train_cmd->add_option("--max-sentence-tokens", o.max_sentence_tokens, "truncate longer lines"), o.max_sentence_tokens),
        unsigned_setting({"threads"}, train_cmd->add_option("--threads", o.threads, "counting threads")->check(CLI::PositiveNumber), o.threads),
    };
    bind_config(train_cmd);

    auto* embed_cmd = app.add_subcommand("embed", "Hide a payload in generated sentences");
    embed_cmd->add_option("--model", o.model, "model file")->required();
    embed_cmd->add_option("--out", o.out, "stego text file to write")->required();
    auto* payload_file = embed_cmd->add_option("--payload", o.payload_file, "payload file (raw bytes)");
    auto* payload_hex = embed_cmd->add_option("--payload-hex", o.payload_hex, "payload as hex");
    payload_file->excludes(payload_hex);
    auto* embed_cps = embed_cmd->add_option("--cps", o.cps, "candidate pool size (>= 2)");
    auto* seed_opt = embed_cmd->add_option("--seed", o.seed, "keyword selection seed");
    settings[embed_cmd] = {
        u64_setting({"cps"}, embed_cps, o.cps),
        Setting{{"seed"}, seed_opt, [&o](const std::string& v) {
                    o.seed = to_unsigned("seed", v);
                    o.seed_from_config = true;
                }},
        u64_setting({"max_words", "max_sentence_words"}, embed_cmd->add_option("--max-words", o.max_words, "words per sentence cap"), o.max_words),
        string_setting({"scheme"}, embed_cmd->add_option("--scheme", o.scheme, "huffman or fixed"), o.scheme),
    };
    bind_config(embed_cmd);

    auto* extract_cmd = app.add_subcommand("extract", "Recover a payload from stego text");
    extract_cmd->add_option("--model", o.model, "model file")->required();
    extract_cmd->add_option("--text", o.text, "stego text file")->required();
    extract_cmd->add_option("--out", o.out, "payload file to write")->required();
    extract_cmd->add_option("--fingerprint", o.expect_fingerprint, "expected model fingerprint (hex)");
    auto* extract_cps = extract_cmd->add_option("--cps", o.cps, "candidate pool size used to embed");
    settings[extract_cmd] = {
        u64_setting({"cps"}, extract_cps, o.cps),
        u64_setting({"max_words", "max_sentence_words"}, extract_cmd->add_option("--max-words", o.max_words, "words per sentence cap"), o.max_words),
        string_setting({"scheme"}, extract_cmd->add_option("--scheme", o.scheme, "huffman or fixed"), o.scheme),
    };
    bind_config(extract_cmd);

    auto* eval_cmd = app.add_subcommand("eval", "Perplexity (and bits per word with --cps) of a text");
    eval_cmd->add_option("--model", o.model, "model file")->required();
    eval_cmd->add_option("--text", o.text, "text file, one sentence per line")->required();
    auto* eval_cps = eval_cmd->add_option("--cps", o.cps, "also report bits per word at this pool size");
    settings[eval_cmd] = {
        string_setting({"mode"}, eval_cmd->add_option("--mode", o.mode, "per-word or per-sentence"), o.mode),
        string_setting({"format"}, eval_cmd->add_option("--format", o.format, "text, kv or csv"), o.format),
        u64_setting({"cps"}, eval_cps, o.cps),
        u64_setting({"max_words", "max_sentence_words"}, eval_cmd->add_option("--max-words", o.max_words, "words per sentence cap"), o.max_words),
        string_setting({"scheme"}, eval_cmd->add_option("--scheme", o.scheme, "huffman or fixed"), o.scheme),
    };
    bind_config(eval_cmd);

    auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics after normalization");
    stats_cmd->add_option("--corpus", o.corpus, "UTF-8 corpus file")->required();
    settings[stats_cmd] = {
        u64_setting({"max_sentence_tokens"}, stats_cmd->add_option("--max-sentence-tokens", o.max_sentence_tokens, "truncate longer lines"), o.max_sentence_tokens),
    };
    bind_config(stats_cmd);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args)
        argv.push_back(a.c_str());

    CLI::App* active = nullptr;
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        active = app.get_subcommands().front();
        if (!o.config_path.empty())
            apply_config(o.config_path, settings[active]);

        if (active == train_cmd)
            return cmd_train(o, out);
        if (active == embed_cmd) {
            if (o.payload_file.empty() == (payload_hex->count() == 0))
                throw UsageError("embed needs exactly one of --payload or --payload-hex");
            if (o.cps == 0)
                throw UsageError("embed needs --cps");
            return cmd_embed(o, seed_opt->count() > 0 || o.seed_from_config, out);
        }
        if (active == extract_cmd) {
            if (o.cps == 0)
                throw UsageError("extract needs --cps");
            return cmd_extract(o, out);
        }
        if (active == eval_cmd)
            return cmd_eval(o, o.cps != 0, out);
        return cmd_stats(o, out);
    } catch (const CLI::CallForHelp&) {
        out << (active ? active->help() : app.help());
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        report(err, "E_USAGE", e.what(), kUsage);
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kUsage;
    } catch (const UsageError& e) {
        report(err, "E_USAGE", e.what(), kUsage);
        err << (active ? active->help() : app.help());
        return kUsage;
    } catch (const FingerprintMismatch& e) {
        return report(err, "E_FINGERPRINT_MISMATCH", e.what(), kDecodeError);
    } catch (const Error& e) {
        switch (e.code()) {
        case ErrorCode::decode_mismatch:
        case ErrorCode::truncated_payload:
            return report(err, code_name(e.code()), e.what(), kDecodeError);
        case ErrorCode::invalid_argument:
            return report(err, code_name(e.code()), e.what(), kUsage);
        default:
            return report(err, code_name(e.code()), e.what(), kDataError);
        }
    } catch (const std::exception& e) {
        return report(err, "E_INTERNAL", e.what(), kDataError);
    }
}

} // namespace mhsteg::cli
