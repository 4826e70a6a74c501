#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mhsteg {

enum class ErrorCode {
    ingest,
    empty_corpus,
    invalid_argument,
    parse,
    unknown_context,
    empty_pool,
    not_in_pool,
    decode_mismatch,
    truncated_payload,
    capacity,
    io,
};

/// Stable machine-greppable name, e.g. "E_DECODE_MISMATCH".
std::string_view code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Model file rejected; offset is the byte position where parsing stopped.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& detail);

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A stego word is not a member of the candidate pool the receiver rebuilt.
class DecodeMismatchError : public Error {
public:
    DecodeMismatchError(std::size_t sentence, std::size_t position, const std::string& detail);

    std::size_t sentence() const noexcept { return sentence_; }
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t sentence_;
    std::size_t position_;
};

} // namespace mhsteg
