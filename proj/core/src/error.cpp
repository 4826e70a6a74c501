#include "mhsteg/error.hpp"

namespace mhsteg {

std::string_view code_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::ingest: return "E_INGEST";
    case ErrorCode::empty_corpus: return "E_EMPTY_CORPUS";
    case ErrorCode::invalid_argument: return "E_INVALID_ARGUMENT";
    case ErrorCode::parse: return "E_PARSE";
    case ErrorCode::unknown_context: return "E_UNKNOWN_CONTEXT";
    case ErrorCode::empty_pool: return "E_EMPTY_POOL";
    case ErrorCode::not_in_pool: return "E_NOT_IN_POOL";
    case ErrorCode::decode_mismatch: return "E_DECODE_MISMATCH";
    case ErrorCode::truncated_payload: return "E_TRUNCATED_PAYLOAD";
    case ErrorCode::capacity: return "E_CAPACITY";
    case ErrorCode::io: return "E_IO";
    }
    return "E_UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what), code_(code)
{
}

ParseError::ParseError(std::size_t offset, const std::string& detail)
    : Error(ErrorCode::parse, "byte " + std::to_string(offset) + ": " + detail), offset_(offset)
{
}

DecodeMismatchError::DecodeMismatchError(std::size_t sentence, std::size_t position,
                                         const std::string& detail)
    : Error(ErrorCode::decode_mismatch,
            "sentence " + std::to_string(sentence) + ", word " + std::to_string(position) + ": " +
                detail),
      sentence_(sentence), position_(position)
{
}

} // namespace mhsteg
