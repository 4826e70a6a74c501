#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mhsteg {

/// One bit per element, values 0 or 1. Order is transmission order.
using Bit = std::uint8_t;
using BitString = std::vector<Bit>;

/// Forward-only cursor over a bit sequence.
class BitReader {
public:
    BitReader() = default;
    explicit BitReader(std::span<const Bit> bits) : bits_(bits) {}

    std::optional<Bit> next() noexcept
    {
        if (pos_ >= bits_.size())
            return std::nullopt;
        return bits_[pos_++];
    }

    bool exhausted() const noexcept { return pos_ >= bits_.size(); }
    std::size_t position() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bits_.size() - pos_; }

private:
    std::span<const Bit> bits_;
    std::size_t pos_ = 0;
};

/// Appends the low `width` bits of `value`, most-significant first.
void append_uint(BitString& out, std::uint64_t value, unsigned width);

/// Reads `width` bits starting at `offset`, most-significant first.
std::uint64_t read_uint(std::span<const Bit> bits, std::size_t offset, unsigned width);

void append_bytes(BitString& out, std::span<const std::uint8_t> bytes);

std::string to_string(std::span<const Bit> bits);

/// Parses a string of '0'/'1' characters; other characters are skipped.
BitString bits_from_string(std::string_view text);

} // namespace mhsteg
