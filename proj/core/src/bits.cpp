#include "mhsteg/bits.hpp"

#include <cassert>

namespace mhsteg {

void append_uint(BitString& out, std::uint64_t value, unsigned width)
{
    assert(width <= 64);
    for (unsigned i = width; i-- > 0;)
        out.push_back(static_cast<Bit>((value >> i) & 1u));
}

std::uint64_t read_uint(std::span<const Bit> bits, std::size_t offset, unsigned width)
{
    assert(width <= 64 && offset + width <= bits.size());
    std::uint64_t value = 0;
    for (unsigned i = 0; i < width; ++i)
        value = (value << 1) | (bits[offset + i] & 1u);
    return value;
}

void append_bytes(BitString& out, std::span<const std::uint8_t> bytes)
{
    out.reserve(out.size() + bytes.size() * 8);
    for (std::uint8_t b : bytes)
        append_uint(out, b, 8);
}

std::string to_string(std::span<const Bit> bits)
{
    std::string s;
    s.reserve(bits.size());
    for (Bit b : bits)
        s.push_back(b ? '1' : '0');
    return s;
}

BitString bits_from_string(std::string_view text)
{
    BitString bits;
    for (char c : text) {
        if (c == '0' || c == '1')
            bits.push_back(static_cast<Bit>(c - '0'));
    }
    return bits;
}

} // namespace mhsteg
