#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsmvlc {

// A bit block as individual 0/1 bytes, msb-first within each field.
using Bits = std::vector<std::uint8_t>;

inline std::uint32_t gray_encode(std::uint32_t n) { return n ^ (n >> 1); }

inline std::uint32_t gray_decode(std::uint32_t g) {
    std::uint32_t n = g;
    for (std::uint32_t s = 1; s < 32; s <<= 1) n ^= n >> s;
    return n;
}

inline void append_bits_msb(Bits& out, std::uint32_t value, unsigned width) {
    for (unsigned k = width; k-- > 0;)
        out.push_back(static_cast<std::uint8_t>((value >> k) & 1u));
}

inline std::uint32_t pack_bits_msb(std::span<const std::uint8_t> bits) {
    std::uint32_t v = 0;
    for (auto b : bits) {
        if (b > 1) throw std::invalid_argument("pack_bits_msb: non-binary digit");
        v = (v << 1) | b;
    }
    return v;
}

inline Bits bits_from_string(const std::string& s) {
    Bits out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '0') out.push_back(0);
        else if (c == '1') out.push_back(1);
        else throw std::invalid_argument("bits_from_string: expected only '0'/'1'");
    }
    return out;
}

inline std::string bits_to_string(std::span<const std::uint8_t> bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

inline std::size_t hamming_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

} // namespace dsmvlc
