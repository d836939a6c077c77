#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "dsmvlc/bits.hpp"
#include "dsmvlc/constellation.hpp"
#include "dsmvlc/index_table.hpp"
#include "dsmvlc/matrix.hpp"

namespace dsmvlc {

inline std::size_t bits_per_block(const IndexTable& t, const Constellation& c) {
    return static_cast<std::size_t>(t.nt) * c.bits_per_symbol + t.label_bits;
}

// Bit block -> activation matrix: the leading spatial bits pick the index
// vector, the rest map to one PSK symbol per column. Column i carries its
// symbol at row f[i].
inline Block encode_block(std::span<const std::uint8_t> bits, const IndexTable& t,
                          const Constellation& c) {
    if (bits.size() != bits_per_block(t, c))
        throw std::invalid_argument("encode_block: wrong bit count");
    const std::uint32_t spatial = pack_bits_msb(bits.subspan(0, t.label_bits));
    const int rank = static_cast<int>(gray_decode(spatial));
    const auto& f = t.vectors[static_cast<std::size_t>(rank)];

    Block x(static_cast<std::size_t>(t.nt), static_cast<std::size_t>(t.nt));
    std::size_t pos = t.label_bits;
    for (int i = 0; i < t.nt; ++i) {
        const cplx p = bits_to_symbol(c, bits.subspan(pos, c.bits_per_symbol));
        pos += c.bits_per_symbol;
        x(static_cast<std::size_t>(f[static_cast<std::size_t>(i)] - 1),
          static_cast<std::size_t>(i)) = p;
    }
    return x;
}

inline Block differential_encode(const Block& s_prev, const Block& x) {
    if (!s_prev.same_shape(x) || s_prev.rows() != s_prev.cols())
        throw std::invalid_argument("differential_encode: dimension mismatch");
    return matmul(s_prev, x);
}

// Inverse of encode_block given a detected index vector and symbols.
// Symbols are quantized to their labels, so exact constellation points (the
// only legal inputs) round-trip bit-for-bit.
inline Bits decode_block(std::span<const int> v, std::span<const cplx> symbols,
                         const IndexTable& t, const Constellation& c) {
    const auto rank = t.rank_of(v);
    if (!rank) throw std::invalid_argument("decode_block: illegal index vector");
    if (symbols.size() != static_cast<std::size_t>(t.nt))
        throw std::invalid_argument("decode_block: wrong symbol count");
    Bits out;
    out.reserve(bits_per_block(t, c));
    append_bits_msb(out, t.labels[static_cast<std::size_t>(*rank)], t.label_bits);
    for (const cplx& s : symbols)
        append_bits_msb(out, nearest_symbol(c, s).label, c.bits_per_symbol);
    return out;
}

// Exactly one nonzero per row and per column, every nonzero on the unit
// circle (within tol). Holds for every X and for products of such blocks.
inline bool is_generalized_permutation(const Block& b, double tol = 1e-9) {
    if (b.rows() != b.cols()) return false;
    const std::size_t n = b.rows();
    std::vector<int> row_count(n, 0), col_count(n, 0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            const double mag = std::abs(b(i, j));
            if (mag <= tol) continue;
            if (std::abs(mag - 1.0) > tol) return false;
            ++row_count[i];
            ++col_count[j];
        }
    for (std::size_t k = 0; k < n; ++k)
        if (row_count[k] != 1 || col_count[k] != 1) return false;
    return true;
}

} // namespace dsmvlc
