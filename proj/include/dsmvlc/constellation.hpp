#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "dsmvlc/bits.hpp"
#include "dsmvlc/matrix.hpp"
#include "dsmvlc/op_counter.hpp"

namespace dsmvlc {

// M-ary PSK point set with Gray bit labels assigned in angular order.
struct Constellation {
    int order = 0;                      // M, a power of two >= 2
    unsigned bits_per_symbol = 0;       // log2(M)
    std::vector<cplx> points;           // point k = exp(i*2*pi*k/M)
    std::vector<std::uint32_t> labels;  // labels[k] = gray(k)
};

inline Constellation build_constellation(int order) {
    if (order < 2 || (order & (order - 1)) != 0)
        throw std::invalid_argument("build_constellation: order must be a power of two >= 2");
    Constellation c;
    c.order = order;
    unsigned b = 0;
    for (int m = order; m > 1; m >>= 1) ++b;
    c.bits_per_symbol = b;
    c.points.reserve(order);
    c.labels.reserve(order);
    for (int k = 0; k < order; ++k) {
        const double phase = 2.0 * std::numbers::pi * k / order;
        cplx p(std::cos(phase), std::sin(phase));
        // Snap the axis-aligned points so BPSK/QPSK are exact.
        if (std::abs(p.real()) < 1e-15) p.real(0.0);
        if (std::abs(p.imag()) < 1e-15) p.imag(0.0);
        c.points.push_back(p);
        c.labels.push_back(gray_encode(static_cast<std::uint32_t>(k)));
    }
    return c;
}

inline cplx bits_to_symbol(const Constellation& c, std::span<const std::uint8_t> bits) {
    if (bits.size() != c.bits_per_symbol)
        throw std::invalid_argument("bits_to_symbol: wrong bit-string length");
    const std::uint32_t label = pack_bits_msb(bits);
    return c.points[gray_decode(label)];
}

struct NearestPoint {
    int index = 0;
    cplx point;
    std::uint32_t label = 0;
};

// Nearest constellation point in Euclidean distance. For unit-modulus PSK
// argmin |v - p|^2 equals argmax Re(v * conj(p)), which is what gets
// evaluated; ties resolve to the lowest point index.
inline NearestPoint nearest_symbol(const Constellation& c, cplx v, OpCounter* ctr = nullptr) {
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < c.order; ++k) {
        const cplx& p = c.points[k];
        const double score = v.real() * p.real() + v.imag() * p.imag();
        if (ctr) { ctr->mul(2); ctr->add(1); ctr->cmp(1); }
        if (score > best_score) {
            best_score = score;
            best = k;
        }
    }
    return {best, c.points[best], c.labels[best]};
}

} // namespace dsmvlc
