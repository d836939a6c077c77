#pragma once

#include <cstdint>

namespace dsmvlc {

// Floating-point operation tally.
//
// Convention (fixed here, referenced by the complexity report):
//   * complex multiply        = 4 real multiplies + 2 real additions
//   * complex add/subtract    = 2 real additions
//   * |z|^2                   = 2 real multiplies + 1 real addition
//   * real divide, sqrt       = 1 real multiply each
//   * summing n terms         = n - 1 additions (first term assigned)
//   * comparisons are tallied separately and excluded from flops()
//   * RNG draws and integer bookkeeping are not arithmetic and go uncounted
struct OpCounter {
    std::uint64_t real_multiplies = 0;
    std::uint64_t real_additions = 0;
    std::uint64_t comparisons = 0;

    void mul(std::uint64_t n = 1) { real_multiplies += n; }
    void add(std::uint64_t n = 1) { real_additions += n; }
    void cmp(std::uint64_t n = 1) { comparisons += n; }

    void complex_mul(std::uint64_t n = 1) { mul(4 * n); add(2 * n); }
    void complex_add(std::uint64_t n = 1) { add(2 * n); }
    void mag_sq(std::uint64_t n = 1) { mul(2 * n); add(n); }

    std::uint64_t flops() const { return real_multiplies + real_additions; }

    OpCounter& operator+=(const OpCounter& o) {
        real_multiplies += o.real_multiplies;
        real_additions += o.real_additions;
        comparisons += o.comparisons;
        return *this;
    }

    friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

} // namespace dsmvlc
