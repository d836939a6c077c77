#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "dsmvlc/bits.hpp"

namespace dsmvlc {

// Activation-index vectors are permutations of {1..Nt}; entry i gives the
// active row of column i. Of the Nt! permutations only the first
// Q = 2^floor(log2(Nt!)) in lexicographic order carry data; rank r gets the
// spatial label gray(r).
struct IndexTable {
    int nt = 0;
    int q = 0;
    unsigned label_bits = 0;
    std::vector<std::vector<int>> vectors;
    std::vector<std::uint32_t> labels;

    std::optional<int> rank_of(std::span<const int> v) const {
        const auto it = rank_lookup_.find(key(v));
        if (it == rank_lookup_.end()) return std::nullopt;
        return it->second;
    }

    static std::uint64_t key(std::span<const int> v) {
        std::uint64_t k = 0;
        for (int e : v) k = (k << 4) | static_cast<std::uint64_t>(e & 0xF);
        return k;
    }

    std::unordered_map<std::uint64_t, int> rank_lookup_;
};

inline IndexTable build_index_table(int nt) {
    if (nt < 2 || nt > 8)
        throw std::invalid_argument("build_index_table: nt must be in [2, 8]");

    std::uint64_t factorial = 1;
    for (int k = 2; k <= nt; ++k) factorial *= static_cast<std::uint64_t>(k);
    unsigned label_bits = 0;
    while ((1ull << (label_bits + 1)) <= factorial) ++label_bits;

    IndexTable t;
    t.nt = nt;
    t.label_bits = label_bits;
    t.q = static_cast<int>(1u << label_bits);

    std::vector<int> perm(nt);
    std::iota(perm.begin(), perm.end(), 1);
    t.vectors.reserve(t.q);
    t.labels.reserve(t.q);
    for (int r = 0; r < t.q; ++r) {
        t.vectors.push_back(perm);
        t.labels.push_back(gray_encode(static_cast<std::uint32_t>(r)));
        t.rank_lookup_.emplace(IndexTable::key(perm), r);
        std::next_permutation(perm.begin(), perm.end());
    }
    return t;
}

} // namespace dsmvlc
