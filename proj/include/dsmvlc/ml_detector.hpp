#pragma once

#include <limits>
#include <vector>

#include "dsmvlc/constellation.hpp"
#include "dsmvlc/detector_common.hpp"
#include "dsmvlc/dsm_codec.hpp"
#include "dsmvlc/index_table.hpp"

namespace dsmvlc {

// Exhaustive joint detection: scores all q * M^Nt candidate activation
// matrices against the previous received block and keeps the smallest
// residual. Ties resolve to the first candidate enumerated (table rank
// major, then per-column symbol labels with column 0 most significant).
inline DetectionResult ml_detect(const Block& y_cur, const Block& y_prev, const IndexTable& table,
                                 const Constellation& c) {
    const std::size_t nt = static_cast<std::size_t>(table.nt);
    DetectionResult result;
    OpCounter& ctr = result.ops;

    std::vector<cplx> symbols(nt);
    std::vector<std::uint32_t> label_code(nt, 0);
    double best = std::numeric_limits<double>::infinity();
    int best_rank = 0;
    std::vector<cplx> best_symbols(nt, c.points[0]);

    for (int rank = 0; rank < table.q; ++rank) {
        const auto& v = table.vectors[static_cast<std::size_t>(rank)];
        std::fill(label_code.begin(), label_code.end(), 0u);
        for (;;) {
            for (std::size_t i = 0; i < nt; ++i)
                symbols[i] = c.points[gray_decode(label_code[i])];
            const double m = residual_metric(y_cur, y_prev, v, symbols, &ctr);
            ctr.cmp(1);
            if (m < best) {
                best = m;
                best_rank = rank;
                best_symbols = symbols;
            }
            // Odometer over per-column label values, last column fastest.
            bool wrapped = false;
            std::size_t pos = nt;
            for (;;) {
                if (pos == 0) {
                    wrapped = true;
                    break;
                }
                --pos;
                if (++label_code[pos] < static_cast<std::uint32_t>(c.order)) break;
                label_code[pos] = 0;
            }
            if (wrapped) break;
        }
    }

    result.index_vector = table.vectors[static_cast<std::size_t>(best_rank)];
    result.symbols = std::move(best_symbols);
    result.bits = decode_block(result.index_vector, result.symbols, table, c);
    return result;
}

} // namespace dsmvlc
