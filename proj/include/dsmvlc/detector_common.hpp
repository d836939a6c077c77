#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "dsmvlc/bits.hpp"
#include "dsmvlc/matrix.hpp"
#include "dsmvlc/op_counter.hpp"

namespace dsmvlc {

struct DetectionResult {
    std::vector<int> index_vector;  // active row per column, entries in 1..Nt
    std::vector<cplx> symbols;      // one constellation point per column
    Bits bits;
    OpCounter ops;

    std::uint64_t op_count() const { return ops.flops(); }
};

// Each column scaled to unit Euclidean norm; zero columns pass through.
inline Block normalize_columns(const Block& y, OpCounter* ctr = nullptr) {
    Block out(y.rows(), y.cols());
    for (std::size_t j = 0; j < y.cols(); ++j) {
        double norm_sq = 0.0;
        for (std::size_t i = 0; i < y.rows(); ++i) norm_sq += std::norm(y(i, j));
        if (ctr) {
            ctr->mag_sq(y.rows());
            if (y.rows() > 1) ctr->add(y.rows() - 1);
            ctr->cmp(1);
        }
        if (norm_sq == 0.0) continue;
        const double inv = 1.0 / std::sqrt(norm_sq);
        if (ctr) ctr->mul(2);  // sqrt + reciprocal
        for (std::size_t i = 0; i < y.rows(); ++i) out(i, j) = y(i, j) * inv;
        if (ctr) ctr->mul(2 * y.rows());
    }
    return out;
}

inline cplx column_inner_product(std::span<const cplx> a, std::span<const cplx> b,
                                 OpCounter* ctr = nullptr) {
    cplx acc = std::conj(a[0]) * b[0];
    for (std::size_t i = 1; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    if (ctr) {
        ctr->complex_mul(a.size());
        if (a.size() > 1) ctr->complex_add(a.size() - 1);
    }
    return acc;
}

// Cross-correlation of two column-normalized blocks: entry (a, b) is the
// inner product of column a of y_cur_n with column b of y_prev_n. Row i
// therefore lists how the current column i correlates with every previous
// column, which is all the sparsity-1 pursuit needs.
inline Block measurement_matrix(const Block& y_cur_n, const Block& y_prev_n,
                                OpCounter* ctr = nullptr) {
    if (y_cur_n.rows() != y_prev_n.rows())
        throw std::invalid_argument("measurement_matrix: row-count mismatch");
    Block out(y_cur_n.cols(), y_prev_n.cols());
    for (std::size_t a = 0; a < y_cur_n.cols(); ++a)
        for (std::size_t b = 0; b < y_prev_n.cols(); ++b)
            out(a, b) = column_inner_product(y_cur_n.col(a), y_prev_n.col(b), ctr);
    return out;
}

// Entry (u, i) = |<current column i, previous column u>| on normalized
// blocks, so every entry sits in [0, 1].
inline RealMatrix inner_product_matrix(const Block& y_cur_n, const Block& y_prev_n,
                                       OpCounter* ctr = nullptr) {
    if (y_cur_n.rows() != y_prev_n.rows())
        throw std::invalid_argument("inner_product_matrix: row-count mismatch");
    RealMatrix out(y_prev_n.cols(), y_cur_n.cols());
    for (std::size_t i = 0; i < y_cur_n.cols(); ++i)
        for (std::size_t u = 0; u < y_prev_n.cols(); ++u) {
            const cplx ip = column_inner_product(y_cur_n.col(i), y_prev_n.col(u), ctr);
            out(u, i) = std::abs(ip);
            if (ctr) { ctr->mag_sq(1); ctr->mul(1); }  // |z|^2 then sqrt
        }
    return out;
}

// Residual energy of a candidate (index vector, symbols) pair:
//   sum_i sum_j |y_cur(j,i) - y_prev(j, v[i]) * s_i|^2
// Every detector scores candidates through this one routine.
inline double residual_metric(const Block& y_cur, const Block& y_prev, std::span<const int> v,
                              std::span<const cplx> symbols, OpCounter* ctr = nullptr) {
    const std::size_t nr = y_cur.rows(), nt = y_cur.cols();
    double total = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
        const std::size_t u = static_cast<std::size_t>(v[i] - 1);
        const cplx s = symbols[i];
        double col_cost = 0.0;
        for (std::size_t j = 0; j < nr; ++j) {
            const cplx diff = y_cur(j, i) - y_prev(j, u) * s;
            const double term = std::norm(diff);
            col_cost = (j == 0) ? term : col_cost + term;
        }
        total = (i == 0) ? col_cost : total + col_cost;
    }
    if (ctr) {
        ctr->complex_mul(nr * nt);
        ctr->complex_add(nr * nt);
        ctr->mag_sq(nr * nt);
        ctr->add(nt * (nr - 1) + (nt - 1));
    }
    return total;
}

} // namespace dsmvlc
