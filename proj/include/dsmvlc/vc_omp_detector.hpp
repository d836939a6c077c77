#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "dsmvlc/constellation.hpp"
#include "dsmvlc/detector_common.hpp"
#include "dsmvlc/dsm_codec.hpp"
#include "dsmvlc/index_table.hpp"

namespace dsmvlc {

struct OmpResult {
    std::vector<int> support;     // selected atom indices, 0-based, pick order
    std::vector<cplx> estimates;  // least-squares coefficients aligned to support
    std::vector<cplx> residual;
    bool rank_deficient = false;
    int deficient_iteration = -1;
};

namespace detail {

// Solve the small Hermitian system (A x = b) by Gaussian elimination with
// partial pivoting; returns false when a pivot collapses.
inline bool solve_dense(std::vector<std::vector<cplx>>& a, std::vector<cplx>& b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        double best = std::abs(a[k][k]);
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(a[r][k]) > best) {
                best = std::abs(a[r][k]);
                pivot = r;
            }
        if (best < 1e-300) return false;
        std::swap(a[k], a[pivot]);
        std::swap(b[k], b[pivot]);
        for (std::size_t r = k + 1; r < n; ++r) {
            const cplx f = a[r][k] / a[k][k];
            for (std::size_t cidx = k; cidx < n; ++cidx) a[r][cidx] -= f * a[k][cidx];
            b[r] -= f * b[k];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        cplx acc = b[k];
        for (std::size_t cidx = k + 1; cidx < n; ++cidx) acc -= a[k][cidx] * b[cidx];
        b[k] = acc / a[k][k];
    }
    return true;
}

} // namespace detail

// Greedy pursuit: per iteration pick the atom with the largest absolute
// correlation against the residual (ties to the lowest index, previously
// selected atoms excluded), re-fit all selected atoms by least squares and
// update the residual. On a singular normal system the raw correlations are
// returned as estimates and the result is flagged so callers can fall back.
inline OmpResult omp_column_detect(std::span<const cplx> obs, const Block& dict, int sparsity,
                                   OpCounter* ctr = nullptr) {
    if (sparsity < 1) throw std::invalid_argument("omp_column_detect: sparsity must be >= 1");
    if (static_cast<std::size_t>(sparsity) > dict.cols())
        throw std::invalid_argument("omp_column_detect: sparsity exceeds atom count");
    if (obs.size() != dict.rows())
        throw std::invalid_argument("omp_column_detect: observation length != atom length");

    OmpResult r;
    r.residual.assign(obs.begin(), obs.end());
    std::vector<bool> used(dict.cols(), false);

    for (int e = 0; e < sparsity; ++e) {
        int pick = -1;
        double best = -1.0;
        cplx pick_corr{};
        for (std::size_t u = 0; u < dict.cols(); ++u) {
            if (used[u]) continue;
            const cplx ip = column_inner_product(dict.col(u), r.residual, ctr);
            const double mag = std::norm(ip);
            if (ctr) { ctr->mag_sq(1); ctr->cmp(1); }
            if (mag > best) {
                best = mag;
                pick = static_cast<int>(u);
                pick_corr = ip;
            }
        }
        used[static_cast<std::size_t>(pick)] = true;
        r.support.push_back(pick);

        // Normal equations over the selected atoms.
        const std::size_t k = r.support.size();
        std::vector<std::vector<cplx>> gram(k, std::vector<cplx>(k));
        std::vector<cplx> rhs(k);
        for (std::size_t a = 0; a < k; ++a) {
            const auto ca = dict.col(static_cast<std::size_t>(r.support[a]));
            for (std::size_t b = 0; b < k; ++b)
                gram[a][b] =
                    column_inner_product(ca, dict.col(static_cast<std::size_t>(r.support[b])), ctr);
            rhs[a] = column_inner_product(ca, obs, ctr);
        }
        if (!detail::solve_dense(gram, rhs)) {
            r.rank_deficient = true;
            r.deficient_iteration = e;
            r.estimates.assign(k, cplx{});
            r.estimates.back() = pick_corr;
            return r;
        }
        r.estimates = rhs;

        r.residual.assign(obs.begin(), obs.end());
        for (std::size_t a = 0; a < k; ++a) {
            const auto atom = dict.col(static_cast<std::size_t>(r.support[a]));
            for (std::size_t i = 0; i < r.residual.size(); ++i)
                r.residual[i] -= r.estimates[a] * atom[i];
            if (ctr) { ctr->complex_mul(r.residual.size()); ctr->complex_add(r.residual.size()); }
        }
    }
    return r;
}

// Legalize an estimated index vector: return the table vector with maximal
// position-wise agreement; an already-legal vector agrees with itself in
// every position and is returned unchanged, and ties go to the lowest rank.
inline std::vector<int> correct_index_vector(std::span<const int> v, const IndexTable& table,
                                             OpCounter* ctr = nullptr) {
    if (v.size() != static_cast<std::size_t>(table.nt))
        throw std::invalid_argument("correct_index_vector: wrong vector length");
    int best_rank = 0, best_agreement = -1;
    for (int r = 0; r < table.q; ++r) {
        const auto& cand = table.vectors[static_cast<std::size_t>(r)];
        int agreement = 0;
        for (std::size_t i = 0; i < v.size(); ++i) agreement += cand[i] == v[i];
        if (ctr) ctr->cmp(v.size() + 1);
        if (agreement > best_agreement) {
            best_agreement = agreement;
            best_rank = r;
        }
    }
    return table.vectors[static_cast<std::size_t>(best_rank)];
}

// Correlation-pursuit detector. The current block's columns are matched
// against the normalized previous block's columns (the unit-norm atoms of
// the sparsity-1 model relating consecutive received blocks), the assembled
// index vector is legalized, and each column's symbol comes from the
// correlation against its final atom, which for unit atoms is exactly the
// single-atom least-squares estimate.
inline DetectionResult vc_omp_detect_prenorm(const Block& y_cur, const Block& y_prev_norm,
                                             const IndexTable& table, const Constellation& c) {
    const std::size_t nt = static_cast<std::size_t>(table.nt);
    if (y_cur.cols() != nt || y_prev_norm.cols() != nt)
        throw std::invalid_argument("vc_omp_detect: block width != table nt");

    DetectionResult result;
    OpCounter& ctr = result.ops;

    const Block cur_norm = normalize_columns(y_cur, &ctr);
    // Row i holds the correlations of current column i with every atom.
    const Block corr = measurement_matrix(cur_norm, y_prev_norm, &ctr);

    std::vector<int> raw(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        std::size_t pick = 0;
        double best = -1.0;
        for (std::size_t u = 0; u < nt; ++u) {
            const double mag = std::norm(corr(i, u));
            ctr.mag_sq(1);
            ctr.cmp(1);
            if (mag > best) {
                best = mag;
                pick = u;
            }
        }
        raw[i] = static_cast<int>(pick) + 1;
    }

    result.index_vector = correct_index_vector(raw, table, &ctr);

    result.symbols.resize(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        const std::size_t u = static_cast<std::size_t>(result.index_vector[i] - 1);
        // <atom_u, cur_i> = conj(corr(i, u)); an index change by the
        // correction step lands on the corrected atom's estimate for free.
        const cplx estimate = std::conj(corr(i, u));
        result.symbols[i] = nearest_symbol(c, estimate, &ctr).point;
    }
    result.bits = decode_block(result.index_vector, result.symbols, table, c);
    return result;
}

inline DetectionResult vc_omp_detect(const Block& y_cur, const Block& y_prev,
                                     const IndexTable& table, const Constellation& c) {
    return vc_omp_detect_prenorm(y_cur, normalize_columns(y_prev), table, c);
}

} // namespace dsmvlc
