#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "dsmvlc/constellation.hpp"
#include "dsmvlc/detector_common.hpp"
#include "dsmvlc/dsm_codec.hpp"
#include "dsmvlc/index_table.hpp"
#include "dsmvlc/vc_omp_detector.hpp"

namespace dsmvlc {

struct GaParams {
    int population_size = 0;     // 0 = match the legal index-vector count q
    int generations = 3;
    double crossover_prob = 0.8;
    double mutation_prob = 0.05;
    int tournament_size = 2;
};

inline void validate_ga_params(const GaParams& p) {
    if (p.population_size < 0) throw std::invalid_argument("ga params: negative population size");
    if (p.population_size == 1) throw std::invalid_argument("ga params: population size must be >= 2");
    if (p.generations < 1) throw std::invalid_argument("ga params: generations must be >= 1");
    if (p.crossover_prob < 0 || p.crossover_prob > 1 || p.mutation_prob < 0 || p.mutation_prob > 1)
        throw std::invalid_argument("ga params: probabilities must lie in [0, 1]");
    if (p.tournament_size < 2) throw std::invalid_argument("ga params: tournament size must be >= 2");
}

// A chromosome is the spatial label bit string packed into an integer;
// every value in [0, q) decodes to a legal index vector, so crossover and
// mutation can never produce an illegal individual.
using Chromosome = std::uint32_t;

inline const std::vector<int>& chromosome_vector(Chromosome ch, const IndexTable& table) {
    return table.vectors[gray_decode(ch)];
}

// Seed the population from the sorted inner-product matrix: the rank-r row
// pairs each current column with its (r+1)-st best-correlated previous
// column, is legalized, and enters as a chromosome. Remaining slots are
// uniform random legal chromosomes.
inline std::vector<Chromosome> init_population(const RealMatrix& ipm, const IndexTable& table,
                                               const GaParams& params, std::mt19937_64& rng,
                                               OpCounter* ctr = nullptr) {
    const std::size_t nt = static_cast<std::size_t>(table.nt);
    if (ipm.rows() != nt || ipm.cols() != nt)
        throw std::invalid_argument("init_population: inner-product matrix must be nt x nt");
    const std::size_t pop_size =
        params.population_size > 0 ? static_cast<std::size_t>(params.population_size)
                                   : static_cast<std::size_t>(table.q);

    // Per column, previous-column indices sorted by descending correlation.
    std::vector<std::vector<int>> order(nt, std::vector<int>(nt));
    for (std::size_t i = 0; i < nt; ++i) {
        auto& ord = order[i];
        std::iota(ord.begin(), ord.end(), 0);
        std::sort(ord.begin(), ord.end(), [&](int a, int b) {
            if (ipm(a, i) != ipm(b, i)) return ipm(a, i) > ipm(b, i);
            return a < b;
        });
        if (ctr) ctr->cmp(nt * nt);  // sort comparisons, order-of-magnitude tally
    }

    std::vector<Chromosome> pop;
    pop.reserve(pop_size);
    std::vector<int> candidate(nt);
    for (std::size_t r = 0; r < nt && pop.size() < pop_size; ++r) {
        for (std::size_t i = 0; i < nt; ++i) candidate[i] = order[i][r] + 1;
        const auto legal = correct_index_vector(candidate, table, ctr);
        pop.push_back(table.labels[static_cast<std::size_t>(*table.rank_of(legal))]);
    }
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(table.q - 1));
    while (pop.size() < pop_size) pop.push_back(pick(rng));
    return pop;
}

// Per-column symbol decision against the activated previous column, scanning
// the full constellation on the raw (un-normalized) blocks.
inline std::vector<cplx> estimate_symbols_with_cost(std::span<const int> f, const Block& y_cur,
                                                    const Block& y_prev, const Constellation& c,
                                                    double& cost_out, OpCounter* ctr = nullptr) {
    const std::size_t nr = y_cur.rows(), nt = y_cur.cols();
    std::vector<cplx> symbols(nt);
    double total = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
        const std::size_t u = static_cast<std::size_t>(f[i] - 1);
        double best = std::numeric_limits<double>::infinity();
        int best_k = 0;
        for (int k = 0; k < c.order; ++k) {
            const cplx s = c.points[static_cast<std::size_t>(k)];
            double cost = 0.0;
            for (std::size_t j = 0; j < nr; ++j) {
                const double term = std::norm(y_cur(j, i) - y_prev(j, u) * s);
                cost = (j == 0) ? term : cost + term;
            }
            if (ctr) {
                ctr->complex_mul(nr);
                ctr->complex_add(nr);
                ctr->mag_sq(nr);
                if (nr > 1) ctr->add(nr - 1);
                ctr->cmp(1);
            }
            if (cost < best) {
                best = cost;
                best_k = k;
            }
        }
        symbols[i] = c.points[static_cast<std::size_t>(best_k)];
        total = (i == 0) ? best : total + best;
    }
    if (ctr && nt > 1) ctr->add(nt - 1);
    cost_out = total;
    return symbols;
}

inline std::vector<cplx> estimate_symbols(std::span<const int> f, const Block& y_cur,
                                          const Block& y_prev, const Constellation& c,
                                          OpCounter* ctr = nullptr) {
    double cost = 0.0;
    return estimate_symbols_with_cost(f, y_cur, y_prev, c, cost, ctr);
}

// Residual energy of (f, symbols); identical to the exhaustive detector's
// scoring of the activation matrix assembled from the same pair.
inline double fitness(std::span<const int> f, std::span<const cplx> symbols, const Block& y_cur,
                      const Block& y_prev, OpCounter* ctr = nullptr) {
    return residual_metric(y_cur, y_prev, f, symbols, ctr);
}

// Tournament selection: repeatedly draw tournament_size individuals
// uniformly (with replacement) and copy the one with the lowest fitness,
// ties to the lowest population index.
inline void tournament_select(std::vector<Chromosome>& pop, std::vector<double>& fitnesses,
                              const GaParams& params, std::mt19937_64& rng,
                              OpCounter* ctr = nullptr) {
    const std::size_t n = pop.size();
    if (n == 0) throw std::invalid_argument("tournament_select: empty population");
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<Chromosome> next(n);
    std::vector<double> next_fit(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t winner = pick(rng);
        for (int t = 1; t < params.tournament_size; ++t) {
            const std::size_t cand = pick(rng);
            if (ctr) ctr->cmp(1);
            if (fitnesses[cand] < fitnesses[winner] ||
                (fitnesses[cand] == fitnesses[winner] && cand < winner))
                winner = cand;
        }
        next[k] = pop[winner];
        next_fit[k] = fitnesses[winner];
    }
    pop.swap(next);
    fitnesses.swap(next_fit);
}

// Pairwise recombination: with probability crossover_prob the pair swaps
// tails at a cut drawn from [2, b-1] (1-based bit positions, msb first);
// chromosomes shorter than 3 bits have no valid cut and pass through.
// Otherwise the pair is replaced by two copies of its fitter member.
inline void crossover(std::vector<Chromosome>& pop, std::vector<double>& fitnesses,
                      unsigned chromosome_bits, const GaParams& params, std::mt19937_64& rng,
                      OpCounter* ctr = nullptr) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::size_t k = 0; k + 1 < pop.size(); k += 2) {
        const bool cross = coin(rng) < params.crossover_prob;
        if (cross) {
            if (chromosome_bits < 3) continue;
            std::uniform_int_distribution<unsigned> cut(2, chromosome_bits - 1);
            const unsigned point = cut(rng);
            const Chromosome tail_mask = (1u << (chromosome_bits - point + 1)) - 1u;
            const Chromosome a = pop[k], b = pop[k + 1];
            pop[k] = (a & ~tail_mask) | (b & tail_mask);
            pop[k + 1] = (b & ~tail_mask) | (a & tail_mask);
        } else {
            if (ctr) ctr->cmp(1);
            const std::size_t better = fitnesses[k + 1] < fitnesses[k] ? k + 1 : k;
            pop[k] = pop[better];
            pop[k + 1] = pop[better];
            fitnesses[k] = fitnesses[better];
            fitnesses[k + 1] = fitnesses[better];
        }
    }
}

// Independent per-bit variation: with probability mutation_prob the bit is
// replaced by a uniform random bit (so the effective flip rate is half the
// mutation probability).
inline void mutate(std::vector<Chromosome>& pop, unsigned chromosome_bits, const GaParams& params,
                   std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (auto& ch : pop)
        for (unsigned bit = 0; bit < chromosome_bits; ++bit) {
            if (coin(rng) >= params.mutation_prob) continue;
            const Chromosome mask = 1u << (chromosome_bits - 1 - bit);
            if (rng() & 1ull) ch |= mask;
            else ch &= ~mask;
        }
}

// Correlation-seeded genetic search over the legal index vectors. Each
// generation is scored (per-column symbol scan; fitness is the sum of the
// per-column minima), then bred through tournament selection, crossover or
// replication, and mutation; the best individual ever scored is the
// decision. With a fixed engine the whole run is deterministic.
inline DetectionResult ga_detect_prenorm(const Block& y_cur, const Block& y_prev,
                                         const Block& y_prev_norm, const IndexTable& table,
                                         const Constellation& c, const GaParams& params,
                                         std::mt19937_64& rng,
                                         std::vector<double>* best_fitness_trace = nullptr) {
    validate_ga_params(params);
    const std::size_t nt = static_cast<std::size_t>(table.nt);
    if (y_cur.cols() != nt || y_prev.cols() != nt)
        throw std::invalid_argument("ga_detect: block width != table nt");

    DetectionResult result;
    OpCounter& ctr = result.ops;

    const Block cur_norm = normalize_columns(y_cur, &ctr);
    const RealMatrix ipm = inner_product_matrix(cur_norm, y_prev_norm, &ctr);
    std::vector<Chromosome> pop = init_population(ipm, table, params, rng, &ctr);
    std::vector<double> fitnesses(pop.size());

    double best_m = std::numeric_limits<double>::infinity();
    Chromosome best_ch = pop[0];
    std::vector<cplx> best_symbols(nt, c.points[0]);

    std::vector<cplx> symbols;
    for (int g = 0; g < params.generations; ++g) {
        for (std::size_t k = 0; k < pop.size(); ++k) {
            const auto& f = chromosome_vector(pop[k], table);
            double m = 0.0;
            symbols = estimate_symbols_with_cost(f, y_cur, y_prev, c, m, &ctr);
            fitnesses[k] = m;
            ctr.cmp(1);
            if (m < best_m) {
                best_m = m;
                best_ch = pop[k];
                best_symbols = symbols;
            }
        }
        if (best_fitness_trace) best_fitness_trace->push_back(best_m);
        tournament_select(pop, fitnesses, params, rng, &ctr);
        crossover(pop, fitnesses, table.label_bits, params, rng, &ctr);
        mutate(pop, table.label_bits, params, rng);
    }

    result.index_vector = chromosome_vector(best_ch, table);
    result.symbols = std::move(best_symbols);
    result.bits = decode_block(result.index_vector, result.symbols, table, c);
    return result;
}

inline DetectionResult ga_detect(const Block& y_cur, const Block& y_prev, const IndexTable& table,
                                 const Constellation& c, const GaParams& params,
                                 std::mt19937_64& rng,
                                 std::vector<double>* best_fitness_trace = nullptr) {
    return ga_detect_prenorm(y_cur, y_prev, normalize_columns(y_prev), table, c, params, rng,
                             best_fitness_trace);
}

} // namespace dsmvlc
