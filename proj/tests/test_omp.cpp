#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "dsmvlc/detector_common.hpp"
#include "dsmvlc/vc_omp_detector.hpp"

using namespace dsmvlc;

namespace {

Block random_block(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Block b(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) b(i, j) = cplx(n(rng), n(rng));
    return b;
}

} // namespace

TEST_CASE("normalize_columns") {
    // All-zero block passes through.
    const Block zero(3, 2);
    CHECK(normalize_columns(zero) == zero);

    // Column (3, 4)^T becomes (0.6, 0.8)^T.
    Block b(2, 1);
    b(0, 0) = cplx(3, 0);
    b(1, 0) = cplx(4, 0);
    const Block n = normalize_columns(b);
    CHECK(n(0, 0).real() == Catch::Approx(0.6).epsilon(1e-12));
    CHECK(n(1, 0).real() == Catch::Approx(0.8).epsilon(1e-12));

    // Any nonzero column lands on the unit sphere.
    std::mt19937_64 rng(5);
    const Block r = normalize_columns(random_block(4, 3, rng));
    for (std::size_t j = 0; j < 3; ++j) {
        double norm_sq = 0;
        for (std::size_t i = 0; i < 4; ++i) norm_sq += std::norm(r(i, j));
        CHECK(std::sqrt(norm_sq) == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("measurement matrix") {
    // Identical orthonormal blocks give the identity.
    const Block eye = Block::identity(3);
    const Block m = measurement_matrix(eye, eye);
    CHECK(m == eye);

    // Entries of unit-column cross-correlations are bounded by 1.
    std::mt19937_64 rng(6);
    const Block a = normalize_columns(random_block(4, 4, rng));
    const Block b = normalize_columns(random_block(4, 4, rng));
    const Block cross = measurement_matrix(a, b);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(cross(i, j)) <= 1.0 + 1e-12);

    // Entry-wise against a directly computed inner product.
    const Block small_a = normalize_columns(random_block(2, 2, rng));
    const Block small_b = normalize_columns(random_block(2, 2, rng));
    const Block got = measurement_matrix(small_a, small_b);
    for (std::size_t u = 0; u < 2; ++u)
        for (std::size_t v = 0; v < 2; ++v) {
            const cplx want = std::conj(small_a(0, u)) * small_b(0, v) +
                              std::conj(small_a(1, u)) * small_b(1, v);
            CHECK(std::abs(got(u, v) - want) < 1e-12);
        }

    Block tall(3, 2), wide(2, 2);
    CHECK_THROWS_AS(measurement_matrix(tall, wide), std::invalid_argument);
}

TEST_CASE("inner product matrix") {
    const Block eye = Block::identity(3);
    const RealMatrix id = inner_product_matrix(eye, eye);
    for (std::size_t u = 0; u < 3; ++u)
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(id(u, i) == Catch::Approx(u == i ? 1.0 : 0.0).margin(1e-12));

    std::mt19937_64 rng(7);
    const Block a = normalize_columns(random_block(4, 4, rng));
    const Block b = normalize_columns(random_block(4, 4, rng));
    const RealMatrix ipm = inner_product_matrix(a, b);
    const Block cross = measurement_matrix(a, b);
    for (std::size_t u = 0; u < 4; ++u)
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(ipm(u, i) >= 0.0);
            CHECK(ipm(u, i) <= 1.0 + 1e-12);
            // (u, i) is the magnitude of the (i, u) cross-correlation: the
            // inner-product matrix is indexed (previous, current).
            CHECK(ipm(u, i) == Catch::Approx(std::abs(cross(i, u))).margin(1e-12));
        }
}

TEST_CASE("omp on an identity dictionary") {
    const Block eye = Block::identity(4);
    std::vector<cplx> obs{cplx(0, 0), cplx(0, 0), cplx(5, 0), cplx(0, 0)};
    const OmpResult r = omp_column_detect(obs, eye, 1);
    REQUIRE(r.support == std::vector<int>{2});
    REQUIRE(r.estimates.size() == 1);
    CHECK(std::abs(r.estimates[0] - cplx(5, 0)) < 1e-12);
    for (const auto& v : r.residual) CHECK(std::abs(v) < 1e-12);
    CHECK_FALSE(r.rank_deficient);
}

TEST_CASE("omp recovers a scaled atom exactly") {
    std::mt19937_64 rng(8);
    const Block dict = normalize_columns(random_block(4, 4, rng));
    const cplx alpha(1.3, -0.4);
    std::vector<cplx> obs(4);
    for (std::size_t i = 0; i < 4; ++i) obs[i] = alpha * dict(i, 2);
    const OmpResult r = omp_column_detect(obs, dict, 1);
    REQUIRE(r.support == std::vector<int>{2});
    CHECK(std::abs(r.estimates[0] - alpha) < 1e-10);
    for (const auto& v : r.residual) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("omp depth two on an identity dictionary") {
    const Block eye = Block::identity(4);
    std::vector<cplx> obs{cplx(0, 0), cplx(3, 0), cplx(0, 0), cplx(5, 0)};
    const OmpResult r = omp_column_detect(obs, eye, 2);
    REQUIRE(r.support == std::vector<int>{3, 1});
    CHECK(std::abs(r.estimates[0] - cplx(5, 0)) < 1e-12);
    CHECK(std::abs(r.estimates[1] - cplx(3, 0)) < 1e-12);
    for (const auto& v : r.residual) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("omp matches the exhaustive 1-sparse least-squares scan") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> noise(0.0, 0.05);
    int ties = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const Block dict = normalize_columns(random_block(4, 4, rng));
        const std::size_t truth = rng() % 4;
        std::vector<cplx> obs(4);
        for (std::size_t i = 0; i < 4; ++i)
            obs[i] = 2.0 * dict(i, truth) + cplx(noise(rng), noise(rng));

        // Independent oracle: try every single atom by least squares.
        int best_u = 0;
        double best_res = std::numeric_limits<double>::infinity();
        bool tie = false;
        for (std::size_t u = 0; u < 4; ++u) {
            cplx ip{};
            double nsq = 0, osq = 0;
            for (std::size_t i = 0; i < 4; ++i) {
                ip += std::conj(dict(i, u)) * obs[i];
                nsq += std::norm(dict(i, u));
                osq += std::norm(obs[i]);
            }
            const double res = osq - std::norm(ip) / nsq;
            if (std::abs(res - best_res) < 1e-12) tie = true;
            else if (res < best_res) {
                best_res = res;
                best_u = static_cast<int>(u);
                tie = false;
            }
        }
        const OmpResult r = omp_column_detect(obs, dict, 1);
        if (tie) ++ties;  // equal-residual picks may differ; both are optimal
        else CHECK(r.support[0] == best_u);
    }
    CHECK(ties < 5);
}

TEST_CASE("duplicate atoms make the normal system singular") {
    Block dict(3, 2);
    for (std::size_t i = 0; i < 3; ++i) {
        dict(i, 0) = cplx(1.0 / std::sqrt(3.0), 0);
        dict(i, 1) = dict(i, 0);
    }
    std::vector<cplx> obs{cplx(1, 0), cplx(2, 0), cplx(3, 0)};
    const OmpResult r = omp_column_detect(obs, dict, 2);
    CHECK(r.rank_deficient);
    CHECK(r.deficient_iteration == 1);
}

TEST_CASE("correct_index_vector follows the agreement rule") {
    const auto t2 = build_index_table(2);
    CHECK(correct_index_vector(std::vector<int>{1, 2}, t2) == std::vector<int>{1, 2});
    // (1,1): ties with both legal vectors at one agreement; first rank wins.
    CHECK(correct_index_vector(std::vector<int>{1, 1}, t2) == std::vector<int>{1, 2});
    CHECK(correct_index_vector(std::vector<int>{2, 2}, t2) == std::vector<int>{1, 2});

    const auto t4 = build_index_table(4);
    CHECK(correct_index_vector(std::vector<int>{1, 1, 3, 4}, t4) == std::vector<int>{1, 2, 3, 4});
    CHECK(correct_index_vector(std::vector<int>{2, 1, 4, 3}, t4) == std::vector<int>{2, 1, 4, 3});
}

TEST_CASE("correction is total and maximizes agreement") {
    const auto t = build_index_table(4);
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<int> v(4);
        for (auto& e : v) e = static_cast<int>(rng() % 4) + 1;
        const auto fixed = correct_index_vector(v, t);
        REQUIRE(t.rank_of(fixed).has_value());

        auto agreement = [&](const std::vector<int>& a) {
            int s = 0;
            for (std::size_t i = 0; i < 4; ++i) s += a[i] == v[i];
            return s;
        };
        int best = 0;
        for (const auto& cand : t.vectors) best = std::max(best, agreement(cand));
        CHECK(agreement(fixed) == best);
    }
}
