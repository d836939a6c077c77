#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "dsmvlc/channel.hpp"
#include "dsmvlc/dsm_codec.hpp"

using namespace dsmvlc;

namespace {

RoomConfig single_pair_room() {
    RoomConfig cfg;
    cfg.led_positions = {{2.0, 2.0, 3.0}};
    cfg.pd_positions = {{2.0, 2.0, 0.85}};
    return cfg;
}

} // namespace

TEST_CASE("lambertian order is 1 at a 60 degree semi-angle") {
    CHECK(lambertian_order(60.0) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("aligned LED/PD gain matches direct evaluation") {
    const RoomConfig cfg = single_pair_room();
    // phi = theta = 0, d = 2.15, w = 1:
    //   h = 2 * rho * A * (n^2 / sin^2(60deg)) / (2*pi*d^2)
    const double d = 3.0 - 0.85;
    const double lens = 1.5 * 1.5 / (std::sin(60.0 * std::numbers::pi / 180.0) *
                                     std::sin(60.0 * std::numbers::pi / 180.0));
    const double expected = 2.0 * 0.53 * 1e-4 * lens / (2.0 * std::numbers::pi * d * d);
    const double h = lambertian_gain(cfg.led_positions[0], cfg.pd_positions[0], cfg);
    CHECK(h == Catch::Approx(expected).epsilon(1e-12));
    // sin^2(60deg) = 3/4, so lens gain is exactly 3 and h ~ 1.095e-5.
    CHECK(h == Catch::Approx(1.0949e-5).epsilon(1e-3));
}

TEST_CASE("zero gain outside the field of view") {
    RoomConfig cfg = single_pair_room();
    cfg.optics.fov_deg = 20.0;
    // Horizontal offset of 2m over a 2.15m drop: incidence angle ~ 43 deg.
    cfg.pd_positions[0] = {4.0, 2.0, 0.85};
    CHECK(lambertian_gain(cfg.led_positions[0], cfg.pd_positions[0], cfg) == 0.0);
    cfg.optics.fov_deg = 60.0;
    CHECK(lambertian_gain(cfg.led_positions[0], cfg.pd_positions[0], cfg) > 0.0);
}

TEST_CASE("coincident endpoints are degenerate") {
    const RoomConfig cfg = single_pair_room();
    CHECK_THROWS_AS(lambertian_gain(cfg.led_positions[0], cfg.led_positions[0], cfg),
                    std::invalid_argument);
}

TEST_CASE("gain decreases with horizontal offset") {
    const RoomConfig cfg = single_pair_room();
    double prev = std::numeric_limits<double>::infinity();
    for (double dx = 0.0; dx <= 1.5; dx += 0.25) {
        const Vec3 pd{2.0 + dx, 2.0, 0.85};
        const double h = lambertian_gain(cfg.led_positions[0], pd, cfg);
        CHECK(h < prev);
        prev = h;
    }
}

TEST_CASE("gain scales linearly in area and responsivity") {
    RoomConfig cfg = single_pair_room();
    cfg.pd_positions[0] = {2.7, 1.6, 0.85};
    const double base = lambertian_gain(cfg.led_positions[0], cfg.pd_positions[0], cfg);
    cfg.optics.pd_area_m2 *= 2.0;
    const double doubled_area = lambertian_gain(cfg.led_positions[0], cfg.pd_positions[0], cfg);
    CHECK(doubled_area == Catch::Approx(2.0 * base).epsilon(1e-12));
    cfg.optics.responsivity *= 2.0;
    const double doubled_both = lambertian_gain(cfg.led_positions[0], cfg.pd_positions[0], cfg);
    CHECK(doubled_both == Catch::Approx(4.0 * base).epsilon(1e-12));
}

TEST_CASE("default square layouts give positive, diagonally dominant H") {
    for (int n : {2, 4}) {
        RoomLayout layout;
        layout.nt = n;
        layout.nr = n;
        const ChannelModel m = build_channel_matrix(layout.to_room_config());
        REQUIRE(m.h.rows() == static_cast<std::size_t>(n));
        REQUIRE(m.h.cols() == static_cast<std::size_t>(n));
        for (std::size_t j = 0; j < m.h.rows(); ++j)
            for (std::size_t i = 0; i < m.h.cols(); ++i) {
                CHECK(m.h(j, i) > 0.0);
                if (i != j) CHECK(m.h(j, j) > m.h(j, i));
            }
        // Matching square arrays share the geometry under the array symmetry.
        CHECK(m.h(0, 0) == Catch::Approx(m.h(1, 1)).epsilon(1e-12));
        CHECK(m.h(0, 1) == Catch::Approx(m.h(1, 0)).epsilon(1e-12));
    }
}

TEST_CASE("single LED and PD give a 1x1 matrix equal to the direct gain") {
    RoomConfig cfg = single_pair_room();
    const ChannelModel m = build_channel_matrix(cfg);
    REQUIRE(m.h.rows() == 1);
    REQUIRE(m.h.cols() == 1);
    CHECK(m.h(0, 0) == lambertian_gain(cfg.led_positions[0], cfg.pd_positions[0], cfg));
}

TEST_CASE("empty position lists rejected") {
    RoomConfig cfg;
    CHECK_THROWS_AS(build_channel_matrix(cfg), std::invalid_argument);
}

TEST_CASE("noiseless channel application is exact") {
    RoomLayout layout;
    const ChannelModel m = build_channel_matrix(layout.to_room_config());
    Block s = Block::identity(2);
    s(0, 0) = cplx(0, 1);  // a complex symbol on the diagonal
    std::mt19937_64 rng(1);
    const Block y = apply_channel(m, s, std::numeric_limits<double>::infinity(), rng);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(y(i, j) == m.h(i, j) * s(j, j));
}

TEST_CASE("fixed seed reproduces the noisy block") {
    RoomLayout layout;
    const ChannelModel m = build_channel_matrix(layout.to_room_config());
    const Block s = Block::identity(2);
    std::mt19937_64 a(42), b(42);
    const Block ya = apply_channel(m, s, 100.0, a);
    const Block yb = apply_channel(m, s, 100.0, b);
    CHECK(ya == yb);
}

TEST_CASE("noise statistics at 0 dB") {
    RoomLayout layout;
    const ChannelModel m = build_channel_matrix(layout.to_room_config());
    const Block s(2, 2);  // zero signal isolates the noise
    std::mt19937_64 rng(2024);

    const std::size_t draws = 100000;
    double sum_re = 0, sum_im = 0, sum_sq = 0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < draws / 4; ++k) {
        const Block y = apply_channel(m, s, 0.0, rng);
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t i = 0; i < 2; ++i) {
                sum_re += y(i, j).real();
                sum_im += y(i, j).imag();
                sum_sq += std::norm(y(i, j));
                ++n;
            }
    }
    const double mean_re = sum_re / n, mean_im = sum_im / n;
    const double var = sum_sq / n;  // per complex entry, sigma^2 = 1 at 0 dB
    const double comp_sigma = std::sqrt(0.5);
    CHECK(std::abs(mean_re) < 3.0 * comp_sigma / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(mean_im) < 3.0 * comp_sigma / std::sqrt(static_cast<double>(n)));
    CHECK(var == Catch::Approx(1.0).epsilon(0.02));
}

TEST_CASE("room layout loads from a key=value file") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "dsmvlc_cfg_test";
    fs::create_directories(dir);
    const fs::path path = dir / "room.cfg";
    {
        std::ofstream out(path);
        out << "# test room\n"
            << "room_x = 5\n"
            << "room_y = 5\n"
            << "room_z = 3\n"
            << "nt = 4\n"
            << "nr = 4\n"
            << "led_height = 2.9\n"
            << "pd_height = 0.8\n"
            << "spacing = 0.5\n"
            << "semi_angle = 70\n"
            << "fov = 80\n"
            << "responsivity = 0.4\n"
            << "area_cm2 = 2\n"
            << "refractive_index = 1.4\n"
            << "filter_gain = 0.9\n";
    }
    const RoomLayout layout = load_room_layout(path.string());
    CHECK(layout.room_x == 5.0);
    CHECK(layout.nt == 4);
    CHECK(layout.nr == 4);
    CHECK(layout.led_height == 2.9);
    CHECK(layout.pd_height == 0.8);
    CHECK(layout.spacing == 0.5);
    CHECK(layout.optics.semi_angle_deg == 70.0);
    CHECK(layout.optics.fov_deg == 80.0);
    CHECK(layout.optics.responsivity == 0.4);
    CHECK(layout.optics.pd_area_m2 == Catch::Approx(2e-4));
    CHECK(layout.optics.refractive_index == 1.4);
    CHECK(layout.optics.filter_gain == 0.9);

    const auto cfg = layout.to_room_config();
    CHECK(cfg.led_positions.size() == 4);
    CHECK(cfg.pd_positions.size() == 4);
    CHECK_NOTHROW(build_channel_matrix(cfg));

    {
        std::ofstream out(path);
        out << "bogus_key = 1\n";
    }
    CHECK_THROWS_AS(load_room_layout(path.string()), std::runtime_error);
    CHECK_THROWS_AS(load_room_layout((dir / "missing.cfg").string()), std::runtime_error);
}

TEST_CASE("positions outside the room are rejected") {
    RoomConfig cfg = single_pair_room();
    cfg.led_positions[0].x = 7.0;
    CHECK_THROWS_AS(build_channel_matrix(cfg), std::invalid_argument);
}
