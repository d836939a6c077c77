#pragma once

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsmvlc/matrix.hpp"

namespace dsmvlc {

struct Vec3 {
    double x = 0, y = 0, z = 0;
};

struct RoomOptics {
    double semi_angle_deg = 60.0;     // LED half-power semi-angle
    double fov_deg = 60.0;            // lens field-of-view half-angle
    double responsivity = 0.53;       // A/W
    double pd_area_m2 = 1e-4;         // 1 cm^2
    double filter_gain = 1.0;
    double refractive_index = 1.5;
};

struct RoomConfig {
    double room_x = 4.0, room_y = 4.0, room_z = 3.0;
    std::vector<Vec3> led_positions;
    std::vector<Vec3> pd_positions;
    RoomOptics optics;
};

// Derived LED directivity exponent; 60 degrees gives exactly 1.
inline double lambertian_order(double semi_angle_deg) {
    const double psi = semi_angle_deg * std::numbers::pi / 180.0;
    return -std::numbers::ln2 / std::log(std::cos(psi));
}

// Line-of-sight Lambertian gain between a downward-facing LED and an
// upward-facing PD. Zero outside the lens field of view or for backward
// emission.
inline double lambertian_gain(const Vec3& led, const Vec3& pd, const RoomConfig& cfg) {
    const double dx = led.x - pd.x, dy = led.y - pd.y, dz = led.z - pd.z;
    const double d2 = dx * dx + dy * dy + dz * dz;
    if (d2 <= 0.0)
        throw std::invalid_argument("lambertian_gain: coincident LED and PD");
    const double d = std::sqrt(d2);

    // Both optical axes vertical: emission and incidence angles coincide.
    const double cos_angle = dz / d;
    if (cos_angle <= 0.0) return 0.0;

    const double fov = cfg.optics.fov_deg * std::numbers::pi / 180.0;
    if (cos_angle < std::cos(fov)) return 0.0;

    const double w = lambertian_order(cfg.optics.semi_angle_deg);
    const double lens_gain =
        cfg.optics.refractive_index * cfg.optics.refractive_index / (std::sin(fov) * std::sin(fov));
    return (w + 1.0) * cfg.optics.responsivity * cfg.optics.pd_area_m2 /
           (2.0 * std::numbers::pi * d2) * std::pow(cos_angle, w) * cfg.optics.filter_gain *
           lens_gain * cos_angle;
}

struct ChannelModel {
    RealMatrix h;  // Nr x Nt, nonnegative gains
    double lambertian_order = 0.0;
};

inline void validate_room(const RoomConfig& cfg) {
    if (cfg.led_positions.empty() || cfg.pd_positions.empty())
        throw std::invalid_argument("room config: empty LED or PD position list");
    if (cfg.optics.semi_angle_deg <= 0.0 || cfg.optics.semi_angle_deg >= 90.0)
        throw std::invalid_argument("room config: semi-angle must lie in (0, 90) degrees");
    if (cfg.optics.fov_deg <= 0.0 || cfg.optics.fov_deg > 90.0)
        throw std::invalid_argument("room config: FOV half-angle must lie in (0, 90] degrees");
    if (cfg.optics.responsivity <= 0.0 || cfg.optics.pd_area_m2 <= 0.0)
        throw std::invalid_argument("room config: responsivity and PD area must be positive");
    auto inside = [&](const Vec3& p) {
        return p.x >= 0 && p.x <= cfg.room_x && p.y >= 0 && p.y <= cfg.room_y && p.z >= 0 &&
               p.z <= cfg.room_z;
    };
    for (const auto& p : cfg.led_positions)
        if (!inside(p)) throw std::invalid_argument("room config: LED outside room");
    for (const auto& p : cfg.pd_positions)
        if (!inside(p)) throw std::invalid_argument("room config: PD outside room");
}

inline ChannelModel build_channel_matrix(const RoomConfig& cfg) {
    validate_room(cfg);
    const std::size_t nr = cfg.pd_positions.size();
    const std::size_t nt = cfg.led_positions.size();
    ChannelModel m;
    m.lambertian_order = lambertian_order(cfg.optics.semi_angle_deg);
    m.h = RealMatrix(nr, nt);
    for (std::size_t j = 0; j < nr; ++j)
        for (std::size_t i = 0; i < nt; ++i)
            m.h(j, i) = lambertian_gain(cfg.led_positions[i], cfg.pd_positions[j], cfg);
    return m;
}

// Y = H*S + N with circularly symmetric complex Gaussian noise of total
// per-entry variance 10^(-snr_db/10) (unit per-symbol transmit energy).
// snr_db = +infinity disables the noise entirely.
inline Block apply_channel(const ChannelModel& model, const Block& s, double snr_db,
                           std::mt19937_64& rng) {
    const std::size_t nr = model.h.rows(), nt = model.h.cols();
    if (s.rows() != nt) throw std::invalid_argument("apply_channel: block height != LED count");
    Block y(nr, s.cols());
    for (std::size_t j = 0; j < s.cols(); ++j)
        for (std::size_t k = 0; k < nt; ++k) {
            const cplx v = s(k, j);
            if (v == cplx{}) continue;
            for (std::size_t i = 0; i < nr; ++i) y(i, j) += model.h(i, k) * v;
        }
    if (!std::isinf(snr_db)) {
        const double sigma2 = std::pow(10.0, -snr_db / 10.0);
        std::normal_distribution<double> n(0.0, std::sqrt(sigma2 / 2.0));
        for (std::size_t j = 0; j < y.cols(); ++j)
            for (std::size_t i = 0; i < y.rows(); ++i) {
                const double re = n(rng), im = n(rng);
                y(i, j) += cplx(re, im);
            }
    }
    return y;
}

// Centered square-ish array at the given height, row-major, fixed spacing.
inline std::vector<Vec3> square_array(int count, double room_x, double room_y, double height,
                                      double spacing) {
    if (count < 1) throw std::invalid_argument("square_array: count must be >= 1");
    int cols = 1;
    while (cols * cols < count) ++cols;
    const int rows = (count + cols - 1) / cols;
    const double x0 = room_x / 2.0 - spacing * (cols - 1) / 2.0;
    const double y0 = room_y / 2.0 - spacing * (rows - 1) / 2.0;
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k)
        out.push_back({x0 + spacing * (k % cols), y0 + spacing * (k / cols), height});
    return out;
}

// Generation parameters behind a RoomConfig; this is what the key=value
// config file carries.
struct RoomLayout {
    double room_x = 4.0, room_y = 4.0, room_z = 3.0;
    int nt = 2, nr = 2;
    double led_height = 3.0;
    double pd_height = 0.85;
    double spacing = 1.0;
    RoomOptics optics;

    RoomConfig to_room_config() const {
        RoomConfig cfg;
        cfg.room_x = room_x;
        cfg.room_y = room_y;
        cfg.room_z = room_z;
        cfg.optics = optics;
        cfg.led_positions = square_array(nt, room_x, room_y, led_height, spacing);
        cfg.pd_positions = square_array(nr, room_x, room_y, pd_height, spacing);
        return cfg;
    }
};

// Plain key=value file; '#' starts a comment. Unknown keys are rejected.
inline RoomLayout load_room_layout(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    RoomLayout layout;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
        std::string stripped;
        for (char c : line)
            if (!is_space(c)) stripped.push_back(c);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = stripped.substr(0, eq);
        const std::string value = stripped.substr(eq + 1);
        double v = 0;
        try {
            v = std::stod(value);
        } catch (const std::exception&) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad number '" +
                                     value + "'");
        }
        if (key == "room_x") layout.room_x = v;
        else if (key == "room_y") layout.room_y = v;
        else if (key == "room_z") layout.room_z = v;
        else if (key == "nt") layout.nt = static_cast<int>(v);
        else if (key == "nr") layout.nr = static_cast<int>(v);
        else if (key == "led_height") layout.led_height = v;
        else if (key == "pd_height") layout.pd_height = v;
        else if (key == "spacing") layout.spacing = v;
        else if (key == "semi_angle") layout.optics.semi_angle_deg = v;
        else if (key == "fov") layout.optics.fov_deg = v;
        else if (key == "responsivity") layout.optics.responsivity = v;
        else if (key == "area_cm2") layout.optics.pd_area_m2 = v * 1e-4;
        else if (key == "refractive_index") layout.optics.refractive_index = v;
        else if (key == "filter_gain") layout.optics.filter_gain = v;
        else
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" +
                                     key + "'");
    }
    return layout;
}

} // namespace dsmvlc
