#pragma once

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dsmvlc/channel.hpp"
#include "dsmvlc/dsm_codec.hpp"
#include "dsmvlc/flops.hpp"
#include "dsmvlc/genetic_detector.hpp"
#include "dsmvlc/ml_detector.hpp"
#include "dsmvlc/rng.hpp"
#include "dsmvlc/vc_omp_detector.hpp"

namespace dsmvlc {

enum class DetectorKind { ml, vc_omp, omp_ga };

inline const char* detector_name(DetectorKind k) {
    switch (k) {
        case DetectorKind::ml: return "ml";
        case DetectorKind::vc_omp: return "vc-omp";
        case DetectorKind::omp_ga: return "omp-ga";
    }
    return "?";
}

struct SimConfig {
    RoomLayout room;
    DetectorKind detector = DetectorKind::ml;
    int mod_order = 2;
    GaParams ga;
    double snr_start_db = 80.0;
    double snr_stop_db = 120.0;
    double snr_step_db = 5.0;
    int blocks_per_point = 20000;
    std::uint64_t master_seed = 1;
    int threads = 0;  // 0 = hardware concurrency
    bool noise_disabled = false;
    std::string out_dir = ".";
};

inline void validate_sim_config(const SimConfig& cfg) {
    if (cfg.snr_step_db <= 0) throw std::invalid_argument("config: snr step must be > 0");
    if (cfg.snr_stop_db < cfg.snr_start_db)
        throw std::invalid_argument("config: snr stop must be >= start");
    if (cfg.blocks_per_point < 1)
        throw std::invalid_argument("config: blocks per point must be >= 1");
    if (cfg.room.nt < 2 || cfg.room.nt > 8)
        throw std::invalid_argument("config: nt must be in [2, 8]");
    if (cfg.room.nr < 1) throw std::invalid_argument("config: nr must be >= 1");
    if (cfg.mod_order != 2 && cfg.mod_order != 4)
        throw std::invalid_argument("config: modulation order must be 2 or 4");
    if (cfg.threads < 0) throw std::invalid_argument("config: threads must be >= 0");
    validate_ga_params(cfg.ga);
}

inline std::vector<double> snr_grid(const SimConfig& cfg) {
    std::vector<double> grid;
    const double span = cfg.snr_stop_db - cfg.snr_start_db;
    const int points = static_cast<int>(std::floor(span / cfg.snr_step_db + 1e-9)) + 1;
    grid.reserve(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) grid.push_back(cfg.snr_start_db + k * cfg.snr_step_db);
    return grid;
}

struct BerPoint {
    double snr_db = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_total = 0;
    double ber = 0;
};

struct BerCurve {
    std::vector<BerPoint> points;
    std::string config_echo;
    std::string run_id;
};

inline std::string config_echo_string(const SimConfig& cfg) {
    std::ostringstream os;
    os << "detector=" << detector_name(cfg.detector) << " nt=" << cfg.room.nt
       << " nr=" << cfg.room.nr << " mod_order=" << cfg.mod_order << " snr=" << cfg.snr_start_db
       << ":" << cfg.snr_step_db << ":" << cfg.snr_stop_db << " blocks=" << cfg.blocks_per_point
       << " seed=" << cfg.master_seed << " noise=" << (cfg.noise_disabled ? "off" : "on")
       << " ga_pop=" << cfg.ga.population_size << " ga_gen=" << cfg.ga.generations
       << " ga_pc=" << cfg.ga.crossover_prob << " ga_pm=" << cfg.ga.mutation_prob
       << " ga_tour=" << cfg.ga.tournament_size;
    return os.str();
}

inline std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

namespace detail {

// One serial differential chain at a fixed SNR. Per-block engines are
// derived from (master seed, snr index, block index), so the result does
// not depend on which worker runs the point.
inline BerPoint run_snr_point(const SimConfig& cfg, const ChannelModel& channel,
                              const IndexTable& table, const Constellation& c,
                              std::size_t snr_index, double snr_db) {
    const std::size_t n_bits = bits_per_block(table, c);
    const double effective_snr =
        cfg.noise_disabled ? std::numeric_limits<double>::infinity() : snr_db;

    Block s_prev = Block::identity(static_cast<std::size_t>(table.nt));
    auto noise_rng = make_trial_engine(cfg.master_seed, snr_index, 0, 1);
    Block y_prev = apply_channel(channel, s_prev, effective_snr, noise_rng);
    Block y_prev_norm = normalize_columns(y_prev);

    BerPoint point;
    point.snr_db = snr_db;
    Bits bits(n_bits);
    for (int blk = 1; blk <= cfg.blocks_per_point; ++blk) {
        const auto bi = static_cast<std::uint64_t>(blk);
        auto bits_rng = make_trial_engine(cfg.master_seed, snr_index, bi, 0);
        for (auto& b : bits) b = static_cast<std::uint8_t>(bits_rng() & 1ull);

        const Block x = encode_block(bits, table, c);
        Block s = differential_encode(s_prev, x);
        auto blk_noise_rng = make_trial_engine(cfg.master_seed, snr_index, bi, 1);
        Block y = apply_channel(channel, s, effective_snr, blk_noise_rng);

        DetectionResult det;
        switch (cfg.detector) {
            case DetectorKind::ml:
                det = ml_detect(y, y_prev, table, c);
                break;
            case DetectorKind::vc_omp:
                det = vc_omp_detect_prenorm(y, y_prev_norm, table, c);
                break;
            case DetectorKind::omp_ga: {
                auto ga_rng = make_trial_engine(cfg.master_seed, snr_index, bi, 2);
                det = ga_detect_prenorm(y, y_prev, y_prev_norm, table, c, cfg.ga, ga_rng);
                break;
            }
        }
        point.bit_errors += hamming_distance(bits, det.bits);
        point.bits_total += n_bits;

        s_prev = std::move(s);
        y_prev_norm = normalize_columns(y);
        y_prev = std::move(y);
    }
    point.ber = static_cast<double>(point.bit_errors) / static_cast<double>(point.bits_total);
    return point;
}

} // namespace detail

inline BerCurve run_ber_sweep(const SimConfig& cfg) {
    validate_sim_config(cfg);
    const IndexTable table = build_index_table(cfg.room.nt);
    const Constellation c = build_constellation(cfg.mod_order);
    const ChannelModel channel = build_channel_matrix(cfg.room.to_room_config());
    const auto grid = snr_grid(cfg);

    BerCurve curve;
    curve.points.resize(grid.size());
    curve.config_echo = config_echo_string(cfg);
    curve.run_id = fnv1a_hex(curve.config_echo);

    unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                       : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(grid.size()));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= grid.size()) return;
            curve.points[k] = detail::run_snr_point(cfg, channel, table, c, k, grid[k]);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return curve;
}

inline std::string ber_csv_text(const BerCurve& curve) {
    std::ostringstream os;
    os << "# " << curve.config_echo << "\n";
    os << "# run_id=" << curve.run_id << "\n";
    os << "snr_db,bit_errors,bits_total,ber\n";
    char buf[64];
    for (const auto& p : curve.points) {
        std::snprintf(buf, sizeof buf, "%.10g", p.snr_db);
        os << buf << "," << p.bit_errors << "," << p.bits_total << ",";
        std::snprintf(buf, sizeof buf, "%.17g", p.ber);
        os << buf << "\n";
    }
    return os.str();
}

// Parses text produced by ber_csv_text ('#' lines skipped).
inline std::vector<BerPoint> parse_ber_csv(const std::string& text) {
    std::istringstream in(text);
    std::vector<BerPoint> points;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        BerPoint p;
        char* end = nullptr;
        p.snr_db = std::strtod(line.c_str(), &end);
        p.bit_errors = std::strtoull(end + 1, &end, 10);
        p.bits_total = std::strtoull(end + 1, &end, 10);
        p.ber = std::strtod(end + 1, nullptr);
        points.push_back(p);
    }
    return points;
}

namespace detail {

inline std::filesystem::path unique_path(const std::filesystem::path& dir,
                                         const std::string& stem, const std::string& ext) {
    auto candidate = dir / (stem + ext);
    for (int k = 2; std::filesystem::exists(candidate); ++k)
        candidate = dir / (stem + "_" + std::to_string(k) + ext);
    return candidate;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

} // namespace detail

struct EmittedFiles {
    std::filesystem::path csv;
    std::filesystem::path plot;
};

// Writes <stem>.csv plus a self-contained plot script; existing files are
// never clobbered (a numeric suffix is appended instead).
inline EmittedFiles emit_outputs(const BerCurve& curve, const std::string& stem,
                                 const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + dir.string());

    EmittedFiles files;
    files.csv = detail::unique_path(dir, stem, ".csv");
    detail::write_file(files.csv, ber_csv_text(curve));

    std::ostringstream py;
    py << "#!/usr/bin/env python3\n"
       << "\"\"\"Render the BER curve stored next to this script.\"\"\"\n"
       << "import csv\n"
       << "import pathlib\n\n"
       << "import matplotlib\n"
       << "matplotlib.use(\"Agg\")\n"
       << "import matplotlib.pyplot as plt\n\n"
       << "csv_path = pathlib.Path(__file__).with_name(\"" << files.csv.filename().string()
       << "\")\n"
       << "snr, ber = [], []\n"
       << "with open(csv_path) as fh:\n"
       << "    for row in csv.DictReader(r for r in fh if not r.startswith(\"#\")):\n"
       << "        snr.append(float(row[\"snr_db\"]))\n"
       << "        ber.append(float(row[\"ber\"]))\n"
       << "plt.semilogy(snr, [b if b > 0 else float(\"nan\") for b in ber], \"o-\")\n"
       << "plt.xlabel(\"transmit SNR (dB)\")\n"
       << "plt.ylabel(\"BER\")\n"
       << "plt.grid(True, which=\"both\", alpha=0.4)\n"
       << "plt.title(csv_path.stem)\n"
       << "out = csv_path.with_suffix(\".png\")\n"
       << "plt.savefig(out, dpi=150, bbox_inches=\"tight\")\n"
       << "print(f\"wrote {out}\")\n";
    const std::string plot_stem = files.csv.stem().string();
    files.plot = detail::unique_path(dir, plot_stem, ".py");
    detail::write_file(files.plot, py.str());
    return files;
}

inline std::string complexity_csv_text(const std::vector<ComplexityRow>& rows) {
    std::ostringstream os;
    os << "scheme,nt,nr,m_order,flops_per_block,reduction_vs_ml_pct\n";
    char buf[32];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.4f", r.reduction_vs_ml_pct);
        os << r.scheme << "," << r.nt << "," << r.nr << "," << r.m_order << ","
           << r.flops_per_block << "," << buf << "\n";
    }
    return os.str();
}

} // namespace dsmvlc
