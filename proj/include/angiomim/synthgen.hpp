#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "angiomim/core/image_io.hpp"
#include "angiomim/core/raster.hpp"
#include "angiomim/core/rng.hpp"
#include "angiomim/dataset.hpp"

namespace angiomim {

struct SynthConfig {
    std::size_t size = 64;       // square output
    std::size_t tubes_min = 1;
    std::size_t tubes_max = 2;
    double radius_min = 1.5;     // pixels
    double radius_max = 3.0;
    double contrast = 0.5;       // how much darker vessels are than background
    double noise_std = 0.02;
    double background = 0.85;
    std::uint64_t seed = 0;

    void validate() const {
        if (size < 8)
            throw std::invalid_argument("SynthConfig: size must be >= 8");
        if (tubes_min < 1 || tubes_max < tubes_min)
            throw std::invalid_argument("SynthConfig: bad tube count range");
        if (!(radius_min >= 1.0) || !(radius_max >= radius_min))
            throw std::invalid_argument("SynthConfig: radii must be >= 1");
        if (!(contrast >= 0.0 && contrast < 1.0))
            throw std::invalid_argument("SynthConfig: contrast must lie in [0,1)");
        if (!(noise_std >= 0.0))
            throw std::invalid_argument("SynthConfig: noise std must be >= 0");
        if (!(background > 0.0 && background <= 1.0))
            throw std::invalid_argument("SynthConfig: background must lie in (0,1]");
    }

    nlohmann::json to_json() const {
        return {{"size", size},           {"tubes_min", tubes_min},
                {"tubes_max", tubes_max}, {"radius_min", radius_min},
                {"radius_max", radius_max}, {"contrast", contrast},
                {"noise_std", noise_std}, {"background", background},
                {"seed", seed}};
    }
};

struct TubeInfo {
    double radius = 0.0;
    double length = 0.0; // polyline length of the sampled centerline
};

struct SynthSample {
    GrayImage image;
    BinaryMask mask; // pixels within the tube radius of any centerline
    std::vector<TubeInfo> tubes;
};

namespace detail {

struct Vec2 {
    double x, y;
};

// Chained quadratic Bezier segments with mild direction jitter, steered
// back toward the image center near the margins.
inline std::vector<Vec2> sample_centerline(const SynthConfig& cfg, Rng& rng,
                                           double radius, double& length_out) {
    const double sz = static_cast<double>(cfg.size);
    const double margin = radius + 2.0;
    const double lo = margin, hi = sz - 1.0 - margin;

    Vec2 p{lo + rng.uniform() * (hi - lo), lo + rng.uniform() * (hi - lo)};
    double angle = rng.uniform() * 2.0 * 3.14159265358979323846;
    const int segments = 2 + static_cast<int>(rng.uniform_int(3)); // 2..4
    const double seg_len = sz * (0.25 + 0.15 * rng.uniform());

    std::vector<Vec2> pts;
    pts.push_back(p);
    length_out = 0.0;
    for (int s = 0; s < segments; ++s) {
        // steer toward the center when the straight continuation would leave the frame
        const Vec2 straight{p.x + seg_len * std::cos(angle), p.y + seg_len * std::sin(angle)};
        if (straight.x < lo || straight.x > hi || straight.y < lo || straight.y > hi)
            angle = std::atan2(sz / 2.0 - p.y, sz / 2.0 - p.x) +
                    (rng.uniform() - 0.5) * 0.6;

        const double bend = (rng.uniform() - 0.5) * 0.9;
        const Vec2 p2{p.x + seg_len * std::cos(angle + bend),
                      p.y + seg_len * std::sin(angle + bend)};
        const double perp = (rng.uniform() - 0.5) * seg_len * 0.5;
        const Vec2 mid{(p.x + p2.x) / 2.0 - perp * std::sin(angle),
                       (p.y + p2.y) / 2.0 + perp * std::cos(angle)};

        const int steps = std::max(8, static_cast<int>(seg_len / 0.25));
        Vec2 prev = p;
        for (int i = 1; i <= steps; ++i) {
            const double t = static_cast<double>(i) / steps;
            const double u = 1.0 - t;
            Vec2 q{u * u * p.x + 2 * u * t * mid.x + t * t * p2.x,
                   u * u * p.y + 2 * u * t * mid.y + t * t * p2.y};
            q.x = std::clamp(q.x, lo, hi);
            q.y = std::clamp(q.y, lo, hi);
            length_out += std::hypot(q.x - prev.x, q.y - prev.y);
            pts.push_back(q);
            prev = q;
        }
        p = prev;
        angle += bend;
    }
    return pts;
}

} // namespace detail

/// Seeded synthetic angiogram: dark tubes with Gaussian cross-sections on a
/// bright background, plus optional Gaussian noise, clamped to [0,1]. The
/// ground-truth mask marks pixels within the sampled radius of a centerline.
inline SynthSample gen_tube_image(const SynthConfig& cfg, Rng& rng) {
    cfg.validate();
    const std::size_t sz = cfg.size;
    const std::size_t n_tubes =
        cfg.tubes_min + rng.uniform_int(cfg.tubes_max - cfg.tubes_min + 1);

    SynthSample out;
    out.image = GrayImage(sz, sz, static_cast<float>(cfg.background));
    out.mask = BinaryMask(sz, sz, 0);

    std::vector<double> darkening(sz * sz, 0.0);
    for (std::size_t t = 0; t < n_tubes; ++t) {
        const double radius =
            cfg.radius_min + rng.uniform() * (cfg.radius_max - cfg.radius_min);
        double length = 0.0;
        const auto pts = detail::sample_centerline(cfg, rng, radius, length);
        out.tubes.push_back({radius, length});

        const double sigma = radius / 2.0;
        const double reach = 3.0 * radius;
        for (std::size_t r = 0; r < sz; ++r) {
            for (std::size_t c = 0; c < sz; ++c) {
                const double px = static_cast<double>(c), py = static_cast<double>(r);
                double d2_min = reach * reach;
                for (const auto& q : pts) {
                    const double dx = px - q.x, dy = py - q.y;
                    const double d2 = dx * dx + dy * dy;
                    if (d2 < d2_min) d2_min = d2;
                }
                if (d2_min <= radius * radius) out.mask.at(r, c) = 1;
                const double dark =
                    cfg.contrast * std::exp(-d2_min / (2.0 * sigma * sigma));
                auto& cell = darkening[r * sz + c];
                cell = std::max(cell, dark);
            }
        }
    }

    for (std::size_t i = 0; i < sz * sz; ++i) {
        double v = cfg.background - darkening[i];
        if (cfg.noise_std > 0.0) v += rng.normal() * cfg.noise_std;
        out.image.data[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
    return out;
}

/// Write n image/mask pairs plus a JSON manifest listing relative paths and
/// the config snapshot. Per-image RNG streams derive from (seed, index), so
/// generation order never changes the output.
inline std::filesystem::path gen_dataset(const SynthConfig& cfg, std::size_t n,
                                         const std::filesystem::path& out_dir) {
    cfg.validate();
    if (n == 0)
        throw std::invalid_argument("gen_dataset: n must be >= 1");
    namespace fs = std::filesystem;
    fs::create_directories(out_dir / "images");
    fs::create_directories(out_dir / "masks");

    nlohmann::json items = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = Rng::derive(cfg.seed, i, 0x53594e54 /* stream tag */);
        const SynthSample sample = gen_tube_image(cfg, rng);
        char img_name[32], mask_name[32];
        std::snprintf(img_name, sizeof img_name, "images/img_%04zu.png", i);
        std::snprintf(mask_name, sizeof mask_name, "masks/mask_%04zu.png", i);
        save_image(sample.image, (out_dir / img_name).string());
        save_mask(sample.mask, (out_dir / mask_name).string());
        items.push_back({{"image", img_name}, {"mask", mask_name}});
    }

    const nlohmann::json manifest = {{"config", cfg.to_json()}, {"items", items}};
    const fs::path manifest_path = out_dir / "manifest.json";
    std::ofstream out(manifest_path);
    if (!out)
        throw std::runtime_error("cannot write manifest '" + manifest_path.string() + "'");
    out << manifest.dump(2) << "\n";
    return manifest_path;
}

} // namespace angiomim
