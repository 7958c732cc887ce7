#pragma once

#include <cstdint>
#include <vector>

#include "angiomim/core/raster.hpp"

namespace angiomim {

/// 8-connected component labels: 0 for background, 1..n_labels for
/// foreground components in order of first (row-major) appearance.
struct ComponentLabels {
    Raster<std::uint32_t> labels;
    std::uint32_t n_labels = 0;
};

inline ComponentLabels label_components(const BinaryMask& mask) {
    const std::size_t h = mask.height, w = mask.width;
    ComponentLabels out{Raster<std::uint32_t>(h, w, 0u), 0};
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < mask.size(); ++start) {
        if (!mask.data[start] || out.labels.data[start]) continue;
        const std::uint32_t label = ++out.n_labels;
        stack.push_back(start);
        out.labels.data[start] = label;
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            const long long r = static_cast<long long>(p / w);
            const long long c = static_cast<long long>(p % w);
            for (long long dr = -1; dr <= 1; ++dr) {
                for (long long dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const long long nr = r + dr, nc = c + dc;
                    if (nr < 0 || nc < 0 || nr >= static_cast<long long>(h) ||
                        nc >= static_cast<long long>(w))
                        continue;
                    const std::size_t q = static_cast<std::size_t>(nr) * w +
                                          static_cast<std::size_t>(nc);
                    if (mask.data[q] && !out.labels.data[q]) {
                        out.labels.data[q] = label;
                        stack.push_back(q);
                    }
                }
            }
        }
    }
    return out;
}

/// Keep only the component containing pixel `seed_index`; everything else
/// becomes background. Seed must be a foreground pixel.
inline BinaryMask keep_component(const BinaryMask& mask, const ComponentLabels& labels,
                                 std::size_t seed_index) {
    const std::uint32_t keep = labels.labels.data[seed_index];
    BinaryMask out(mask.height, mask.width, 0);
    for (std::size_t i = 0; i < mask.size(); ++i)
        out.data[i] = labels.labels.data[i] == keep && keep != 0 ? 1 : 0;
    return out;
}

} // namespace angiomim
