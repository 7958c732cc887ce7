#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

#include "angiomim/core/components.hpp"
#include "angiomim/core/raster.hpp"

namespace angiomim {

/// One-pixel-wide medial structure; always a subset of its source mask.
using SkeletonMask = BinaryMask;

/// Dice similarity coefficient 2|A^B| / (|A|+|B|). Two empty masks agree
/// perfectly and score 1.
inline double dsc(const BinaryMask& pred, const BinaryMask& gt) {
    require_same_shape(pred.height, pred.width, gt.height, gt.width, "dsc");
    std::size_t a = 0, b = 0, inter = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        a += pred.data[i];
        b += gt.data[i];
        inter += pred.data[i] & gt.data[i];
    }
    if (a + b == 0) return 1.0;
    return 2.0 * static_cast<double>(inter) / static_cast<double>(a + b);
}

namespace detail {

// Neighborhood in Zhang-Suen order p2..p9: N, NE, E, SE, S, SW, W, NW.
inline std::array<int, 8> zs_neighbors(const BinaryMask& m, std::size_t r, std::size_t c) {
    auto px = [&](long long rr, long long cc) -> int {
        if (rr < 0 || cc < 0 || rr >= static_cast<long long>(m.height) ||
            cc >= static_cast<long long>(m.width))
            return 0;
        return m.at(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
    };
    const long long R = static_cast<long long>(r), C = static_cast<long long>(c);
    return {px(R - 1, C), px(R - 1, C + 1), px(R, C + 1), px(R + 1, C + 1),
            px(R + 1, C), px(R + 1, C - 1), px(R, C - 1), px(R - 1, C - 1)};
}

inline bool zs_deletable(const BinaryMask& m, std::size_t r, std::size_t c, int pass) {
    const auto p = zs_neighbors(m, r, c);
    int b = 0;
    for (int v : p) b += v;
    if (b < 2 || b > 6) return false;
    int a = 0;
    for (int i = 0; i < 8; ++i)
        if (p[static_cast<std::size_t>(i)] == 0 && p[static_cast<std::size_t>((i + 1) % 8)] == 1)
            ++a;
    if (a != 1) return false;
    // p[0]=N(p2), p[2]=E(p4), p[4]=S(p6), p[6]=W(p8)
    if (pass == 0)
        return (p[0] * p[2] * p[4]) == 0 && (p[2] * p[4] * p[6]) == 0;
    return (p[0] * p[2] * p[6]) == 0 && (p[0] * p[4] * p[6]) == 0;
}

} // namespace detail

/// Morphological thinning to a one-pixel-wide skeleton, run to fixpoint.
/// Two Zhang-Suen subiterations per pass; within a subiteration, candidates
/// are re-checked against the live image in row-major order before removal.
/// The sequential update keeps every 8-connected component alive (isolated
/// pairs and dots are never removed) and never splits one, so the skeleton
/// has exactly the component count of the input. Idempotent on its output.
inline SkeletonMask skeletonize(const BinaryMask& mask) {
    validate_binary(mask, "skeletonize");
    SkeletonMask skel = mask;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t r = 0; r < skel.height; ++r) {
                for (std::size_t c = 0; c < skel.width; ++c) {
                    if (skel.at(r, c) && detail::zs_deletable(skel, r, c, pass)) {
                        skel.at(r, c) = 0;
                        changed = true;
                    }
                }
            }
        }
    }
    return skel;
}

/// Centerline Dice: harmonic mean of topology precision
/// |skel(pred)^gt|/|skel(pred)| and topology sensitivity
/// |skel(gt)^pred|/|skel(gt)|. Both masks empty scores 1; an empty
/// skeleton against a non-empty mask scores 0.
inline double cldice(const BinaryMask& pred, const BinaryMask& gt) {
    require_same_shape(pred.height, pred.width, gt.height, gt.width, "cldice");
    const SkeletonMask sp = skeletonize(pred);
    const SkeletonMask sg = skeletonize(gt);

    std::size_t sp_count = 0, sg_count = 0, sp_in_gt = 0, sg_in_pred = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        sp_count += sp.data[i];
        sg_count += sg.data[i];
        sp_in_gt += sp.data[i] & gt.data[i];
        sg_in_pred += sg.data[i] & pred.data[i];
    }
    if (sp_count == 0 && sg_count == 0) return 1.0;
    if (sp_count == 0 || sg_count == 0) return 0.0;
    const double tprec = static_cast<double>(sp_in_gt) / static_cast<double>(sp_count);
    const double tsens = static_cast<double>(sg_in_pred) / static_cast<double>(sg_count);
    if (tprec + tsens == 0.0) return 0.0;
    return 2.0 * tprec * tsens / (tprec + tsens);
}

} // namespace angiomim
