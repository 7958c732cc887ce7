#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <utility>
#include <vector>

#include "angiomim/core/components.hpp"
#include "angiomim/core/filters.hpp"
#include "angiomim/core/raster.hpp"
#include "angiomim/core/stats.hpp"

namespace angiomim {

struct VesselnessParams {
    std::vector<double> scales{1.0, 2.0, 3.0, 4.0};
    double alpha = 92.0;        // percentile for adaptive thresholding
    double frangi_beta = 0.5;   // blobness sensitivity
    double frangi_c = 0.0;      // structureness sensitivity when fixed
    bool frangi_c_auto = true;  // auto: half the max Hessian Frobenius norm per scale
    bool dark_vessels = true;   // angiogram convention: vessels darker than background

    void validate() const {
        if (scales.empty())
            throw std::invalid_argument("VesselnessParams: scales must be non-empty");
        for (double s : scales)
            if (!(s > 0.0))
                throw std::invalid_argument("VesselnessParams: scales must be > 0");
        if (!(alpha >= 0.0 && alpha <= 100.0))
            throw std::invalid_argument("VesselnessParams: alpha must lie in [0,100]");
        if (!(frangi_beta > 0.0))
            throw std::invalid_argument("VesselnessParams: frangi_beta must be > 0");
        if (!frangi_c_auto && !(frangi_c > 0.0))
            throw std::invalid_argument("VesselnessParams: fixed frangi_c must be > 0");
    }
};

/// Eigenvalues of the symmetric matrix [[ixx, ixy], [ixy, iyy]], ordered
/// |lambda1| <= |lambda2|. Equal magnitudes put the non-negative one first.
inline std::pair<double, double> eigen2x2(double ixx, double ixy, double iyy) {
    const double t = (ixx + iyy) / 2.0;
    const double d = (ixx - iyy) / 2.0;
    const double r = std::sqrt(d * d + ixy * ixy);
    const double a = t + r;
    const double b = t - r;
    const double fa = std::fabs(a), fb = std::fabs(b);
    if (fa < fb) return {a, b};
    if (fb < fa) return {b, a};
    return a >= 0.0 ? std::make_pair(a, b) : std::make_pair(b, a);
}

/// Single-scale Frangi response. With dark_vessels the image is inverted
/// first so vessels read as bright ridges; pixels whose larger-magnitude
/// eigenvalue is non-negative get 0, the rest
/// exp(-R_B^2 / 2 beta^2) * (1 - exp(-S^2 / 2 c^2)) with R_B = |l1|/|l2|
/// and S = sqrt(l1^2 + l2^2).
inline ScalarField vesselness_at_scale(const GrayImage& img, double sigma,
                                       const VesselnessParams& params) {
    params.validate();
    GrayImage work = img;
    if (params.dark_vessels)
        for (auto& v : work.data) v = 1.0f - v;

    const HessianFields hess = gaussian_second_derivatives(work, sigma);
    const std::size_t n = img.size();

    std::vector<double> l1(n), l2(n);
    double max_s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto [a, b] = eigen2x2(hess.ixx.data[i], hess.ixy.data[i], hess.iyy.data[i]);
        l1[i] = a;
        l2[i] = b;
        max_s = std::max(max_s, std::sqrt(a * a + b * b));
    }
    const double c = params.frangi_c_auto ? max_s / 2.0 : params.frangi_c;

    ScalarField out(img.height, img.width, 0.0f);
    if (c <= 0.0) return out; // flat image: every lambda2 is 0 anyway
    const double beta2 = 2.0 * params.frangi_beta * params.frangi_beta;
    const double c2 = 2.0 * c * c;
    for (std::size_t i = 0; i < n; ++i) {
        if (l2[i] >= 0.0) continue;
        const double rb = std::fabs(l1[i]) / std::fabs(l2[i]);
        const double s2 = l1[i] * l1[i] + l2[i] * l2[i];
        out.data[i] = static_cast<float>(std::exp(-rb * rb / beta2) *
                                         (1.0 - std::exp(-s2 / c2)));
    }
    return out;
}

/// Per-pixel maximum of the single-scale responses. Scales may be computed
/// in parallel; the fold runs in scale order so results are bit-identical
/// to a sequential pass.
inline ScalarField multiscale_vesselness(const GrayImage& img,
                                         const VesselnessParams& params,
                                         unsigned threads = 1) {
    params.validate();
    std::vector<ScalarField> per_scale(params.scales.size());
    if (threads > 1 && params.scales.size() > 1) {
        std::vector<std::future<ScalarField>> jobs;
        jobs.reserve(params.scales.size());
        for (double s : params.scales)
            jobs.push_back(std::async(std::launch::async, [&img, &params, s] {
                return vesselness_at_scale(img, s, params);
            }));
        for (std::size_t k = 0; k < jobs.size(); ++k) per_scale[k] = jobs[k].get();
    } else {
        for (std::size_t k = 0; k < params.scales.size(); ++k)
            per_scale[k] = vesselness_at_scale(img, params.scales[k], params);
    }

    ScalarField out = std::move(per_scale[0]);
    for (std::size_t k = 1; k < per_scale.size(); ++k)
        for (std::size_t i = 0; i < out.size(); ++i)
            out.data[i] = std::max(out.data[i], per_scale[k].data[i]);
    return out;
}

/// Coarse mask: 1 where V is strictly above its alpha-th percentile.
/// The strict inequality makes a constant field yield an empty mask.
inline BinaryMask adaptive_threshold(const ScalarField& v, double alpha) {
    validate_finite(v, "adaptive_threshold");
    const float t = percentile(v, alpha);
    BinaryMask mask(v.height, v.width, 0);
    for (std::size_t i = 0; i < v.size(); ++i)
        mask.data[i] = v.data[i] > t ? 1 : 0;
    return mask;
}

/// Keep the 8-connected component of `mask` containing argmax(V); ties in
/// the argmax break toward the lowest row-major index. If that pixel is not
/// set, fall back to the component of the set pixel nearest to it
/// (Euclidean, ties again by row-major index). Empty masks pass through.
inline BinaryMask region_grow(const BinaryMask& mask, const ScalarField& v) {
    require_same_shape(mask.height, mask.width, v.height, v.width, "region_grow");
    validate_binary(mask, "region_grow");

    bool any = false;
    for (std::uint8_t m : mask.data)
        if (m) { any = true; break; }
    if (!any) return mask;

    std::size_t seed = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v.data[i] > v.data[seed]) seed = i;

    if (!mask.data[seed]) {
        const long long sr = static_cast<long long>(seed / mask.width);
        const long long sc = static_cast<long long>(seed % mask.width);
        long long best_d2 = -1;
        std::size_t best = 0;
        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (!mask.data[i]) continue;
            const long long dr = static_cast<long long>(i / mask.width) - sr;
            const long long dc = static_cast<long long>(i % mask.width) - sc;
            const long long d2 = dr * dr + dc * dc;
            if (best_d2 < 0 || d2 < best_d2) {
                best_d2 = d2;
                best = i;
            }
        }
        seed = best;
    }

    const ComponentLabels labels = label_components(mask);
    return keep_component(mask, labels, seed);
}

/// Three-stage unsupervised anatomy extraction: multi-scale vesselness,
/// percentile thresholding, seeded region growing. Deterministic.
inline BinaryMask extract_anatomy(const GrayImage& img, const VesselnessParams& params,
                                  unsigned threads = 1,
                                  ScalarField* vesselness_out = nullptr) {
    const ScalarField v = multiscale_vesselness(img, params, threads);
    const BinaryMask coarse = adaptive_threshold(v, params.alpha);
    BinaryMask grown = region_grow(coarse, v);
    if (vesselness_out) *vesselness_out = v;
    return grown;
}

} // namespace angiomim
