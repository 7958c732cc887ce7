#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "angiomim/core/raster.hpp"

namespace angiomim {

/// Hessian entries of an image at scale sigma.
struct HessianFields {
    ScalarField ixx;
    ScalarField ixy;
    ScalarField iyy;
};

namespace detail {

/// Half-sample symmetric reflection (… 2 1 0 | 0 1 2 …), folded so any
/// out-of-range index maps back into [0, n).
inline std::size_t reflect_index(long long i, std::size_t n) {
    const long long period = 2 * static_cast<long long>(n);
    long long m = i % period;
    if (m < 0) m += period;
    if (m >= static_cast<long long>(n)) m = period - 1 - m;
    return static_cast<std::size_t>(m);
}

/// Analytically sampled Gaussian and its first two derivatives on
/// integer offsets -radius..radius.
inline std::vector<double> gaussian_kernel(double sigma, int radius, int order) {
    std::vector<double> k(2 * radius + 1);
    const double s2 = sigma * sigma;
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * 3.14159265358979323846));
    for (int i = -radius; i <= radius; ++i) {
        const double x = static_cast<double>(i);
        const double g = norm * std::exp(-x * x / (2.0 * s2));
        double v = g;
        if (order == 1) v = -x / s2 * g;
        else if (order == 2) v = (x * x - s2) / (s2 * s2) * g;
        k[static_cast<std::size_t>(i + radius)] = v;
    }
    return k;
}

/// Separable convolution: kernel kx along columns (x = column direction),
/// ky along rows. Accumulates in double, reflects at borders.
inline ScalarField separable_convolve(const Raster<float>& img,
                                      const std::vector<double>& kx,
                                      const std::vector<double>& ky) {
    const std::size_t h = img.height, w = img.width;
    const int rx = static_cast<int>(kx.size() / 2);
    const int ry = static_cast<int>(ky.size() / 2);

    // Horizontal pass.
    std::vector<double> tmp(h * w);
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int t = -rx; t <= rx; ++t) {
                const std::size_t cc = reflect_index(static_cast<long long>(c) - t, w);
                acc += kx[static_cast<std::size_t>(t + rx)] *
                       static_cast<double>(img.at(r, cc));
            }
            tmp[r * w + c] = acc;
        }
    }

    // Vertical pass.
    ScalarField out(h, w);
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int t = -ry; t <= ry; ++t) {
                const std::size_t rr = reflect_index(static_cast<long long>(r) - t, h);
                acc += ky[static_cast<std::size_t>(t + ry)] * tmp[rr * w + c];
            }
            out.at(r, c) = static_cast<float>(acc);
        }
    }
    return out;
}

} // namespace detail

/// Scale-normalized Gaussian second derivatives (gamma = 2): each field is
/// the convolution of the image with the analytic derivative-of-Gaussian
/// kernel at scale sigma, multiplied by sigma^2. Kernels are truncated at
/// radius ceil(4*sigma); borders reflect. x is the column direction.
inline HessianFields gaussian_second_derivatives(const GrayImage& img, double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("gaussian_second_derivatives: sigma must be > 0");
    const int radius = static_cast<int>(std::ceil(4.0 * sigma));
    const double s2 = sigma * sigma;

    auto g0 = detail::gaussian_kernel(sigma, radius, 0);
    auto g1 = detail::gaussian_kernel(sigma, radius, 1);
    auto g2 = detail::gaussian_kernel(sigma, radius, 2);
    for (auto& v : g2) v *= s2; // gamma-normalization on the 2nd-order factor
    std::vector<double> g1n(g1);
    for (auto& v : g1n) v *= sigma; // split sigma^2 across the two 1st-order factors

    HessianFields out;
    out.ixx = detail::separable_convolve(img, g2, g0);
    out.ixy = detail::separable_convolve(img, g1n, g1n);
    out.iyy = detail::separable_convolve(img, g0, g2);
    return out;
}

} // namespace angiomim
