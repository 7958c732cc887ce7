#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace angiomim {

/// Row-major 2-D raster. Pixel (r, c) lives at data[r * width + c].
template <typename T>
struct Raster {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<T> data;

    Raster() = default;
    Raster(std::size_t h, std::size_t w, T fill = T{})
        : height(h), width(w), data(h * w, fill) {
        if (h == 0 || w == 0)
            throw std::invalid_argument("Raster: dimensions must be >= 1");
    }

    std::size_t size() const { return data.size(); }
    T& at(std::size_t r, std::size_t c) { return data[r * width + c]; }
    const T& at(std::size_t r, std::size_t c) const { return data[r * width + c]; }

    bool same_shape(const Raster& o) const {
        return height == o.height && width == o.width;
    }
};

/// Intensities in [0, 1].
using GrayImage = Raster<float>;
/// Unbounded finite reals (vesselness responses, derivative fields).
using ScalarField = Raster<float>;
/// Values exactly 0 or 1.
using BinaryMask = Raster<std::uint8_t>;
/// Per-pixel probabilities in [0, 1].
using ProbMap = Raster<float>;

inline void require_same_shape(std::size_t h1, std::size_t w1,
                               std::size_t h2, std::size_t w2,
                               const std::string& what) {
    if (h1 != h2 || w1 != w2)
        throw std::invalid_argument(what + ": dimension mismatch (" +
                                    std::to_string(h1) + "x" + std::to_string(w1) + " vs " +
                                    std::to_string(h2) + "x" + std::to_string(w2) + ")");
}

inline void validate_unit_range(const Raster<float>& img, const std::string& what) {
    for (float v : img.data)
        if (!(v >= 0.0f && v <= 1.0f))
            throw std::invalid_argument(what + ": values must lie in [0,1]");
}

inline void validate_finite(const Raster<float>& f, const std::string& what) {
    for (float v : f.data)
        if (!std::isfinite(v))
            throw std::invalid_argument(what + ": values must be finite");
}

inline void validate_binary(const BinaryMask& m, const std::string& what) {
    for (std::uint8_t v : m.data)
        if (v > 1)
            throw std::invalid_argument(what + ": mask values must be 0 or 1");
}

/// Non-overlapping P x P patch partition of an H x W raster, patches in
/// row-major order: patch i = (i / cols, i % cols) covers rows
/// [pr*P, (pr+1)*P) and columns [pc*P, (pc+1)*P).
struct PatchGrid {
    std::size_t patch_size = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t count = 0; // rows * cols

    PatchGrid() = default;
    PatchGrid(std::size_t height, std::size_t width, std::size_t patch) {
        if (patch == 0)
            throw std::invalid_argument("PatchGrid: patch size must be >= 1");
        if (height % patch != 0 || width % patch != 0)
            throw std::invalid_argument(
                "PatchGrid: patch size " + std::to_string(patch) +
                " does not divide raster dimensions " + std::to_string(height) +
                "x" + std::to_string(width));
        patch_size = patch;
        rows = height / patch;
        cols = width / patch;
        count = rows * cols;
    }
};

template <typename T>
PatchGrid partition(const Raster<T>& raster, std::size_t patch) {
    return PatchGrid(raster.height, raster.width, patch);
}

/// Copy of patch i's pixels in row-major order (P*P values).
template <typename T>
std::vector<T> patch_values(const Raster<T>& raster, const PatchGrid& grid,
                            std::size_t i) {
    if (i >= grid.count)
        throw std::invalid_argument("patch_values: patch index out of range");
    const std::size_t P = grid.patch_size;
    const std::size_t r0 = (i / grid.cols) * P;
    const std::size_t c0 = (i % grid.cols) * P;
    std::vector<T> out(P * P);
    for (std::size_t r = 0; r < P; ++r)
        for (std::size_t c = 0; c < P; ++c)
            out[r * P + c] = raster.at(r0 + r, c0 + c);
    return out;
}

/// Sum of raster values over patch i, accumulated in double.
template <typename T>
double patch_sum(const Raster<T>& raster, const PatchGrid& grid, std::size_t i) {
    if (i >= grid.count)
        throw std::invalid_argument("patch_sum: patch index out of range");
    const std::size_t P = grid.patch_size;
    const std::size_t r0 = (i / grid.cols) * P;
    const std::size_t c0 = (i % grid.cols) * P;
    double s = 0.0;
    for (std::size_t r = 0; r < P; ++r)
        for (std::size_t c = 0; c < P; ++c)
            s += static_cast<double>(raster.at(r0 + r, c0 + c));
    return s;
}

/// Write P*P row-major values into patch i.
template <typename T>
void set_patch(Raster<T>& raster, const PatchGrid& grid, std::size_t i,
               const std::vector<T>& values) {
    const std::size_t P = grid.patch_size;
    if (i >= grid.count || values.size() != P * P)
        throw std::invalid_argument("set_patch: bad patch index or value count");
    const std::size_t r0 = (i / grid.cols) * P;
    const std::size_t c0 = (i % grid.cols) * P;
    for (std::size_t r = 0; r < P; ++r)
        for (std::size_t c = 0; c < P; ++c)
            raster.at(r0 + r, c0 + c) = values[r * P + c];
}

} // namespace angiomim
