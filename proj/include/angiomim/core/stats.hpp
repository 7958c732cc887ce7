#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "angiomim/core/raster.hpp"

namespace angiomim {

/// Nearest-rank percentile: sort ascending and return the element at
/// index ceil((alpha/100) * n) - 1, clamped to [0, n-1]. alpha = 0 gives
/// the minimum, alpha = 100 the maximum.
inline float percentile(const ScalarField& field, double alpha) {
    if (field.data.empty())
        throw std::invalid_argument("percentile: field is empty");
    if (!(alpha >= 0.0 && alpha <= 100.0))
        throw std::invalid_argument("percentile: alpha must lie in [0,100]");
    std::vector<float> sorted(field.data);
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    long long idx = static_cast<long long>(std::ceil(alpha / 100.0 * n)) - 1;
    idx = std::clamp<long long>(idx, 0, static_cast<long long>(sorted.size()) - 1);
    return sorted[static_cast<std::size_t>(idx)];
}

} // namespace angiomim
