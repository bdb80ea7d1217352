#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ppad/distance.hpp"
#include "ppad/errors.hpp"
#include "ppad/image.hpp"

namespace ppad {

/// Per-pixel gamma exponents: gamma(x) = 1 + D(x) / max D * w inside the
/// source mask, exactly 1 outside. w > -1 keeps every exponent positive.
struct GammaField {
    int width = 0;
    int height = 0;
    std::vector<double> gamma;

    double at(int x, int y) const { return gamma[std::size_t(y) * width + x]; }
};

inline GammaField gamma_field(const BinaryMask& mask, double w) {
    if (w <= -1.0) throw InvalidWeight("weight must satisfy w > -1");
    const std::vector<double> dist = distance_transform(mask); // throws EmptyMask

    double max_d = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (mask.data[i]) max_d = std::max(max_d, dist[i]);

    GammaField field{mask.width, mask.height,
                     std::vector<double>(mask.data.size(), 1.0)};
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (mask.data[i]) field.gamma[i] = 1.0 + dist[i] / max_d * w;
    return field;
}

/// Gamma correction out(x) = img(x)^gamma(x), with 0^g defined as 0. Pixels
/// whose exponent is exactly 1 pass through bit-identically.
inline GrayImage apply_gamma(const GrayImage& img, const GammaField& field) {
    if (img.width != field.width || img.height != field.height)
        throw DimensionMismatch("image and gamma field dimensions differ");
    GrayImage out = img;
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        const double g = field.gamma[i];
        if (g == 1.0) continue;
        const double v = out.data[i];
        out.data[i] = v == 0.0 ? 0.0 : std::pow(v, g);
    }
    return out;
}

} // namespace ppad
