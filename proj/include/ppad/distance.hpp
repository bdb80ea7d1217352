#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "ppad/errors.hpp"
#include "ppad/image.hpp"

namespace ppad {

namespace detail {

constexpr double kEdtInf = 1e20;

// 1-D squared-distance transform by lower envelope of parabolas
// (Felzenszwalb & Huttenlocher). Exact for integer-valued inputs.
inline void edt_1d(const std::vector<double>& f, std::vector<double>& d, int n,
                   std::vector<int>& v, std::vector<double>& z) {
    int k = 0;
    v[0] = 0;
    z[0] = -kEdtInf;
    z[1] = kEdtInf;
    for (int q = 1; q < n; ++q) {
        double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) /
                   (2.0 * q - 2.0 * v[k]);
        while (s <= z[k]) {
            --k;
            s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) /
                (2.0 * q - 2.0 * v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kEdtInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

} // namespace detail

/// Exact squared Euclidean distance from each in-mask pixel to the nearest
/// pixel of the mask complement; 0 outside the mask. All finite values are
/// exact integers (sums of two squares), so comparisons are exact.
inline std::vector<double> squared_distance_transform(const BinaryMask& mask) {
    const int w = mask.width, h = mask.height;
    if (w <= 0 || h <= 0) throw ZeroDimension("mask has zero dimension");

    std::vector<double> grid(mask.data.size());
    bool any_inside = false, any_outside = false;
    for (std::size_t i = 0; i < mask.data.size(); ++i) {
        grid[i] = mask.data[i] ? detail::kEdtInf : 0.0;
        (mask.data[i] ? any_inside : any_outside) = true;
    }
    if (!any_inside) throw EmptyMask("mask has no set pixel");
    if (!any_outside) throw EmptyMask("mask complement is empty; distances are unbounded");

    const int nmax = std::max(w, h);
    std::vector<double> f(nmax), d(nmax), z(nmax + 1);
    std::vector<int> v(nmax);

    for (int x = 0; x < w; ++x) { // columns
        for (int y = 0; y < h; ++y) f[y] = grid[std::size_t(y) * w + x];
        detail::edt_1d(f, d, h, v, z);
        for (int y = 0; y < h; ++y) grid[std::size_t(y) * w + x] = d[y];
    }
    for (int y = 0; y < h; ++y) { // rows
        for (int x = 0; x < w; ++x) f[x] = grid[std::size_t(y) * w + x];
        detail::edt_1d(f, d, w, v, z);
        for (int x = 0; x < w; ++x) grid[std::size_t(y) * w + x] = d[x];
    }

    for (std::size_t i = 0; i < grid.size(); ++i)
        if (!mask.data[i]) grid[i] = 0.0;
    return grid;
}

/// Euclidean distance transform: sqrt of the exact squared transform.
inline std::vector<double> distance_transform(const BinaryMask& mask) {
    std::vector<double> d = squared_distance_transform(mask);
    for (auto& v : d) v = std::sqrt(v);
    return d;
}

} // namespace ppad
