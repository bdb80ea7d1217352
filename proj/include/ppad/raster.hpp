#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ppad/errors.hpp"
#include "ppad/geometry.hpp"
#include "ppad/image.hpp"

namespace ppad {

/// Keeps the largest 4-connected component (ties resolved by scan order).
/// Returns an all-zero mask when the input is empty.
inline BinaryMask largest_component4(const BinaryMask& mask) {
    const int w = mask.width, h = mask.height;
    std::vector<int> comp(mask.data.size(), -1);
    int best_id = -1;
    long long best_area = 0;
    std::vector<std::size_t> stack;
    int next_id = 0;

    for (std::size_t start = 0; start < mask.data.size(); ++start) {
        if (!mask.data[start] || comp[start] >= 0) continue;
        long long area = 0;
        stack.push_back(start);
        comp[start] = next_id;
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            ++area;
            const int x = int(i % w), y = int(i / w);
            const int nx[4] = {x - 1, x + 1, x, x};
            const int ny[4] = {y, y, y - 1, y + 1};
            for (int k = 0; k < 4; ++k) {
                if (nx[k] < 0 || nx[k] >= w || ny[k] < 0 || ny[k] >= h) continue;
                const std::size_t j = std::size_t(ny[k]) * w + nx[k];
                if (mask.data[j] && comp[j] < 0) {
                    comp[j] = next_id;
                    stack.push_back(j);
                }
            }
        }
        if (area > best_area) {
            best_area = area;
            best_id = next_id;
        }
        ++next_id;
    }

    BinaryMask out(w, h);
    if (best_id >= 0)
        for (std::size_t i = 0; i < out.data.size(); ++i)
            out.data[i] = comp[i] == best_id ? 1 : 0;
    return out;
}

/// Even-odd scanline fill of a closed polyline, evaluated at pixel centers
/// (pixel (x, y) has center at coordinates (x, y)). A crossing at center
/// x fills the pixel on the left-closed side: spans are [x_in, x_out).
/// The result keeps only the largest 4-connected component.
inline BinaryMask rasterize_fill(const std::vector<Point2D>& curve, int width, int height) {
    if (width <= 0 || height <= 0) throw ZeroDimension("raster target needs positive dimensions");
    if (curve.size() < 3) throw EmptyInterior("curve has fewer than 3 vertices");

    BinaryMask mask(width, height);
    std::vector<double> xs;
    const std::size_t n = curve.size();
    for (int y = 0; y < height; ++y) {
        xs.clear();
        const double fy = double(y);
        for (std::size_t i = 0; i < n; ++i) {
            const Point2D& a = curve[i];
            const Point2D& b = curve[(i + 1) % n];
            if ((a.y <= fy) == (b.y <= fy)) continue; // half-open vertex rule
            xs.push_back(a.x + (fy - a.y) * (b.x - a.x) / (b.y - a.y));
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            const int x0 = std::max(0, int(std::ceil(xs[k])));
            const int x1 = std::min(width - 1, int(std::ceil(xs[k + 1])) - 1);
            for (int x = x0; x <= x1; ++x) mask.at(x, y) = 1;
        }
    }

    if (mask.empty()) throw EmptyInterior("curve encloses no pixel center");
    return largest_component4(mask);
}

} // namespace ppad
