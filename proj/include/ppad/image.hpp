#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "ppad/errors.hpp"

namespace ppad {

/// H x W grid of gray intensities in [0, 1], row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0)
        : width(w), height(h), data(std::size_t(w) * std::size_t(h), fill) {
        if (w <= 0 || h <= 0) throw ZeroDimension("image dimensions must be positive");
    }

    double& at(int x, int y) { return data[std::size_t(y) * width + x]; }
    double at(int x, int y) const { return data[std::size_t(y) * width + x]; }
    std::size_t size() const { return data.size(); }
};

/// Row-major binary mask; values are exactly 0 or 1.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(std::size_t(w) * std::size_t(h), fill) {
        if (w <= 0 || h <= 0) throw ZeroDimension("mask dimensions must be positive");
    }

    std::uint8_t& at(int x, int y) { return data[std::size_t(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return data[std::size_t(y) * width + x]; }

    long long count() const {
        long long n = 0;
        for (auto v : data) n += v;
        return n;
    }
    bool empty() const { return count() == 0; }

    bool same_shape(const BinaryMask& o) const { return width == o.width && height == o.height; }
};

inline bool same_shape(const GrayImage& a, const BinaryMask& b) {
    return a.width == b.width && a.height == b.height;
}

/// Bilinear resample with pixel-center alignment. Values stay in [0, 1]
/// because every output is a convex combination of inputs.
inline GrayImage resize_bilinear(const GrayImage& img, int target_w, int target_h) {
    if (img.width <= 0 || img.height <= 0 || target_w <= 0 || target_h <= 0)
        throw ZeroDimension("resize requires positive dimensions");
    if (img.width == target_w && img.height == target_h) return img;

    GrayImage out(target_w, target_h);
    const double sx = double(img.width) / target_w;
    const double sy = double(img.height) / target_h;
    for (int y = 0; y < target_h; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, double(img.height - 1));
        const int y0 = int(fy);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < target_w; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, double(img.width - 1));
            const int x0 = int(fx);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double wx = fx - x0;
            const double top = (1.0 - wx) * img.at(x0, y0) + wx * img.at(x1, y0);
            const double bot = (1.0 - wx) * img.at(x0, y1) + wx * img.at(x1, y1);
            out.at(x, y) = (1.0 - wy) * top + wy * bot;
        }
    }
    return out;
}

} // namespace ppad
