#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "ppad/errors.hpp"
#include "ppad/image.hpp"
#include "ppad/rng.hpp"

namespace ppad {

/// Classic 2-D gradient-lattice Perlin noise. Lattice gradients are picked
/// from eight fixed unit directions by hashing the lattice coordinates with
/// the seed, so the field is a pure function of (seed, coordinates).
class PerlinNoise {
public:
    /// Raw noise is bounded by +/- sqrt(1/2) in 2-D and vanishes at integer
    /// lattice coordinates.
    static constexpr double kAmplitude = 0.70710678118654752440;

    explicit PerlinNoise(std::uint64_t seed) : seed_(seed) {}

    double raw(double x, double y) const {
        const double fx = std::floor(x);
        const double fy = std::floor(y);
        const long long x0 = (long long)fx;
        const long long y0 = (long long)fy;
        const double tx = x - fx;
        const double ty = y - fy;

        const double n00 = dot_gradient(x0, y0, tx, ty);
        const double n10 = dot_gradient(x0 + 1, y0, tx - 1.0, ty);
        const double n01 = dot_gradient(x0, y0 + 1, tx, ty - 1.0);
        const double n11 = dot_gradient(x0 + 1, y0 + 1, tx - 1.0, ty - 1.0);

        const double u = fade(tx);
        const double v = fade(ty);
        const double a = n00 + u * (n10 - n00);
        const double b = n01 + u * (n11 - n01);
        return a + v * (b - a);
    }

private:
    static double fade(double t) { return t * t * (3.0 - 2.0 * t); } // smoothstep

    double dot_gradient(long long ix, long long iy, double dx, double dy) const {
        static constexpr double s = 0.70710678118654752440;
        static constexpr double g[8][2] = {
            {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {s, s}, {s, -s}, {-s, s}, {-s, -s}};
        const std::uint64_t h =
            mix_seed(seed_, std::uint64_t(ix) * 0x9E3779B97F4A7C15ULL ^ std::uint64_t(iy));
        const double* dir = g[h & 7];
        return dx * dir[0] + dy * dir[1];
    }

    std::uint64_t seed_;
};

/// Samples a grid_cells x grid_cells lattice across the image at pixel
/// centers and affinely rescales the raw range [-A, A] to [0, 1].
inline GrayImage perlin_field(int width, int height, std::uint64_t seed, int grid_cells) {
    if (width <= 0 || height <= 0) throw ZeroDimension("perlin field needs positive dimensions");
    if (grid_cells < 1) throw ZeroDimension("grid_cells must be >= 1");

    PerlinNoise noise(seed);
    GrayImage out(width, height);
    const double sx = double(grid_cells) / width;
    const double sy = double(grid_cells) / height;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double nx = (x + 0.5) * sx;
            const double ny = (y + 0.5) * sy;
            const double v = noise.raw(nx, ny) / (2.0 * PerlinNoise::kAmplitude) + 0.5;
            out.at(x, y) = std::clamp(v, 0.0, 1.0);
        }
    }
    return out;
}

} // namespace ppad
