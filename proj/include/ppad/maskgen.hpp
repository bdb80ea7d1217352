#pragma once

#include <cstdint>
#include <vector>

#include "ppad/errors.hpp"
#include "ppad/geometry.hpp"
#include "ppad/image.hpp"
#include "ppad/perlin.hpp"
#include "ppad/raster.hpp"
#include "ppad/rng.hpp"

namespace ppad {

/// Parameters of the random irregular mask procedure: sample points from a
/// Perlin density, take their convex hull, bend edges into Bezier curves,
/// fill, and keep masks whose area fraction of the region falls in
/// [area_min, area_max].
struct MaskSpec {
    int num_points = 10;
    BinaryMask region;
    double bezier_probability = 0.5;
    double control_offset_fraction = 0.5;
    double area_min = 0.02;
    double area_max = 0.75;
    int grid_cells = 4;
    std::uint64_t seed = 0;

    void validate() const {
        if (num_points < 3) throw ConfigError("num_points must be >= 3");
        if (!(area_min > 0.0 && area_min < area_max && area_max <= 1.0))
            throw ConfigError("area bounds must satisfy 0 < min < max <= 1");
        if (region.width <= 0 || region.height <= 0)
            throw ConfigError("mask spec needs a region");
    }
};

/// Draws n distinct pixel locations inside the region by rejection sampling:
/// a uniformly proposed region pixel is accepted with probability
/// field(p) / max(field over region).
inline std::vector<Point2D> sample_points(const GrayImage& field, const BinaryMask& region,
                                          int n, std::uint64_t seed) {
    if (!same_shape(field, region))
        throw DimensionMismatch("field and region dimensions differ");
    std::vector<std::size_t> pixels;
    for (std::size_t i = 0; i < region.data.size(); ++i)
        if (region.data[i]) pixels.push_back(i);
    if (int(pixels.size()) < n) throw RegionTooSmall("region has fewer pixels than requested points");

    const int w = region.width;
    auto to_point = [w](std::size_t i) {
        return Point2D{double(i % std::size_t(w)), double(i / std::size_t(w))};
    };

    std::vector<Point2D> out;
    out.reserve(n);
    if (int(pixels.size()) == n) { // forced: every region pixel is selected
        for (auto i : pixels) out.push_back(to_point(i));
        return out;
    }

    double max_val = 0.0;
    for (auto i : pixels) max_val = std::max(max_val, field.data[i]);
    if (max_val <= 0.0) throw DegenerateField("field is zero everywhere inside the region");

    Rng rng(seed);
    std::vector<std::uint8_t> chosen(region.data.size(), 0);
    long long budget = 200000LL * n; // guards against fields with almost no mass
    while (int(out.size()) < n) {
        if (--budget < 0) throw DegenerateField("rejection sampling failed to find enough points");
        const std::size_t i = pixels[rng.uniform_int(pixels.size())];
        if (chosen[i]) continue;
        if (rng.uniform() < field.data[i] / max_val) {
            chosen[i] = 1;
            out.push_back(to_point(i));
        }
    }
    return out;
}

/// Intermediate artifacts of one successful mask generation, kept around for
/// the viz subcommand and for inspecting the pipeline stage by stage.
struct MaskTrace {
    GrayImage field;
    std::vector<Point2D> points;
    std::vector<Point2D> hull;
    std::vector<Point2D> curve;
    BinaryMask mask;
    int attempt = 0;
};

/// Runs the full four-step mask procedure, retrying with a derived seed (at
/// most 20 attempts) until the mask area fraction of the region lands in
/// bounds. Deterministic for a fixed spec.
inline MaskTrace generate_mask_trace(const MaskSpec& spec) {
    spec.validate();
    const long long region_area = spec.region.count();
    if (region_area < spec.num_points)
        throw RegionTooSmall("region cannot host the requested points");

    constexpr int kMaxAttempts = 20;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const std::uint64_t aseed = mix_seed(spec.seed, std::uint64_t(attempt));
        try {
            MaskTrace trace;
            trace.attempt = attempt;
            trace.field = perlin_field(spec.region.width, spec.region.height,
                                       mix_seed(aseed, 1), spec.grid_cells);
            trace.points = sample_points(trace.field, spec.region, spec.num_points,
                                         mix_seed(aseed, 2));
            trace.hull = convex_hull(trace.points);
            Rng brng(mix_seed(aseed, 3));
            trace.curve = bezier_edges(trace.hull, spec.bezier_probability,
                                       spec.control_offset_fraction, brng);
            BinaryMask mask = rasterize_fill(trace.curve, spec.region.width, spec.region.height);

            // Bezier bulges may leave the region; clip and re-extract.
            for (std::size_t i = 0; i < mask.data.size(); ++i)
                mask.data[i] &= spec.region.data[i];
            mask = largest_component4(mask);

            const long long area = mask.count();
            if (area == 0) continue;
            const double frac = double(area) / double(region_area);
            if (frac >= spec.area_min && frac <= spec.area_max) {
                trace.mask = std::move(mask);
                return trace;
            }
        } catch (const DegenerateInput&) {
        } catch (const EmptyInterior&) {
        } catch (const DegenerateField&) {
        }
    }
    throw GenerationFailed("no in-bounds mask after 20 attempts");
}

inline BinaryMask generate_mask(const MaskSpec& spec) {
    return generate_mask_trace(spec).mask;
}

} // namespace ppad
