#pragma once

#include <cstdint>
#include <vector>

#include "ppad/errors.hpp"
#include "ppad/gamma.hpp"
#include "ppad/image.hpp"
#include "ppad/maskgen.hpp"
#include "ppad/rng.hpp"

namespace ppad {

/// Structure-preserving anomaly synthesis settings. The weight set and the
/// 50% application probability follow the training recipe; all weights must
/// exceed -1 so the gamma field stays positive.
struct SynthConfig {
    std::vector<double> weight_choices{-0.999, -0.99, 2.0, 3.0};
    double apply_probability = 0.5;
    std::uint64_t seed = 0;

    // Mask-procedure knobs forwarded to MaskSpec.
    int num_points = 10;
    double bezier_probability = 0.5;
    double control_offset_fraction = 0.5;
    double area_min = 0.02;
    double area_max = 0.75;
    int grid_cells = 4;

    void validate() const {
        if (weight_choices.empty()) throw ConfigError("weight_choices must be nonempty");
        for (double w : weight_choices)
            if (w <= -1.0) throw InvalidWeight("every weight must satisfy w > -1");
        if (apply_probability < 0.0 || apply_probability > 1.0)
            throw ConfigError("apply_probability must be in [0, 1]");
        if (num_points < 3) throw ConfigError("num_points must be >= 3");
        if (!(area_min > 0.0 && area_min < area_max && area_max <= 1.0))
            throw ConfigError("area bounds must satisfy 0 < min < max <= 1");
    }
};

enum class SynthLabel { normal = 0, abnormal = 1 };

struct SynthResult {
    GrayImage image;
    BinaryMask mask;
    SynthLabel label = SynthLabel::normal;
};

inline MaskSpec make_mask_spec(const SynthConfig& config, BinaryMask region,
                               std::uint64_t seed) {
    MaskSpec spec;
    spec.num_points = config.num_points;
    spec.region = std::move(region);
    spec.bezier_probability = config.bezier_probability;
    spec.control_offset_fraction = config.control_offset_fraction;
    spec.area_min = config.area_min;
    spec.area_max = config.area_max;
    spec.grid_cells = config.grid_cells;
    spec.seed = seed;
    return spec;
}

/// With probability apply_probability: draws a weight uniformly from
/// weight_choices, generates an irregular mask inside the region, and gamma-
/// corrects the image through the distance-weighted field. Otherwise returns
/// the input untouched with an empty mask. Pure function of config.seed.
///
/// Draw order (fixed for reproducibility): apply coin, weight index, mask seed.
inline SynthResult synthesize(const GrayImage& img, const BinaryMask& region,
                              const SynthConfig& config) {
    config.validate();
    if (!same_shape(img, region))
        throw DimensionMismatch("image and region dimensions differ");
    if (region.empty()) throw EmptyMask("placement region is empty");

    Rng rng(config.seed);
    if (!rng.bernoulli(config.apply_probability))
        return {img, BinaryMask(img.width, img.height), SynthLabel::normal};

    const double w = config.weight_choices[rng.uniform_int(config.weight_choices.size())];
    const MaskSpec spec = make_mask_spec(config, region, rng.next_u64());
    BinaryMask mask = generate_mask(spec); // may throw GenerationFailed
    const GammaField field = gamma_field(mask, w);
    return {apply_gamma(img, field), std::move(mask), SynthLabel::abnormal};
}

} // namespace ppad
