#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "ppad/dataset.hpp"
#include "ppad/encoder.hpp"
#include "ppad/errors.hpp"
#include "ppad/image_io.hpp"
#include "ppad/metrics.hpp"
#include "ppad/prompts.hpp"
#include "ppad/trainer.hpp"

namespace ppad {

/// Scores one image at the four positions and the entire view.
inline ViewProbabilities score_image(const GrayImage& img, const PromptParams& params,
                                     const FrozenEncoders& enc,
                                     const std::array<PositionView, 5>& views) {
    ViewProbabilities probs;
    for (std::size_t v = 0; v < views.size(); ++v) {
        const auto tok_n = assemble_text(views[v], ClassName::normal, params, enc.embed_table);
        const auto tok_p = assemble_text(views[v], ClassName::pneumonia, params, enc.embed_table);
        const Vec t_n = encode_text(tok_n, enc);
        const Vec t_p = encode_text(tok_p, enc);
        const auto patches = assemble_image(img, views[v], params, enc.patch_proj);
        const Vec i_feat = encode_image(patches, enc);
        probs.values[v] = predict(i_feat, t_n, t_p, enc.logit_scale);
    }
    return probs;
}

struct EvalReport {
    std::vector<ScoredItem> items;
    Metrics metrics;
    double eta = 0.8;
};

/// Rebuilds the frozen encoders from the checkpoint config, verifies their
/// content hash, then scores <root>/normal (label 0) and <root>/abnormal
/// (label 1) with the eta-thresholded max/mean aggregation.
inline EvalReport evaluate(const std::filesystem::path& dataset_root, const Checkpoint& ckpt) {
    const TrainConfig& cfg = ckpt.config;
    const FrozenEncoders enc =
        FrozenEncoders::init(cfg.model, mix_seed(cfg.seed, seed_salt::kFrozen));
    if (enc.content_hash() != ckpt.frozen_hash)
        throw Error("frozen encoder hash does not match the checkpoint");
    const auto views = build_views(cfg.model.image_size, cfg.model.patch_size);

    EvalReport report;
    report.eta = cfg.eta;
    const DatasetPaths paths = list_dataset(dataset_root);
    auto score_split = [&](const std::vector<std::filesystem::path>& split, int label) {
        for (const auto& p : split) {
            const GrayImage img = load_image(p, cfg.model.image_size);
            const double prob = aggregate(score_image(img, ckpt.params, enc, views), cfg.eta);
            report.items.push_back({p.string(), prob, label});
        }
    };
    score_split(paths.normal, 0);
    score_split(paths.abnormal, 1);

    std::vector<std::pair<double, int>> scores;
    scores.reserve(report.items.size());
    for (const auto& it : report.items) scores.emplace_back(it.probability, it.label);
    report.metrics = compute_metrics(scores);
    return report;
}

} // namespace ppad
