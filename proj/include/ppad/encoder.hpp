#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "ppad/errors.hpp"
#include "ppad/prompts.hpp"
#include "ppad/rng.hpp"
#include "ppad/tensor.hpp"

namespace ppad {

inline constexpr double kProbEps = 1e-7;

/// Fixed-weight stand-in for the pretrained dual encoder. Each branch is
/// embedding -> mean-pool -> linear head -> L2-normalize; rich enough that
/// prompt gradients pass through masking, pooling, normalization, and the
/// softmax, yet simple enough for exact hand-derived gradients.
struct FrozenEncoders {
    Matrix embed_table; // vocab x d
    Matrix patch_proj;  // d x patch_pixels
    Matrix text_head;   // f x d
    Matrix image_head;  // f x d
    double logit_scale = 10.0;

    static FrozenEncoders init(const ModelConfig& cfg, std::uint64_t seed) {
        cfg.validate();
        const double sigma = 1.0 / std::sqrt(double(cfg.embed_dim));
        Rng rng(seed);
        FrozenEncoders enc;
        enc.embed_table = Matrix::gaussian(int(vocabulary().size()), cfg.embed_dim, sigma, rng);
        enc.patch_proj = Matrix::gaussian(cfg.embed_dim, cfg.patch_pixels(), sigma, rng);
        enc.text_head = Matrix::gaussian(cfg.feature_dim, cfg.embed_dim, sigma, rng);
        enc.image_head = Matrix::gaussian(cfg.feature_dim, cfg.embed_dim, sigma, rng);
        enc.logit_scale = cfg.logit_scale;
        return enc;
    }

    /// FNV-1a over the raw little-endian bytes of every frozen tensor;
    /// recorded at checkpoint time and re-verified after training runs.
    std::uint64_t content_hash() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        auto eat_u64 = [&h](std::uint64_t v) {
            for (int i = 0; i < 8; ++i) {
                h ^= (v >> (8 * i)) & 0xff;
                h *= 0x100000001b3ULL;
            }
        };
        auto eat_matrix = [&](const Matrix& m) {
            eat_u64(std::uint64_t(std::uint32_t(m.rows)));
            eat_u64(std::uint64_t(std::uint32_t(m.cols)));
            for (double d : m.data) {
                std::uint64_t bits;
                std::memcpy(&bits, &d, sizeof bits);
                eat_u64(bits);
            }
        };
        eat_matrix(embed_table);
        eat_matrix(patch_proj);
        eat_matrix(text_head);
        eat_matrix(image_head);
        std::uint64_t bits;
        std::memcpy(&bits, &logit_scale, sizeof bits);
        eat_u64(bits);
        return h;
    }
};

namespace detail {

struct PooledFeature {
    Vec pooled;  // mean over rows
    Vec pre;     // head output before normalization
    double pre_norm = 0.0;
    Vec feature; // unit vector
};

inline PooledFeature pool_head_normalize(const Matrix& rows, const Matrix& head) {
    if (rows.rows == 0) throw EmptyInput("cannot encode an empty embedding matrix");
    PooledFeature out;
    out.pooled = mean_rows(rows);
    out.pre = matvec(head, out.pooled);
    out.pre_norm = norm(out.pre);
    if (out.pre_norm == 0.0) throw Error("feature collapsed to the zero vector");
    out.feature = out.pre;
    for (auto& v : out.feature) v /= out.pre_norm;
    return out;
}

} // namespace detail

/// Mean-pool the assembled token embeddings, apply the text head, normalize.
inline Vec encode_text(const TokenEmbeddings& tokens, const FrozenEncoders& enc) {
    return detail::pool_head_normalize(tokens.assembled, enc.text_head).feature;
}

/// Same shape as encode_text, with the image head.
inline Vec encode_image(const PatchEmbeddings& patches, const FrozenEncoders& enc) {
    return detail::pool_head_normalize(patches.rows, enc.image_head).feature;
}

/// Two-way softmax over scaled cosine similarities; returns p(abnormal).
inline double predict(const Vec& img_feat, const Vec& normal_feat, const Vec& pneu_feat,
                      double scale) {
    const double cn = dot(img_feat, normal_feat);
    const double cp = dot(img_feat, pneu_feat);
    return 1.0 / (1.0 + std::exp(-scale * (cp - cn)));
}

/// Standard binary cross-entropy with the probability clamped to
/// [eps, 1 - eps] so saturated predictions keep a finite loss.
inline double bce_loss(double p, int label) {
    const double q = std::clamp(p, kProbEps, 1.0 - kProbEps);
    return -(label ? std::log(q) : std::log(1.0 - q));
}

/// One training example after view/synthesis draws.
struct TrainItem {
    GrayImage image;
    int view_index = 4; // into the (left, right, upper, lower, entire) array
    int label = 0;      // 1 iff a synthetic anomaly was applied
};

struct ForwardEval {
    double p_abnormal = 0.0;
    double loss = 0.0;
};

inline ForwardEval forward_item(const TrainItem& item, const std::array<PositionView, 5>& views,
                                const PromptParams& params, const FrozenEncoders& enc) {
    const PositionView& view = views[std::size_t(item.view_index)];
    const auto tok_n = assemble_text(view, ClassName::normal, params, enc.embed_table);
    const auto tok_p = assemble_text(view, ClassName::pneumonia, params, enc.embed_table);
    const Vec t_n = encode_text(tok_n, enc);
    const Vec t_p = encode_text(tok_p, enc);
    const auto patches = assemble_image(item.image, view, params, enc.patch_proj);
    const Vec i_feat = encode_image(patches, enc);
    const double p = predict(i_feat, t_n, t_p, enc.logit_scale);
    return {p, bce_loss(p, item.label)};
}

struct GradEval {
    double p_abnormal = 0.0;
    double loss = 0.0;
    Matrix d_text_prompt;  // same shape as P_t
    Matrix d_image_prompt; // same shape as P_i
};

/// Exact analytic gradient of the BCE loss with respect to the prompts only,
/// chained through concatenation, masked patch replacement, mean-pooling,
/// the linear heads, L2 normalization, cosine similarity, and the softmax.
/// Rows of P_i whose patch is taken from the image receive exactly zero.
/// loss_scale multiplies the loss (and therefore both gradients).
inline GradEval grad_prompts(const TrainItem& item, const std::array<PositionView, 5>& views,
                             const PromptParams& params, const FrozenEncoders& enc,
                             double loss_scale = 1.0) {
    const PositionView& view = views[std::size_t(item.view_index)];

    const auto tok_n = assemble_text(view, ClassName::normal, params, enc.embed_table);
    const auto tok_p = assemble_text(view, ClassName::pneumonia, params, enc.embed_table);
    const auto f_n = detail::pool_head_normalize(tok_n.assembled, enc.text_head);
    const auto f_p = detail::pool_head_normalize(tok_p.assembled, enc.text_head);
    const auto patches = assemble_image(item.image, view, params, enc.patch_proj);
    const auto f_i = detail::pool_head_normalize(patches.rows, enc.image_head);

    const double cn = dot(f_i.feature, f_n.feature);
    const double cp = dot(f_i.feature, f_p.feature);
    const double p = 1.0 / (1.0 + std::exp(-enc.logit_scale * (cp - cn)));

    GradEval out;
    out.p_abnormal = p;
    out.loss = loss_scale * bce_loss(p, item.label);
    out.d_text_prompt = Matrix(params.text_prompt.rows, params.text_prompt.cols);
    out.d_image_prompt = Matrix(params.image_prompt.rows, params.image_prompt.cols);

    // The clamp zeroes the gradient on saturated predictions.
    if (p <= kProbEps || p >= 1.0 - kProbEps) return out;

    // d loss / d (logit difference) for BCE after a two-way softmax.
    const double g = loss_scale * (p - double(item.label));
    const double dcp = enc.logit_scale * g;
    const double dcn = -enc.logit_scale * g;

    // Backprop through t = h / ||h||: dh = (dt - (t . dt) t) / ||h||.
    auto through_normalize = [](const detail::PooledFeature& f, const Vec& dt) {
        Vec dh(dt.size());
        const double proj = dot(f.feature, dt);
        for (std::size_t i = 0; i < dt.size(); ++i)
            dh[i] = (dt[i] - proj * f.feature[i]) / f.pre_norm;
        return dh;
    };

    // Text branches: both share P_t, so their pooled gradients add up.
    const int text_rows = tok_n.assembled.rows; // same for both classes
    for (int branch = 0; branch < 2; ++branch) {
        const auto& f_t = branch == 0 ? f_n : f_p;
        const double dc = branch == 0 ? dcn : dcp;
        Vec dt(f_t.feature.size());
        for (std::size_t i = 0; i < dt.size(); ++i) dt[i] = dc * f_i.feature[i];
        const Vec dh = through_normalize(f_t, dt);
        const Vec dm = matvec_transpose(enc.text_head, dh);
        // Mean-pool spreads 1/T of the pooled gradient to every row.
        for (int r = 0; r < out.d_text_prompt.rows; ++r)
            for (int c = 0; c < out.d_text_prompt.cols; ++c)
                out.d_text_prompt.at(r, c) += dm[std::size_t(c)] / text_rows;
    }

    // Image branch: dL/di = dcp * t_p + dcn * t_n.
    Vec di(f_i.feature.size());
    for (std::size_t i = 0; i < di.size(); ++i)
        di[i] = dcp * f_p.feature[i] + dcn * f_n.feature[i];
    const Vec dh_i = through_normalize(f_i, di);
    const Vec dm_i = matvec_transpose(enc.image_head, dh_i);
    const int n_patches = out.d_image_prompt.rows;
    for (int r = 0; r < n_patches; ++r) {
        if (view.patch_mask[std::size_t(r)]) continue; // image-fed rows: zero gradient
        for (int c = 0; c < out.d_image_prompt.cols; ++c)
            out.d_image_prompt.at(r, c) = dm_i[std::size_t(c)] / n_patches;
    }
    return out;
}

} // namespace ppad
