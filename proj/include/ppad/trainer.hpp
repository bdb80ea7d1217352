#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ppad/dataset.hpp"
#include "ppad/encoder.hpp"
#include "ppad/errors.hpp"
#include "ppad/image_io.hpp"
#include "ppad/prompts.hpp"
#include "ppad/rng.hpp"
#include "ppad/synth.hpp"

namespace ppad {

/// Few-shot training configuration. Defaults follow the training recipe:
/// 64 shots, 100 epochs, decision threshold eta = 0.8, SAS applied with 50%
/// probability and weights drawn from {-0.999, -0.99, 2, 3}.
struct TrainConfig {
    int shots = 64;
    int epochs = 100;
    double learning_rate = 0.05;
    SynthConfig synth;
    double eta = 0.8;
    std::uint64_t seed = 0;
    ModelConfig model;

    void validate() const {
        if (shots < 1) throw ConfigError("shots must be >= 1");
        if (epochs < 1) throw ConfigError("epochs must be >= 1");
        if (learning_rate <= 0.0) throw ConfigError("learning_rate must be positive");
        if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("eta must lie in (0, 1)");
        synth.validate();
        model.validate();
    }
};

/// Training artifact: the learned prompts plus everything needed to rebuild
/// and verify the frozen encoders.
struct Checkpoint {
    PromptParams params;
    std::uint64_t frozen_hash = 0;
    TrainConfig config;
    std::uint32_t epoch = 0;
};

// ---------------------------------------------------------------------------
// Checkpoint serialization: flat little-endian binary, format version 1.
// Layout: magic "PPAD", u32 version, config block (see write order below),
// u64 frozen hash, u32 epoch, u32 tensor count, then each tensor as
// (u32 rank, u32 dims..., f64 values...). Tensor order: P_t, then P_i.
// ---------------------------------------------------------------------------

namespace detail {

inline void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = (v >> (8 * i)) & 0xff;
    out.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
    out.write(reinterpret_cast<const char*>(b), 8);
}

inline void put_f64(std::ostream& out, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof bits);
    put_u64(out, bits);
}

inline std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw IoError("checkpoint truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
    return v;
}

inline std::uint64_t get_u64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw IoError("checkpoint truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    return v;
}

inline double get_f64(std::istream& in) {
    const std::uint64_t bits = get_u64(in);
    double d;
    std::memcpy(&d, &bits, sizeof d);
    return d;
}

inline void put_matrix(std::ostream& out, const Matrix& m) {
    put_u32(out, 2); // rank
    put_u32(out, std::uint32_t(m.rows));
    put_u32(out, std::uint32_t(m.cols));
    for (double v : m.data) put_f64(out, v);
}

inline Matrix get_matrix(std::istream& in) {
    const std::uint32_t rank = get_u32(in);
    if (rank != 2) throw UnsupportedFormat("checkpoint tensor rank must be 2");
    const std::uint32_t rows = get_u32(in);
    const std::uint32_t cols = get_u32(in);
    Matrix m{int(rows), int(cols)};
    for (auto& v : m.data) v = get_f64(in);
    return m;
}

} // namespace detail

inline void save_checkpoint(const Checkpoint& ckpt, std::ostream& out) {
    using namespace detail;
    out.write("PPAD", 4);
    put_u32(out, 1); // version

    const TrainConfig& c = ckpt.config;
    put_u32(out, std::uint32_t(c.model.image_size));
    put_u32(out, std::uint32_t(c.model.patch_size));
    put_u32(out, std::uint32_t(c.model.embed_dim));
    put_u32(out, std::uint32_t(c.model.feature_dim));
    put_u32(out, std::uint32_t(c.model.text_prompt_len));
    put_f64(out, c.model.logit_scale);
    put_f64(out, c.model.prompt_init_sigma);
    put_u32(out, std::uint32_t(c.shots));
    put_u32(out, std::uint32_t(c.epochs));
    put_f64(out, c.learning_rate);
    put_f64(out, c.eta);
    put_u64(out, c.seed);
    put_u32(out, std::uint32_t(c.synth.weight_choices.size()));
    for (double w : c.synth.weight_choices) put_f64(out, w);
    put_f64(out, c.synth.apply_probability);
    put_u32(out, std::uint32_t(c.synth.num_points));
    put_f64(out, c.synth.bezier_probability);
    put_f64(out, c.synth.control_offset_fraction);
    put_f64(out, c.synth.area_min);
    put_f64(out, c.synth.area_max);
    put_u32(out, std::uint32_t(c.synth.grid_cells));

    put_u64(out, ckpt.frozen_hash);
    put_u32(out, ckpt.epoch);
    put_u32(out, 2); // tensor count
    put_matrix(out, ckpt.params.text_prompt);
    put_matrix(out, ckpt.params.image_prompt);
}

inline void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    save_checkpoint(ckpt, out);
    if (!out) throw IoError("write failed: " + path.string());
}

inline Checkpoint load_checkpoint(std::istream& in) {
    using namespace detail;
    char magic[4];
    in.read(magic, 4);
    if (!in || std::string(magic, 4) != "PPAD")
        throw UnsupportedFormat("not a PPAD checkpoint");
    const std::uint32_t version = get_u32(in);
    if (version != 1) throw UnsupportedFormat("unsupported checkpoint version");

    Checkpoint ckpt;
    TrainConfig& c = ckpt.config;
    c.model.image_size = int(get_u32(in));
    c.model.patch_size = int(get_u32(in));
    c.model.embed_dim = int(get_u32(in));
    c.model.feature_dim = int(get_u32(in));
    c.model.text_prompt_len = int(get_u32(in));
    c.model.logit_scale = get_f64(in);
    c.model.prompt_init_sigma = get_f64(in);
    c.shots = int(get_u32(in));
    c.epochs = int(get_u32(in));
    c.learning_rate = get_f64(in);
    c.eta = get_f64(in);
    c.seed = get_u64(in);
    c.synth.weight_choices.assign(get_u32(in), 0.0);
    for (auto& w : c.synth.weight_choices) w = get_f64(in);
    c.synth.apply_probability = get_f64(in);
    c.synth.num_points = int(get_u32(in));
    c.synth.bezier_probability = get_f64(in);
    c.synth.control_offset_fraction = get_f64(in);
    c.synth.area_min = get_f64(in);
    c.synth.area_max = get_f64(in);
    c.synth.grid_cells = int(get_u32(in));

    ckpt.frozen_hash = get_u64(in);
    ckpt.epoch = get_u32(in);
    const std::uint32_t tensors = get_u32(in);
    if (tensors != 2) throw UnsupportedFormat("checkpoint must hold exactly P_t and P_i");
    ckpt.params.text_prompt = get_matrix(in);
    ckpt.params.image_prompt = get_matrix(in);
    return ckpt;
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw FileNotFound("no such file: " + path.string());
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return load_checkpoint(in);
}

// ---------------------------------------------------------------------------
// Training loop
// ---------------------------------------------------------------------------

// Stream salts for deriving independent RNG streams from the master seed.
namespace seed_salt {
inline constexpr std::uint64_t kFrozen = 0xF1;
inline constexpr std::uint64_t kPrompts = 0xF2;
inline constexpr std::uint64_t kShots = 0xF3;
inline constexpr std::uint64_t kShuffle = 0xF4;
inline constexpr std::uint64_t kStep = 0xF5;
} // namespace seed_salt

/// k distinct paths drawn uniformly without replacement (partial
/// Fisher-Yates, so the selection order is itself shuffled).
inline std::vector<std::filesystem::path>
sample_shots(std::vector<std::filesystem::path> paths, int k, std::uint64_t seed) {
    if (int(paths.size()) < k)
        throw NotEnoughImages("requested more shots than available images");
    Rng rng(seed);
    for (int i = 0; i < k; ++i) {
        const std::size_t j = i + std::size_t(rng.uniform_int(paths.size() - i));
        std::swap(paths[i], paths[j]);
    }
    paths.resize(std::size_t(k));
    return paths;
}

/// Per-step draws: a view uniform over the five options, then SAS with the
/// configured probability inside that view's region.
inline TrainItem draw_step_sample(const GrayImage& img, const std::array<PositionView, 5>& views,
                                  const SynthConfig& synth, Rng& rng) {
    TrainItem item;
    item.view_index = int(rng.uniform_int(5));
    SynthConfig step_cfg = synth;
    step_cfg.seed = rng.next_u64();
    SynthResult res = synthesize(img, views[std::size_t(item.view_index)].region_mask, step_cfg);
    item.image = std::move(res.image);
    item.label = res.label == SynthLabel::abnormal ? 1 : 0;
    return item;
}

/// One SGD step on P_t and P_i; returns the loss at the drawn sample.
inline double train_step(const GrayImage& img, PromptParams& params, const FrozenEncoders& enc,
                         const std::array<PositionView, 5>& views, const TrainConfig& cfg,
                         Rng& rng) {
    const TrainItem item = draw_step_sample(img, views, cfg.synth, rng);
    const GradEval eval = grad_prompts(item, views, params, enc);
    for (std::size_t i = 0; i < params.text_prompt.data.size(); ++i)
        params.text_prompt.data[i] -= cfg.learning_rate * eval.d_text_prompt.data[i];
    for (std::size_t i = 0; i < params.image_prompt.data.size(); ++i)
        params.image_prompt.data[i] -= cfg.learning_rate * eval.d_image_prompt.data[i];
    return eval.loss;
}

struct TrainResult {
    Checkpoint checkpoint;
    std::vector<double> epoch_loss; // mean loss per epoch
};

/// Runs shots x epochs SGD steps over the sampled normal images in seeded
/// shuffled order. Deterministic given (seed, config, dataset listing).
/// Writes an "epoch,mean_loss" CSV when loss_csv is given.
inline TrainResult train(const std::filesystem::path& dataset_root, const TrainConfig& cfg,
                         const std::optional<std::filesystem::path>& loss_csv = std::nullopt) {
    cfg.validate();
    const auto normal_paths = list_images(dataset_root / "normal");
    const auto selected = sample_shots(normal_paths, cfg.shots, mix_seed(cfg.seed, seed_salt::kShots));

    std::vector<GrayImage> images;
    images.reserve(selected.size());
    for (const auto& p : selected) images.push_back(load_image(p, cfg.model.image_size));

    const FrozenEncoders enc = FrozenEncoders::init(cfg.model, mix_seed(cfg.seed, seed_salt::kFrozen));
    const std::uint64_t frozen_hash = enc.content_hash();
    PromptParams params = PromptParams::init(cfg.model, mix_seed(cfg.seed, seed_salt::kPrompts));
    const auto views = build_views(cfg.model.image_size, cfg.model.patch_size);

    std::ofstream csv;
    if (loss_csv) {
        csv.open(*loss_csv);
        if (!csv) throw IoError("cannot open loss log: " + loss_csv->string());
        csv << "epoch,mean_loss\n";
    }

    TrainResult result;
    result.epoch_loss.reserve(std::size_t(cfg.epochs));
    std::vector<int> order(images.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng shuffle_rng(mix_seed(cfg.seed, seed_salt::kShuffle, std::uint64_t(epoch)));
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            const std::size_t j = i + std::size_t(shuffle_rng.uniform_int(order.size() - i));
            std::swap(order[i], order[j]);
        }
        double loss_sum = 0.0;
        for (std::size_t i = 0; i < order.size(); ++i) {
            Rng step_rng(mix_seed(mix_seed(cfg.seed, seed_salt::kStep, std::uint64_t(epoch)),
                                  std::uint64_t(i)));
            loss_sum += train_step(images[std::size_t(order[i])], params, enc, views, cfg, step_rng);
        }
        const double mean_loss = loss_sum / double(images.size());
        result.epoch_loss.push_back(mean_loss);
        if (csv.is_open()) {
            char line[64];
            std::snprintf(line, sizeof line, "%d,%.17g\n", epoch + 1, mean_loss);
            csv << line;
        }
    }

    if (enc.content_hash() != frozen_hash)
        throw Error("frozen encoder weights changed during training");

    result.checkpoint = Checkpoint{std::move(params), frozen_hash, cfg, std::uint32_t(cfg.epochs)};
    return result;
}

} // namespace ppad
