#pragma once

#include <array>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "ppad/errors.hpp"
#include "ppad/image.hpp"
#include "ppad/rng.hpp"
#include "ppad/tensor.hpp"

namespace ppad {

/// Architecture parameters of the toy dual encoder and its prompts.
struct ModelConfig {
    int image_size = 224;
    int patch_size = 32;
    int embed_dim = 64;    // d: token/patch embedding width
    int feature_dim = 64;  // f: shared feature space of the two heads
    int text_prompt_len = 4;
    double logit_scale = 10.0;
    double prompt_init_sigma = 0.02;

    int grid_side() const { return image_size / patch_size; }
    int num_patches() const { return grid_side() * grid_side(); }
    int patch_pixels() const { return patch_size * patch_size; }

    void validate() const {
        if (image_size <= 0 || patch_size <= 0) throw ConfigError("sizes must be positive");
        if (image_size % patch_size != 0)
            throw ConfigError("image_size must be divisible by patch_size");
        if (embed_dim <= 0 || feature_dim <= 0) throw ConfigError("dims must be positive");
        if (text_prompt_len < 0) throw ConfigError("text_prompt_len must be >= 0");
        if (logit_scale <= 0.0) throw ConfigError("logit_scale must be positive");
        if (prompt_init_sigma < 0.0) throw ConfigError("prompt_init_sigma must be >= 0");
    }
};

// Fixed vocabulary of the stand-in tokenizer.
inline const std::vector<std::string>& vocabulary() {
    static const std::vector<std::string> v = {
        "left", "right", "upper", "lower", "lung",
        "normal", "pneumonia", "<pad>", "<empty>"};
    return v;
}

inline constexpr int kEmptyToken = 8;

/// Deterministic word -> id mapping; the empty string maps to <empty>.
inline std::vector<int> tokenize(const std::string& text) {
    std::vector<int> ids;
    std::istringstream ss(text);
    std::string word;
    while (ss >> word) {
        int id = -1;
        const auto& vocab = vocabulary();
        for (std::size_t i = 0; i < vocab.size(); ++i)
            if (vocab[i] == word) { id = int(i); break; }
        if (id < 0) throw UnknownWord("word not in vocabulary: " + word);
        ids.push_back(id);
    }
    if (ids.empty()) ids.push_back(kEmptyToken);
    return ids;
}

enum class ClassName { normal = 0, pneumonia = 1 };

inline int class_token(ClassName c) { return c == ClassName::normal ? 5 : 6; }
inline const char* class_text(ClassName c) { return c == ClassName::normal ? "normal" : "pneumonia"; }

enum class ViewKind { left_lung = 0, right_lung = 1, upper_lung = 2, lower_lung = 3, entire = 4 };

inline const char* view_name(ViewKind k) {
    switch (k) {
        case ViewKind::left_lung: return "left_lung";
        case ViewKind::right_lung: return "right_lung";
        case ViewKind::upper_lung: return "upper_lung";
        case ViewKind::lower_lung: return "lower_lung";
        default: return "entire";
    }
}

/// One of the five positional views: a text prefix plus the pixel- and
/// patch-level region masks. "left" means the left half of the image (not
/// the anatomical left lung).
struct PositionView {
    ViewKind kind = ViewKind::entire;
    BinaryMask region_mask;
    std::vector<std::uint8_t> patch_mask; // 1 iff every pixel of the patch is in region_mask
    std::vector<int> prefix_tokens;
};

inline const char* view_prefix_text(ViewKind k) {
    switch (k) {
        case ViewKind::left_lung: return "left lung";
        case ViewKind::right_lung: return "right lung";
        case ViewKind::upper_lung: return "upper lung";
        case ViewKind::lower_lung: return "lower lung";
        default: return "";
    }
}

/// Builds the five views in the fixed order (left, right, upper, lower,
/// entire). The four partial regions are axis-aligned half-image rectangles:
/// left/right split columns at width/2, upper/lower split rows at height/2.
inline std::array<PositionView, 5> build_views(int image_size, int patch_size) {
    if (image_size <= 0 || patch_size <= 0) throw ZeroDimension("view sizes must be positive");
    if (image_size % patch_size != 0)
        throw DimensionMismatch("image_size must be divisible by patch_size");
    const int half = image_size / 2;
    const int grid = image_size / patch_size;

    auto make = [&](ViewKind kind) {
        PositionView v;
        v.kind = kind;
        v.region_mask = BinaryMask(image_size, image_size);
        for (int y = 0; y < image_size; ++y) {
            for (int x = 0; x < image_size; ++x) {
                bool in = true;
                switch (kind) {
                    case ViewKind::left_lung: in = x < half; break;
                    case ViewKind::right_lung: in = x >= half; break;
                    case ViewKind::upper_lung: in = y < half; break;
                    case ViewKind::lower_lung: in = y >= half; break;
                    case ViewKind::entire: in = true; break;
                }
                v.region_mask.at(x, y) = in ? 1 : 0;
            }
        }
        v.patch_mask.assign(std::size_t(grid) * grid, 0);
        for (int pr = 0; pr < grid; ++pr) {
            for (int pc = 0; pc < grid; ++pc) {
                bool all_in = true;
                for (int y = pr * patch_size; all_in && y < (pr + 1) * patch_size; ++y)
                    for (int x = pc * patch_size; x < (pc + 1) * patch_size; ++x)
                        if (!v.region_mask.at(x, y)) { all_in = false; break; }
                v.patch_mask[std::size_t(pr) * grid + pc] = all_in ? 1 : 0;
            }
        }
        v.prefix_tokens = tokenize(view_prefix_text(kind));
        return v;
    };

    return {make(ViewKind::left_lung), make(ViewKind::right_lung),
            make(ViewKind::upper_lung), make(ViewKind::lower_lung),
            make(ViewKind::entire)};
}

/// The only trainable state: text prompt P_t (L_t x d) and image prompt P_i
/// (n_patches x d).
struct PromptParams {
    Matrix text_prompt;
    Matrix image_prompt;

    static PromptParams init(const ModelConfig& cfg, std::uint64_t seed) {
        cfg.validate();
        Rng rng(seed);
        PromptParams p;
        p.text_prompt =
            Matrix::gaussian(cfg.text_prompt_len, cfg.embed_dim, cfg.prompt_init_sigma, rng);
        p.image_prompt =
            Matrix::gaussian(cfg.num_patches(), cfg.embed_dim, cfg.prompt_init_sigma, rng);
        return p;
    }
};

/// Text-side assembly of one prompt: position prefix rows, learnable prompt
/// rows, class row, concatenated in that order.
struct TokenEmbeddings {
    Matrix pos;       // prefix embeddings
    Matrix cls;       // class embedding (one row)
    Matrix assembled; // [pos ; P_t ; cls]
};

inline TokenEmbeddings assemble_text(const PositionView& view, ClassName cls,
                                     const PromptParams& params, const Matrix& embed_table) {
    const int d = embed_table.cols;
    if (params.text_prompt.cols != d)
        throw DimensionMismatch("text prompt width differs from embedding width");

    TokenEmbeddings out;
    out.pos = Matrix(int(view.prefix_tokens.size()), d);
    for (std::size_t r = 0; r < view.prefix_tokens.size(); ++r)
        for (int c = 0; c < d; ++c)
            out.pos.at(int(r), c) = embed_table.at(view.prefix_tokens[r], c);

    out.cls = Matrix(1, d);
    for (int c = 0; c < d; ++c) out.cls.at(0, c) = embed_table.at(class_token(cls), c);

    out.assembled = Matrix(out.pos.rows + params.text_prompt.rows + 1, d);
    int r = 0;
    for (int i = 0; i < out.pos.rows; ++i, ++r)
        for (int c = 0; c < d; ++c) out.assembled.at(r, c) = out.pos.at(i, c);
    for (int i = 0; i < params.text_prompt.rows; ++i, ++r)
        for (int c = 0; c < d; ++c) out.assembled.at(r, c) = params.text_prompt.at(i, c);
    for (int c = 0; c < d; ++c) out.assembled.at(r, c) = out.cls.at(0, c);
    return out;
}

/// Image-side assembly: per-patch linear projection of the view-masked image
/// where the patch lies fully inside the region, the learnable image prompt
/// row everywhere else. Every output row is exactly one of the two, never a
/// blend.
struct PatchEmbeddings {
    Matrix rows; // n_patches x d, already prompt-substituted
    int grid_rows = 0;
    int grid_cols = 0;
};

inline PatchEmbeddings assemble_image(const GrayImage& img, const PositionView& view,
                                      const PromptParams& params, const Matrix& patch_proj) {
    if (!same_shape(img, view.region_mask))
        throw DimensionMismatch("image and view dimensions differ");
    const int side = img.width;
    if (img.height != side) throw DimensionMismatch("image must be square");
    const int patch_pixels = patch_proj.cols;
    const int patch_side = int(std::lround(std::sqrt(double(patch_pixels))));
    if (patch_side * patch_side != patch_pixels || side % patch_side != 0)
        throw DimensionMismatch("patch projection incompatible with image side");
    const int grid = side / patch_side;
    const int n_patches = grid * grid;
    const int d = patch_proj.rows;
    if (params.image_prompt.rows != n_patches || params.image_prompt.cols != d)
        throw DimensionMismatch("image prompt shaped differently from patch grid");
    if (int(view.patch_mask.size()) != n_patches)
        throw DimensionMismatch("view patch mask does not match the grid");

    PatchEmbeddings out;
    out.grid_rows = grid;
    out.grid_cols = grid;
    out.rows = Matrix(n_patches, d);

    Vec pixels(patch_pixels);
    for (int pr = 0; pr < grid; ++pr) {
        for (int pc = 0; pc < grid; ++pc) {
            const int p = pr * grid + pc;
            if (view.patch_mask[p]) {
                // Patch is fully visible; masked-out pixels (all zeroed by
                // the region) can never reach a projected row.
                int k = 0;
                for (int y = pr * patch_side; y < (pr + 1) * patch_side; ++y)
                    for (int x = pc * patch_side; x < (pc + 1) * patch_side; ++x, ++k)
                        pixels[k] = img.at(x, y) * view.region_mask.at(x, y);
                const Vec e = matvec(patch_proj, pixels);
                for (int c = 0; c < d; ++c) out.rows.at(p, c) = e[c];
            } else {
                for (int c = 0; c < d; ++c) out.rows.at(p, c) = params.image_prompt.at(p, c);
            }
        }
    }
    return out;
}

} // namespace ppad
