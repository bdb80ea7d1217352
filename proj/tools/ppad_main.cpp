// ppad: synth / train / eval / viz command-line front end.
//
// Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <cmath>
#include <cstdio>
#include <functional>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ppad/ppad.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SynthArgs {
    std::string data;
    std::string out;
    std::uint64_t seed = 0;
    int count = 0; // 0 = every input image
    int image_size = 224;
    ppad::SynthConfig cfg; // apply_probability forced to 1.0 by default below
    bool dry_run = false;
};

struct TrainArgs {
    std::string data;
    std::string out;
    std::string loss_log; // defaults to <out>.loss.csv
    ppad::TrainConfig cfg;
    bool dry_run = false;
};

struct EvalArgs {
    std::string data;
    std::string checkpoint;
    std::string out; // optional JSON report
    bool dry_run = false;
};

struct VizArgs {
    std::string input;
    std::string out;
    std::uint64_t seed = 0;
    int image_size = 224;
    double weight = std::numeric_limits<double>::quiet_NaN(); // NaN = draw from set
    ppad::SynthConfig cfg;
    bool dry_run = false;
};

void add_mask_options(CLI::App* sub, ppad::SynthConfig& cfg) {
    sub->add_option("--num-points", cfg.num_points, "Points sampled for the mask hull")
        ->capture_default_str();
    sub->add_option("--bezier-probability", cfg.bezier_probability,
                    "Per-edge probability of Bezier replacement")
        ->capture_default_str();
    sub->add_option("--control-offset", cfg.control_offset_fraction,
                    "Bezier control offset as a fraction of edge length")
        ->capture_default_str();
    sub->add_option("--area-min", cfg.area_min, "Minimum mask area fraction of the region")
        ->capture_default_str();
    sub->add_option("--area-max", cfg.area_max, "Maximum mask area fraction of the region")
        ->capture_default_str();
    sub->add_option("--grid-cells", cfg.grid_cells, "Perlin lattice cells across the image")
        ->capture_default_str();
}

void add_weight_options(CLI::App* sub, ppad::SynthConfig& cfg) {
    sub->add_option("--weights", cfg.weight_choices,
                    "Gamma weights w (each > -1), comma separated")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--apply-probability", cfg.apply_probability,
                    "Probability of applying the synthetic anomaly")
        ->capture_default_str();
}

// Each subcommand runs as its own root CLI::App: CLI11 only applies config
// files (and their environment fallback) on a root parser, and a root per
// subcommand keeps the config format flat key = value.
void configure_config(CLI::App& app) {
    app.set_config("--config", "",
                   "Flat key = value config file (# comments); PPAD_CONFIG is "
                   "used when the flag is absent")
        ->envname("PPAD_CONFIG");
    app.allow_config_extras(CLI::config_extras_mode::error);
}

void draw_point(ppad::GrayImage& img, double px, double py, double value) {
    const int cx = int(std::lround(px));
    const int cy = int(std::lround(py));
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            const int x = cx + dx, y = cy + dy;
            if (x >= 0 && x < img.width && y >= 0 && y < img.height) img.at(x, y) = value;
        }
}

void draw_polyline(ppad::GrayImage& img, const std::vector<ppad::Point2D>& pts, bool closed,
                   double value) {
    const std::size_t n = pts.size();
    if (n == 0) return;
    const std::size_t edges = closed ? n : n - 1;
    for (std::size_t i = 0; i < edges; ++i) {
        const auto& a = pts[i];
        const auto& b = pts[(i + 1) % n];
        const int steps = std::max(1, int(std::ceil(2.0 * ppad::distance(a, b))));
        for (int s = 0; s <= steps; ++s) {
            const double t = double(s) / steps;
            const int x = int(std::lround(a.x + t * (b.x - a.x)));
            const int y = int(std::lround(a.y + t * (b.y - a.y)));
            if (x >= 0 && x < img.width && y >= 0 && y < img.height) img.at(x, y) = value;
        }
    }
}

void print_config(const std::vector<std::pair<std::string, std::string>>& kv) {
    for (const auto& [k, v] : kv) std::cout << k << " = " << v << "\n";
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string fmt_weights(const std::vector<double>& ws) {
    std::string s;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (i) s += ",";
        s += fmt_double(ws[i]);
    }
    return s;
}

int run_synth(const SynthArgs& a) {
    if (a.dry_run) {
        print_config({{"data", a.data},
                      {"out", a.out},
                      {"seed", std::to_string(a.seed)},
                      {"count", std::to_string(a.count)},
                      {"image-size", std::to_string(a.image_size)},
                      {"apply-probability", fmt_double(a.cfg.apply_probability)},
                      {"weights", fmt_weights(a.cfg.weight_choices)},
                      {"area-min", fmt_double(a.cfg.area_min)},
                      {"area-max", fmt_double(a.cfg.area_max)}});
        return 0;
    }
    const auto files = ppad::list_images(a.data);
    if (files.empty()) throw ppad::NotEnoughImages("no input images in " + a.data);
    const int count = a.count == 0 ? int(files.size()) : a.count;
    if (count > int(files.size()))
        throw ppad::NotEnoughImages("--count exceeds the number of input images");

    fs::create_directories(a.out);
    const ppad::BinaryMask region(a.image_size, a.image_size, 1);
    for (int i = 0; i < count; ++i) {
        const ppad::GrayImage img = ppad::load_image(files[std::size_t(i)], a.image_size);
        ppad::SynthConfig cfg = a.cfg;
        cfg.seed = ppad::mix_seed(a.seed, std::uint64_t(i));
        const ppad::SynthResult res = ppad::synthesize(img, region, cfg);
        const std::string stem = files[std::size_t(i)].stem().string();
        ppad::save_image(res.image, fs::path(a.out) / (stem + "_synth.pgm"));
        ppad::save_mask(res.mask, fs::path(a.out) / (stem + "_mask.pgm"));
    }
    std::cout << "wrote " << count << " synth/mask pairs to " << a.out << "\n";
    return 0;
}

int run_train(const TrainArgs& a) {
    if (a.dry_run) {
        print_config({{"data", a.data},
                      {"out", a.out},
                      {"shots", std::to_string(a.cfg.shots)},
                      {"epochs", std::to_string(a.cfg.epochs)},
                      {"lr", fmt_double(a.cfg.learning_rate)},
                      {"eta", fmt_double(a.cfg.eta)},
                      {"seed", std::to_string(a.cfg.seed)},
                      {"image-size", std::to_string(a.cfg.model.image_size)},
                      {"patch-size", std::to_string(a.cfg.model.patch_size)},
                      {"embed-dim", std::to_string(a.cfg.model.embed_dim)},
                      {"feature-dim", std::to_string(a.cfg.model.feature_dim)},
                      {"text-prompt-len", std::to_string(a.cfg.model.text_prompt_len)},
                      {"logit-scale", fmt_double(a.cfg.model.logit_scale)},
                      {"apply-probability", fmt_double(a.cfg.synth.apply_probability)},
                      {"weights", fmt_weights(a.cfg.synth.weight_choices)}});
        return 0;
    }
    const fs::path loss_log = a.loss_log.empty() ? fs::path(a.out + ".loss.csv")
                                                 : fs::path(a.loss_log);
    const ppad::TrainResult result = ppad::train(a.data, a.cfg, loss_log);
    ppad::save_checkpoint(result.checkpoint, fs::path(a.out));
    std::cout << "checkpoint: " << a.out << "\n"
              << "loss log:   " << loss_log.string() << "\n"
              << "first epoch mean loss: " << result.epoch_loss.front() << "\n"
              << "final epoch mean loss: " << result.epoch_loss.back() << "\n";
    return 0;
}

int run_eval(const EvalArgs& a) {
    if (a.dry_run) {
        print_config({{"data", a.data}, {"checkpoint", a.checkpoint}, {"out", a.out}});
        return 0;
    }
    const ppad::Checkpoint ckpt = ppad::load_checkpoint(fs::path(a.checkpoint));
    const ppad::EvalReport report = ppad::evaluate(a.data, ckpt);

    std::printf("%-8s %-8s %-8s %-8s\n", "ACC(%)", "AUC(%)", "F1(%)", "AP(%)");
    std::printf("%-8.2f %-8.2f %-8.2f %-8.2f\n", report.metrics.acc, report.metrics.auc,
                report.metrics.f1, report.metrics.ap);

    if (!a.out.empty()) {
        json doc;
        doc["eta"] = report.eta;
        doc["decision_threshold"] = 0.5;
        doc["metrics"] = {{"acc", report.metrics.acc},
                          {"auc", report.metrics.auc},
                          {"f1", report.metrics.f1},
                          {"ap", report.metrics.ap}};
        doc["images"] = json::array();
        for (const auto& item : report.items)
            doc["images"].push_back({{"path", item.path},
                                     {"probability", item.probability},
                                     {"label", item.label}});
        std::ofstream out(a.out);
        if (!out) throw ppad::IoError("cannot open report for writing: " + a.out);
        out << doc.dump(2) << "\n";
    }
    return 0;
}

int run_viz(const VizArgs& a) {
    if (a.dry_run) {
        print_config({{"input", a.input},
                      {"out", a.out},
                      {"seed", std::to_string(a.seed)},
                      {"image-size", std::to_string(a.image_size)}});
        return 0;
    }
    const ppad::GrayImage img = ppad::load_image(a.input, a.image_size);
    const ppad::BinaryMask region(a.image_size, a.image_size, 1);

    double w = a.weight;
    if (std::isnan(w)) {
        ppad::Rng rng(ppad::mix_seed(a.seed, 0x77));
        w = a.cfg.weight_choices[rng.uniform_int(a.cfg.weight_choices.size())];
    }
    if (w <= -1.0) throw ppad::InvalidWeight("--weight must be > -1");

    const ppad::MaskSpec spec = ppad::make_mask_spec(a.cfg, region, a.seed);
    const ppad::MaskTrace trace = ppad::generate_mask_trace(spec);
    const ppad::GammaField field = ppad::gamma_field(trace.mask, w);

    fs::create_directories(a.out);
    const fs::path out(a.out);

    ppad::GrayImage points_panel = img;
    for (const auto& p : trace.points) draw_point(points_panel, p.x, p.y, 1.0);
    ppad::save_image(points_panel, out / "points_overlay.pgm");

    ppad::GrayImage hull_panel = img;
    draw_polyline(hull_panel, trace.hull, true, 1.0);
    ppad::save_image(hull_panel, out / "hull_overlay.pgm");

    ppad::GrayImage curve_panel = img;
    draw_polyline(curve_panel, trace.curve, true, 1.0);
    ppad::save_image(curve_panel, out / "curve_overlay.pgm");

    ppad::save_mask(trace.mask, out / "mask.pgm");

    // Display map: gamma = 1 sits at mid-gray, the extreme gamma = 1 + w at
    // white (w > 0) or black (w < 0).
    ppad::GrayImage gamma_panel(field.width, field.height);
    const double span = 2.0 * std::max(std::abs(w), 1.0);
    for (std::size_t i = 0; i < gamma_panel.data.size(); ++i)
        gamma_panel.data[i] = 0.5 + (field.gamma[i] - 1.0) / span;
    ppad::save_image(gamma_panel, out / "gamma_field.pgm");

    ppad::save_image(ppad::apply_gamma(img, field), out / "synthesized.pgm");
    std::cout << "wrote panels to " << a.out << " (w = " << w << ")\n";
    return 0;
}

constexpr const char* kUsage =
    "PPAD toolkit: structure-preserving anomaly synthesis and position-guided\n"
    "prompt learning.\n"
    "\n"
    "Usage: ppad <subcommand> [flags]\n"
    "\n"
    "Subcommands:\n"
    "  synth   Generate synthetic anomaly / mask pairs\n"
    "  train   Train the text/image prompts on normal images\n"
    "  eval    Evaluate a checkpoint on a normal/abnormal dataset\n"
    "  viz     Dump the synthesis pipeline stage by stage\n"
    "\n"
    "Run 'ppad <subcommand> --help' for the per-subcommand flags. Every\n"
    "subcommand also reads a flat key = value config file via --config or the\n"
    "PPAD_CONFIG environment variable (flags > file > defaults).\n";

int parse_and_run(CLI::App& app, int argc, char** argv, const std::function<int()>& body) {
    configure_config(app);
    try {
        app.parse(argc - 1, argv + 1);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints usage, exit 0
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        return body();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int main_synth(int argc, char** argv) {
    CLI::App app{"Generate synthetic anomaly / mask pairs", "ppad synth"};
    SynthArgs a;
    a.cfg.apply_probability = 1.0; // this subcommand always corrupts by default
    app.add_option("--data", a.data, "Input image directory")->required();
    app.add_option("--out", a.out, "Output directory")->required();
    app.add_option("--seed", a.seed, "Master RNG seed")->capture_default_str();
    app.add_option("--count", a.count, "Images to process (0 = all)")->capture_default_str();
    app.add_option("--image-size", a.image_size, "Working resolution")->capture_default_str();
    add_weight_options(&app, a.cfg);
    add_mask_options(&app, a.cfg);
    app.add_flag("--dry-run", a.dry_run, "Print the effective config and exit");
    return parse_and_run(app, argc, argv, [&] { return run_synth(a); });
}

int main_train(int argc, char** argv) {
    CLI::App app{"Train the text/image prompts", "ppad train"};
    TrainArgs a;
    app.add_option("--data", a.data, "Dataset root (expects <root>/normal)")->required();
    app.add_option("--out", a.out, "Checkpoint output path")->required();
    app.add_option("--loss-log", a.loss_log, "Loss CSV path (default: <out>.loss.csv)");
    app.add_option("--shots", a.cfg.shots, "Normal images sampled for training")
        ->capture_default_str();
    app.add_option("--epochs", a.cfg.epochs, "Training epochs")->capture_default_str();
    app.add_option("--lr", a.cfg.learning_rate, "SGD learning rate")->capture_default_str();
    app.add_option("--eta", a.cfg.eta, "Aggregation threshold")->capture_default_str();
    app.add_option("--seed", a.cfg.seed, "Master RNG seed")->capture_default_str();
    app.add_option("--image-size", a.cfg.model.image_size, "Working resolution")
        ->capture_default_str();
    app.add_option("--patch-size", a.cfg.model.patch_size, "Image patch side")
        ->capture_default_str();
    app.add_option("--embed-dim", a.cfg.model.embed_dim, "Embedding width d")
        ->capture_default_str();
    app.add_option("--feature-dim", a.cfg.model.feature_dim, "Feature width f")
        ->capture_default_str();
    app.add_option("--text-prompt-len", a.cfg.model.text_prompt_len,
                   "Learnable text prompt rows")
        ->capture_default_str();
    app.add_option("--logit-scale", a.cfg.model.logit_scale, "Softmax temperature")
        ->capture_default_str();
    app.add_option("--prompt-init-sigma", a.cfg.model.prompt_init_sigma,
                   "Stddev of the Gaussian prompt initialization")
        ->capture_default_str();
    add_weight_options(&app, a.cfg.synth);
    add_mask_options(&app, a.cfg.synth);
    app.add_flag("--dry-run", a.dry_run, "Print the effective config and exit");
    return parse_and_run(app, argc, argv, [&] { return run_train(a); });
}

int main_eval(int argc, char** argv) {
    CLI::App app{"Evaluate a checkpoint on a dataset", "ppad eval"};
    EvalArgs a;
    app.add_option("--data", a.data, "Dataset root (normal/ and abnormal/)")->required();
    app.add_option("--checkpoint", a.checkpoint, "Trained checkpoint")->required();
    app.add_option("--out", a.out, "JSON report path");
    app.add_flag("--dry-run", a.dry_run, "Print the effective config and exit");
    return parse_and_run(app, argc, argv, [&] { return run_eval(a); });
}

int main_viz(int argc, char** argv) {
    CLI::App app{"Dump the synthesis pipeline stage by stage", "ppad viz"};
    VizArgs a;
    app.add_option("--input", a.input, "Input image")->required();
    app.add_option("--out", a.out, "Output directory")->required();
    app.add_option("--seed", a.seed, "Master RNG seed")->capture_default_str();
    app.add_option("--image-size", a.image_size, "Working resolution")->capture_default_str();
    app.add_option("--weight", a.weight, "Gamma weight w (default: drawn from the set)");
    add_mask_options(&app, a.cfg);
    app.add_flag("--dry-run", a.dry_run, "Print the effective config and exit");
    return parse_and_run(app, argc, argv, [&] { return run_viz(a); });
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << kUsage;
        return 2;
    }
    const std::string cmd = argv[1];
    if (cmd == "--help" || cmd == "-h" || cmd == "help") {
        std::cout << kUsage;
        return 0;
    }
    if (cmd == "synth") return main_synth(argc, argv);
    if (cmd == "train") return main_train(argc, argv);
    if (cmd == "eval") return main_eval(argc, argv);
    if (cmd == "viz") return main_viz(argc, argv);
    std::cerr << "error: unknown subcommand '" << cmd << "'\n\n" << kUsage;
    return 2;
}
