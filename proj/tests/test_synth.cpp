#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "ppad/distance.hpp"
#include "ppad/gamma.hpp"
#include "ppad/perlin.hpp"
#include "ppad/synth.hpp"

using namespace ppad;

namespace {

BinaryMask random_mask(int w, int h, Rng& rng) {
    // Random blob with guaranteed mask and complement pixels.
    for (;;) {
        BinaryMask m(w, h);
        const double thr = rng.uniform(0.35, 0.65);
        const GrayImage f = perlin_field(w, h, rng.next_u64(), 2 + int(rng.uniform_int(3)));
        for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] = f.data[i] > thr ? 1 : 0;
        const long long c = m.count();
        if (c > 0 && c < int(m.data.size())) return m;
    }
}

BinaryMask disk_mask(int size, double radius) {
    BinaryMask m(size, size);
    const double c = (size - 1) / 2.0;
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            if ((x - c) * (x - c) + (y - c) * (y - c) <= radius * radius) m.at(x, y) = 1;
    return m;
}

} // namespace

TEST_CASE("distance transform on a centered 3x3 block") {
    BinaryMask mask(5, 5);
    for (int y = 1; y <= 3; ++y)
        for (int x = 1; x <= 3; ++x) mask.at(x, y) = 1;
    const auto d = distance_transform(mask);
    REQUIRE(d[2 * 5 + 2] == 2.0); // center
    for (const auto& [x, y] : {std::pair{1, 1}, {2, 1}, {3, 1}, {1, 2}, {3, 2},
                               {1, 3}, {2, 3}, {3, 3}})
        REQUIRE(d[std::size_t(y) * 5 + x] == 1.0); // ring
    for (int x = 0; x < 5; ++x) REQUIRE(d[x] == 0.0); // outside
}

TEST_CASE("distance transform of a single pixel is 1") {
    BinaryMask mask(7, 7);
    mask.at(3, 4) = 1;
    const auto d = distance_transform(mask);
    for (int y = 0; y < 7; ++y)
        for (int x = 0; x < 7; ++x)
            REQUIRE(d[std::size_t(y) * 7 + x] == ((x == 3 && y == 4) ? 1.0 : 0.0));
}

TEST_CASE("distance transform equals the brute-force oracle exactly") {
    Rng rng(808);
    for (int trial = 0; trial < 200; ++trial) {
        const int w = 2 + int(rng.uniform_int(31));
        const int h = 2 + int(rng.uniform_int(31));
        const BinaryMask mask = random_mask(w, h, rng);
        const auto fast = squared_distance_transform(mask);
        const auto slow = oracles::brute_squared_edt(mask);
        REQUIRE(fast == slow); // zero tolerance
    }
}

TEST_CASE("distance transform error paths") {
    REQUIRE_THROWS_AS(distance_transform(BinaryMask(4, 4)), EmptyMask);
    REQUIRE_THROWS_AS(distance_transform(BinaryMask(4, 4, 1)), EmptyMask);
}

TEST_CASE("gamma field values follow the distance-weighted formula") {
    const BinaryMask mask = disk_mask(21, 6.0);

    SECTION("deepest pixel with w = 2 gets gamma = 3") {
        const GammaField f = gamma_field(mask, 2.0);
        double mx = 0.0;
        for (std::size_t i = 0; i < f.gamma.size(); ++i)
            if (mask.data[i]) mx = std::max(mx, f.gamma[i]);
        REQUIRE(mx == 3.0);
    }
    SECTION("w = 0 gives the identity field") {
        const GammaField f = gamma_field(mask, 0.0);
        for (double g : f.gamma) REQUIRE(g == 1.0);
    }
    SECTION("w = -0.999 bottoms out at 0.001") {
        const GammaField f = gamma_field(mask, -0.999);
        double mn = 1.0;
        for (std::size_t i = 0; i < f.gamma.size(); ++i)
            if (mask.data[i]) mn = std::min(mn, f.gamma[i]);
        REQUIRE(mn == Catch::Approx(0.001).margin(1e-12));
        REQUIRE(mn > 0.0);
    }
    SECTION("invalid weights are rejected") {
        REQUIRE_THROWS_AS(gamma_field(mask, -1.0), InvalidWeight);
        REQUIRE_THROWS_AS(gamma_field(mask, -1.5), InvalidWeight);
    }
}

TEST_CASE("gamma field invariants over random masks and the default weights") {
    Rng rng(515);
    for (int trial = 0; trial < 50; ++trial) {
        const BinaryMask mask = random_mask(24, 24, rng);
        for (double w : {-0.999, -0.99, 2.0, 3.0}) {
            const GammaField f = gamma_field(mask, w);
            const double lo = std::min(1.0, 1.0 + w);
            const double hi = std::max(1.0, 1.0 + w);
            for (std::size_t i = 0; i < f.gamma.size(); ++i) {
                REQUIRE(f.gamma[i] > 0.0);
                if (mask.data[i]) {
                    REQUIRE(f.gamma[i] >= lo);
                    REQUIRE(f.gamma[i] <= hi);
                } else {
                    REQUIRE(f.gamma[i] == 1.0);
                }
            }
        }
    }
}

TEST_CASE("boundary step shrinks as masks grow (seamless insertion)") {
    const double w = 3.0;
    double prev_step = 1e9;
    for (double radius : {3.0, 6.0, 12.0}) {
        const BinaryMask mask = disk_mask(31, radius);
        const GammaField f = gamma_field(mask, w);
        const auto d = distance_transform(mask);
        double max_d = 0.0;
        for (double v : d) max_d = std::max(max_d, v);
        double step = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (mask.data[i] && d[i] == 1.0) {
                REQUIRE(std::abs(f.gamma[i] - 1.0) <= std::abs(w) / max_d + 1e-12);
                step = std::max(step, std::abs(f.gamma[i] - 1.0));
            }
        REQUIRE(step < prev_step);
        prev_step = step;
    }
}

TEST_CASE("apply_gamma computes per-pixel powers") {
    GrayImage img{2, 1};
    img.data = {0.25, 0.8};
    GammaField f{2, 1, {2.0, 1.0}};
    const GrayImage out = apply_gamma(img, f);
    REQUIRE(out.data[0] == 0.0625);
    REQUIRE(out.data[1] == 0.8); // gamma = 1 passes through bit-identically
}

TEST_CASE("apply_gamma identity and fixed points") {
    Rng rng(99);
    GrayImage img{8, 8};
    for (auto& v : img.data) v = rng.uniform();
    img.data[0] = 0.0;
    img.data[1] = 1.0;

    GammaField ones{8, 8, std::vector<double>(64, 1.0)};
    REQUIRE(apply_gamma(img, ones).data == img.data);

    GammaField strong{8, 8, std::vector<double>(64, 0.37)};
    const GrayImage out = apply_gamma(img, strong);
    REQUIRE(out.data[0] == 0.0);
    REQUIRE(out.data[1] == 1.0);
    for (double v : out.data) {
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 1.0);
    }
}

TEST_CASE("apply_gamma rejects mismatched shapes") {
    GrayImage img{4, 4};
    GammaField f{2, 2, std::vector<double>(4, 1.0)};
    REQUIRE_THROWS_AS(apply_gamma(img, f), DimensionMismatch);
}

TEST_CASE("per-pixel intensity remap is monotone") {
    Rng rng(4242);
    const BinaryMask mask = random_mask(24, 24, rng);
    for (double w : {-0.999, -0.99, 2.0, 3.0}) {
        const GammaField f = gamma_field(mask, w);
        // Sample a few gammas, including the extremes, and walk a ramp.
        std::vector<double> gammas = {1.0};
        for (std::size_t i = 0; i < f.gamma.size(); ++i)
            if (mask.data[i]) gammas.push_back(f.gamma[i]);
        std::sort(gammas.begin(), gammas.end());
        for (double g : {gammas.front(), gammas[gammas.size() / 2], gammas.back()}) {
            double prev = 0.0;
            for (int level = 0; level < 256; ++level) {
                const double x = level / 255.0;
                const double y = x == 0.0 ? 0.0 : std::pow(x, g);
                REQUIRE(y >= prev);
                prev = y;
            }
        }
    }
}

TEST_CASE("synthesize with zero probability is the identity") {
    const GrayImage img = perlin_field(32, 32, 5, 4);
    const BinaryMask region(32, 32, 1);
    SynthConfig cfg;
    cfg.apply_probability = 0.0;
    cfg.seed = 9;
    const SynthResult res = synthesize(img, region, cfg);
    REQUIRE(res.label == SynthLabel::normal);
    REQUIRE(res.image.data == img.data);
    REQUIRE(res.mask.empty());
}

TEST_CASE("synthesize with w = 0 changes the label but not the pixels") {
    const GrayImage img = perlin_field(32, 32, 6, 4);
    const BinaryMask region(32, 32, 1);
    SynthConfig cfg;
    cfg.apply_probability = 1.0;
    cfg.weight_choices = {0.0};
    cfg.seed = 10;
    const SynthResult res = synthesize(img, region, cfg);
    REQUIRE(res.label == SynthLabel::abnormal);
    REQUIRE_FALSE(res.mask.empty());
    REQUIRE(res.image.data == img.data);
}

TEST_CASE("synthesize touches only pixels inside the mask") {
    const GrayImage img = perlin_field(48, 48, 7, 4);
    const BinaryMask region(48, 48, 1);
    SynthConfig cfg;
    cfg.apply_probability = 1.0;
    cfg.weight_choices = {3.0};
    cfg.seed = 11;
    const SynthResult res = synthesize(img, region, cfg);
    REQUIRE(res.label == SynthLabel::abnormal);
    bool changed = false;
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        if (res.mask.data[i]) {
            changed = changed || res.image.data[i] != img.data[i];
        } else {
            REQUIRE(res.image.data[i] == img.data[i]); // L-inf outside is exactly 0
        }
    }
    REQUIRE(changed);
}

TEST_CASE("synthesize is a pure function of the seed") {
    const GrayImage img = perlin_field(32, 32, 8, 4);
    const BinaryMask region(32, 32, 1);
    SynthConfig cfg;
    cfg.seed = 123;
    const SynthResult a = synthesize(img, region, cfg);
    const SynthResult b = synthesize(img, region, cfg);
    REQUIRE(a.label == b.label);
    REQUIRE(a.image.data == b.image.data);
    REQUIRE(a.mask.data == b.mask.data);
}

TEST_CASE("synth config validation") {
    SynthConfig cfg;
    cfg.weight_choices = {2.0, -1.0};
    REQUIRE_THROWS_AS(cfg.validate(), InvalidWeight);
    cfg.weight_choices = {2.0};
    cfg.apply_probability = 1.5;
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
}
