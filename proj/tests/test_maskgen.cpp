#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "oracles.hpp"
#include "ppad/maskgen.hpp"
#include "ppad/perlin.hpp"
#include "ppad/raster.hpp"

using namespace ppad;

namespace {

bool same_cycle(const std::vector<Point2D>& a, const std::vector<Point2D>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].x != b[i].x || a[i].y != b[i].y) return false;
    return true;
}

bool is_single_component4(const BinaryMask& mask) {
    const BinaryMask largest = largest_component4(mask);
    return !mask.empty() && largest.data == mask.data;
}

} // namespace

TEST_CASE("perlin field is deterministic per seed") {
    const GrayImage a = perlin_field(32, 24, 99, 4);
    const GrayImage b = perlin_field(32, 24, 99, 4);
    REQUIRE(a.data == b.data);
    const GrayImage c = perlin_field(32, 24, 100, 4);
    REQUIRE(a.data != c.data);
}

TEST_CASE("perlin field stays inside [0, 1] across seeds") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const GrayImage f = perlin_field(32, 32, seed, 4);
        for (double v : f.data) {
            REQUIRE(v >= 0.0);
            REQUIRE(v <= 1.0);
        }
    }
}

TEST_CASE("raw perlin noise vanishes on the integer lattice") {
    const PerlinNoise noise(1234);
    for (int x = -3; x <= 3; ++x)
        for (int y = -3; y <= 3; ++y)
            REQUIRE(noise.raw(double(x), double(y)) == 0.0);
}

TEST_CASE("sample_points with a flat field draws distinct in-region pixels") {
    const GrayImage field{16, 16, 1.0};
    const BinaryMask region(16, 16, 1);
    const auto pts = sample_points(field, region, 10, 5);
    REQUIRE(pts.size() == 10);
    std::set<std::pair<double, double>> seen;
    for (const auto& p : pts) {
        REQUIRE(p.x >= 0.0);
        REQUIRE(p.x < 16.0);
        REQUIRE(p.y >= 0.0);
        REQUIRE(p.y < 16.0);
        seen.insert({p.x, p.y});
    }
    REQUIRE(seen.size() == 10);
}

TEST_CASE("sample_points is forced when the region has exactly n pixels") {
    BinaryMask region(8, 8);
    std::set<std::pair<double, double>> expect;
    for (int i = 0; i < 10; ++i) {
        region.at(i % 4, i / 4) = 1;
        expect.insert({double(i % 4), double(i / 4)});
    }
    REQUIRE(region.count() == 10);
    const GrayImage field = perlin_field(8, 8, 3, 2);
    const auto pts = sample_points(field, region, 10, 7);
    std::set<std::pair<double, double>> got;
    for (const auto& p : pts) got.insert({p.x, p.y});
    REQUIRE(got == expect);
}

TEST_CASE("sample_points never accepts zero-probability pixels") {
    GrayImage field{32, 32, 0.0};
    for (int x = 0; x < 32; ++x) field.at(x, 5) = 1.0; // a single live row
    const BinaryMask region(32, 32, 1);
    for (std::uint64_t seed = 0; seed < 100; ++seed) { // 1000 draws total
        const auto pts = sample_points(field, region, 10, seed);
        for (const auto& p : pts) REQUIRE(p.y == 5.0);
    }
}

TEST_CASE("sample_points error paths") {
    const GrayImage field{4, 4, 1.0};
    BinaryMask region(4, 4);
    region.at(0, 0) = 1;
    REQUIRE_THROWS_AS(sample_points(field, region, 3, 0), RegionTooSmall);

    const GrayImage dead{4, 4, 0.0};
    const BinaryMask all(4, 4, 1);
    REQUIRE_THROWS_AS(sample_points(dead, all, 3, 0), DegenerateField);
}

TEST_CASE("convex hull drops interior points and orders CCW") {
    const std::vector<Point2D> square = {
        {0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
    const auto hull = convex_hull(square);
    REQUIRE(hull.size() == 4);
    REQUIRE(same_cycle(hull, {{0, 0}, {1, 0}, {1, 1}, {0, 1}}));

    const std::vector<Point2D> tri = {{2, 1}, {0, 0}, {1, 3}};
    const auto h3 = convex_hull(tri);
    REQUIRE(h3.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) // CCW turns only
        REQUIRE(cross(h3[i], h3[(i + 1) % 3], h3[(i + 2) % 3]) > 0.0);
}

TEST_CASE("convex hull rejects degenerate input") {
    REQUIRE_THROWS_AS(convex_hull({{0, 0}, {1, 1}}), DegenerateInput);
    REQUIRE_THROWS_AS(convex_hull({{0, 0}, {1, 1}, {2, 2}, {3, 3}}), DegenerateInput);
    REQUIRE_THROWS_AS(convex_hull({{1, 1}, {1, 1}, {1, 1}}), DegenerateInput);
}

TEST_CASE("convex hull matches the O(n^3) oracle on random input") {
    Rng rng(2024);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 3 + int(rng.uniform_int(10)); // up to 12 points
        std::vector<Point2D> pts(static_cast<std::size_t>(n));
        for (auto& p : pts) p = {rng.uniform(0.0, 100.0), rng.uniform(0.0, 100.0)};
        const auto hull = convex_hull(pts);
        const auto expect = oracles::brute_hull(pts);
        INFO("trial " << trial << " n=" << n);
        REQUIRE(same_cycle(hull, expect));
    }
}

TEST_CASE("bezier_edges with zero probability returns the hull") {
    const std::vector<Point2D> hull = {{0, 0}, {10, 0}, {10, 10}, {0, 10}};
    Rng rng(1);
    const auto curve = bezier_edges(hull, 0.0, 0.5, rng);
    REQUIRE(same_cycle(curve, hull));
}

TEST_CASE("zero control offset collapses the bezier onto the chord") {
    const std::vector<Point2D> hull = {{0, 0}, {9, 0}, {9, 9}, {0, 9}};
    Rng rng(5);
    const auto curve = bezier_edges(hull, 1.0, 0.0, rng);
    REQUIRE(curve.size() > hull.size()); // every edge got sampled densely
    for (const auto& p : curve) {
        const double d = std::min(std::min(std::abs(p.x), std::abs(p.x - 9.0)),
                                  std::min(std::abs(p.y), std::abs(p.y - 9.0)));
        REQUIRE(d < 1e-9); // collinear with one of the chords
    }
}

TEST_CASE("quadratic bezier hits its endpoints exactly") {
    const Point2D p0{1.5, -2.0}, c{40.0, 13.0}, p2{-7.25, 9.0};
    const Point2D b0 = bezier_point(p0, c, p2, 0.0);
    const Point2D b1 = bezier_point(p0, c, p2, 1.0);
    REQUIRE(b0.x == p0.x);
    REQUIRE(b0.y == p0.y);
    REQUIRE(b1.x == p2.x);
    REQUIRE(b1.y == p2.y);
}

TEST_CASE("axis-aligned square fills exactly side^2 pixels") {
    const std::vector<Point2D> square = {{10, 10}, {20, 10}, {20, 20}, {10, 20}};
    const BinaryMask mask = rasterize_fill(square, 32, 32);
    REQUIRE(mask.count() == 100);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x)
            REQUIRE(bool(mask.at(x, y)) ==
                    oracles::point_in_polygon(double(x), double(y), square));
}

TEST_CASE("triangle fill matches the pixel-center oracle") {
    const std::vector<Point2D> tri = {{0, 0}, {4, 0}, {0, 4}};
    const BinaryMask mask = rasterize_fill(tri, 8, 8);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
            REQUIRE(bool(mask.at(x, y)) ==
                    oracles::point_in_polygon(double(x), double(y), tri));
}

TEST_CASE("random pure polygons agree with the point-in-polygon oracle") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point2D> pts(std::size_t(5 + rng.uniform_int(6)));
        for (auto& p : pts) p = {rng.uniform(1.0, 30.0), rng.uniform(1.0, 30.0)};
        std::vector<Point2D> hull;
        try {
            hull = convex_hull(pts);
        } catch (const DegenerateInput&) {
            continue;
        }
        BinaryMask mask{};
        try {
            mask = rasterize_fill(hull, 32, 32);
        } catch (const EmptyInterior&) {
            for (int y = 0; y < 32; ++y)
                for (int x = 0; x < 32; ++x)
                    REQUIRE_FALSE(oracles::point_in_polygon(double(x), double(y), hull));
            continue;
        }
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x)
                REQUIRE(bool(mask.at(x, y)) ==
                        oracles::point_in_polygon(double(x), double(y), hull));
    }
}

TEST_CASE("rasterize_fill rejects curves that enclose no pixel center") {
    const std::vector<Point2D> tiny = {{0.1, 0.1}, {0.4, 0.1}, {0.25, 0.4}};
    REQUIRE_THROWS_AS(rasterize_fill(tiny, 8, 8), EmptyInterior);
}

TEST_CASE("generate_mask is deterministic and honors its contract") {
    MaskSpec spec;
    spec.region = BinaryMask(64, 64, 1);
    spec.seed = 31337;
    const BinaryMask a = generate_mask(spec);
    const BinaryMask b = generate_mask(spec);
    REQUIRE(a.data == b.data);

    const long long region_area = spec.region.count();
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        spec.seed = seed;
        const BinaryMask mask = generate_mask(spec);
        const double frac = double(mask.count()) / double(region_area);
        REQUIRE(frac >= spec.area_min);
        REQUIRE(frac <= spec.area_max);
        REQUIRE(is_single_component4(mask));
        for (std::size_t i = 0; i < mask.data.size(); ++i)
            if (mask.data[i]) REQUIRE(spec.region.data[i] == 1);
    }
}

TEST_CASE("generate_mask stays inside a half-image region") {
    MaskSpec spec;
    spec.region = BinaryMask(64, 64);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 32; ++x) spec.region.at(x, y) = 1;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        spec.seed = seed;
        const BinaryMask mask = generate_mask(spec);
        REQUIRE_FALSE(mask.empty());
        for (int y = 0; y < 64; ++y)
            for (int x = 32; x < 64; ++x) REQUIRE(mask.at(x, y) == 0);
    }
}

TEST_CASE("generate_mask fails cleanly on unattainable area bounds") {
    MaskSpec spec;
    spec.region = BinaryMask(32, 32, 1);
    spec.area_min = 0.995; // a hull of pixel centers can never cover this
    spec.area_max = 1.0;
    REQUIRE_THROWS_AS(generate_mask(spec), GenerationFailed);
}

TEST_CASE("mask spec validation") {
    MaskSpec spec;
    spec.region = BinaryMask(16, 16, 1);
    spec.num_points = 2;
    REQUIRE_THROWS_AS(generate_mask(spec), ConfigError);
    spec.num_points = 10;
    spec.area_min = 0.5;
    spec.area_max = 0.25;
    REQUIRE_THROWS_AS(generate_mask(spec), ConfigError);
}
