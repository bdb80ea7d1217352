#pragma once

// Independent test oracles. Everything here is deliberately brute force and
// shares no code with the implementation paths it checks.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "ppad/geometry.hpp"
#include "ppad/image.hpp"

namespace oracles {

// O(n^3) convex hull: a directed edge (i, j) is on the CCW hull iff every
// other point lies strictly to its left. Chains the surviving edges starting
// from the lexicographically smallest vertex (the same start the monotone
// chain uses).
inline std::vector<ppad::Point2D> brute_hull(const std::vector<ppad::Point2D>& pts) {
    const std::size_t n = pts.size();
    std::map<std::size_t, std::size_t> next;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            bool all_left = true;
            for (std::size_t k = 0; k < n && all_left; ++k) {
                if (k == i || k == j) continue;
                if (ppad::cross(pts[i], pts[j], pts[k]) <= 0.0) all_left = false;
            }
            if (all_left) next[i] = j;
        }
    }
    std::size_t start = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (pts[i].x < pts[start].x || (pts[i].x == pts[start].x && pts[i].y < pts[start].y))
            start = i;
    std::vector<ppad::Point2D> hull;
    std::size_t v = start;
    do {
        hull.push_back(pts[v]);
        v = next.at(v);
    } while (v != start && hull.size() <= n);
    return hull;
}

// Even-odd crossing test at a pixel center, counting crossings strictly to
// the right with the half-open vertex rule. Matches the scanline fill's
// conventions by construction.
inline bool point_in_polygon(double px, double py, const std::vector<ppad::Point2D>& poly) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % n];
        if ((a.y <= py) == (b.y <= py)) continue;
        const double x = a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y);
        if (px < x) inside = !inside;
    }
    return inside;
}

// O(N * |complement|) squared Euclidean distance oracle.
inline std::vector<double> brute_squared_edt(const ppad::BinaryMask& mask) {
    std::vector<std::pair<int, int>> zeros;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (!mask.at(x, y)) zeros.emplace_back(x, y);
    std::vector<double> out(mask.data.size(), 0.0);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            double best = 1e30;
            for (const auto& [zx, zy] : zeros) {
                const double d = double(x - zx) * (x - zx) + double(y - zy) * (y - zy);
                best = std::min(best, d);
            }
            out[std::size_t(y) * mask.width + x] = best;
        }
    }
    return out;
}

// Pairwise-counting AUC with ties worth half, in percent.
inline double pairwise_auc(const std::vector<std::pair<double, int>>& scores) {
    double wins = 0.0;
    long long pairs = 0;
    for (const auto& [sp, yp] : scores) {
        if (!yp) continue;
        for (const auto& [sn, yn] : scores) {
            if (yn) continue;
            ++pairs;
            if (sp > sn) wins += 1.0;
            else if (sp == sn) wins += 0.5;
        }
    }
    return 100.0 * wins / double(pairs);
}

// Trapezoidal ROC integration over descending unique thresholds, in percent.
inline double trapezoid_auc(const std::vector<std::pair<double, int>>& scores) {
    std::vector<std::pair<double, int>> sorted = scores;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    long long n_pos = 0, n_neg = 0;
    for (const auto& [s, y] : sorted) (y ? n_pos : n_neg) += 1;
    double auc = 0.0;
    double prev_tpr = 0.0, prev_fpr = 0.0;
    long long tp = 0, fp = 0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j].first == sorted[i].first) {
            (sorted[j].second ? tp : fp) += 1;
            ++j;
        }
        const double tpr = double(tp) / double(n_pos);
        const double fpr = double(fp) / double(n_neg);
        auc += 0.5 * (tpr + prev_tpr) * (fpr - prev_fpr);
        prev_tpr = tpr;
        prev_fpr = fpr;
        i = j;
    }
    return 100.0 * auc;
}

} // namespace oracles
