#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "ppad/errors.hpp"

namespace ppad {

/// The five per-view probabilities, ordered (left, right, upper, lower, entire).
struct ViewProbabilities {
    std::array<double, 5> values{};
};

/// Max/mean aggregation rule: the maximum wins only when it strictly exceeds
/// the threshold; otherwise the mean of all five values is used. The mean is
/// summed in sorted order so the result is invariant to view permutations
/// down to the last bit.
inline double aggregate(const ViewProbabilities& probs, double eta) {
    std::array<double, 5> sorted = probs.values;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.back() > eta) return sorted.back();
    double sum = 0.0;
    for (double v : sorted) sum += v;
    return sum / double(sorted.size());
}

struct ScoredItem {
    std::string path;
    double probability = 0.0;
    int label = 0; // 1 = abnormal
};

/// Classification metrics, all in percent.
struct Metrics {
    double acc = 0.0;
    double auc = 0.0;
    double f1 = 0.0;
    double ap = 0.0;
};

/// ACC and F1 at decision threshold 0.5 (probability >= 0.5 counts as
/// abnormal), AUC by midrank (tie-aware pairwise probability), AP as
/// precision-weighted recall increments over descending unique scores.
inline Metrics compute_metrics(const std::vector<std::pair<double, int>>& scores) {
    long long n_pos = 0, n_neg = 0;
    for (const auto& [s, y] : scores) (y ? n_pos : n_neg) += 1;
    if (n_pos == 0 || n_neg == 0)
        throw SingleClassInput("AUC/AP need both classes present");
    const double n = double(scores.size());

    // Threshold 0.5 counts.
    long long tp = 0, tn = 0, fp = 0, fn = 0;
    for (const auto& [s, y] : scores) {
        const bool pred = s >= 0.5;
        if (pred && y) ++tp;
        else if (pred && !y) ++fp;
        else if (!pred && y) ++fn;
        else ++tn;
    }
    Metrics m;
    m.acc = 100.0 * double(tp + tn) / n;
    m.f1 = (2 * tp + fp + fn) == 0 ? 0.0 : 100.0 * 2.0 * tp / double(2 * tp + fp + fn);

    // AUC via midranks: U statistic normalized by n_pos * n_neg.
    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a].first < scores[b].first;
    });
    double rank_sum_pos = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]].first == scores[order[i]].first) ++j;
        const double midrank = 0.5 * double(i + 1 + j); // ranks are 1-based
        for (std::size_t k = i; k < j; ++k)
            if (scores[order[k]].second) rank_sum_pos += midrank;
        i = j;
    }
    m.auc = 100.0 * (rank_sum_pos - 0.5 * double(n_pos) * double(n_pos + 1)) /
            (double(n_pos) * double(n_neg));

    // AP over descending unique thresholds; ties enter as one block.
    double ap = 0.0;
    long long cum_tp = 0, cum_fp = 0;
    for (std::size_t i = order.size(); i > 0;) {
        std::size_t j = i;
        while (j > 0 && scores[order[j - 1]].first == scores[order[i - 1]].first) --j;
        long long block_tp = 0, block_fp = 0;
        for (std::size_t k = j; k < i; ++k)
            (scores[order[k]].second ? block_tp : block_fp) += 1;
        const long long prev_tp = cum_tp;
        cum_tp += block_tp;
        cum_fp += block_fp;
        const double precision = double(cum_tp) / double(cum_tp + cum_fp);
        ap += precision * double(cum_tp - prev_tp) / double(n_pos);
        i = j;
    }
    m.ap = 100.0 * ap;
    return m;
}

} // namespace ppad
