#include "segc/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "segc/errors.hpp"

namespace segc {

double auc_with_ties(const std::vector<double>& scores, const std::vector<int>& labels,
                     bool* defined) {
    if (scores.size() != labels.size())
        throw ValidationError("auc: " + std::to_string(scores.size()) + " scores vs " +
                              std::to_string(labels.size()) + " labels");
    std::size_t n_pos = 0;
    for (int y : labels) n_pos += y ? 1 : 0;
    const std::size_t n_neg = labels.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        if (defined) *defined = false;
        return 0.0;
    }
    if (defined) *defined = true;

    // Average ranks over tie groups, then the Mann-Whitney statistic.
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    std::vector<double> rank(scores.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg_rank;
        i = j + 1;
    }
    double rank_sum_pos = 0.0;
    for (std::size_t k = 0; k < labels.size(); ++k)
        if (labels[k]) rank_sum_pos += rank[k];
    const double u = rank_sum_pos - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double accuracy_at(const std::vector<double>& scores, const std::vector<int>& labels,
                   double threshold) {
    if (scores.empty()) throw ValidationError("accuracy: empty sample set");
    std::size_t correct = 0;
    for (std::size_t k = 0; k < scores.size(); ++k) {
        const int pred = scores[k] > threshold ? 1 : 0;
        if (pred == labels[k]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(scores.size());
}

double set_jaccard(const std::set<std::string>& predicted, const std::set<std::string>& truth) {
    if (predicted.empty() && truth.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& x : predicted) inter += truth.count(x);
    return static_cast<double>(inter) /
           static_cast<double>(predicted.size() + truth.size() - inter);
}

double set_f1(const std::set<std::string>& predicted, const std::set<std::string>& truth) {
    if (predicted.empty() && truth.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& x : predicted) inter += truth.count(x);
    return 2.0 * static_cast<double>(inter) / static_cast<double>(predicted.size() + truth.size());
}

}  // namespace segc
