#pragma once

#include <set>
#include <string>
#include <vector>

namespace segc {

// Rank-based AUC with ties contributing 1/2. Returns false in `defined` when
// either class is empty (the value is then meaningless and must not be used as
// 0). Invariant under strictly increasing transforms of the scores.
double auc_with_ties(const std::vector<double>& scores, const std::vector<int>& labels,
                     bool* defined = nullptr);

// Fraction of samples where (score > threshold) equals the label.
double accuracy_at(const std::vector<double>& scores, const std::vector<int>& labels,
                   double threshold = 0.5);

// Set-overlap scores used by the completion protocol; both are 1 when both
// sets are empty.
double set_jaccard(const std::set<std::string>& predicted, const std::set<std::string>& truth);
double set_f1(const std::set<std::string>& predicted, const std::set<std::string>& truth);

}  // namespace segc
