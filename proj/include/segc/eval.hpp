#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "segc/graph.hpp"
#include "segc/inference.hpp"
#include "segc/trainer.hpp"

namespace segc {

// Two evaluation protocols: binary classification over masked-event samples
// (accuracy at 0.5 plus rank AUC with ties at 1/2), and hide-and-predict
// graph completion (Jaccard / F1 of the predicted schema-node set against the
// matched image of the hidden nodes).

struct BinaryEvalReport {
    double accuracy = 0.0;
    double auc = 0.0;
    bool auc_defined = false;  // false when either class is empty
    int n_pos = 0;
    int n_neg = 0;
    std::vector<double> scores;  // aligned with labels
    std::vector<int> labels;
    std::vector<std::string> warnings;
};

struct CompletionEvalReport {
    struct PerGraph {
        std::string graph_id;
        double jaccard = 0.0;
        double f1 = 0.0;
        std::set<NodeId> hidden_truth;  // schema-node image of the hidden events
        std::set<NodeId> predicted;
        bool flagged = false;  // remainder matched nothing; scored 0
    };
    std::vector<PerGraph> per_graph;  // graph-id order
    double mean_jaccard = 0.0;
    double mean_f1 = 0.0;
    std::vector<std::string> warnings;
};

BinaryEvalReport eval_binary(const std::vector<EventGraph>& test_instances,
                             const EventGraph& schema, const ScoreFn& scorer, std::uint64_t seed);

CompletionEvalReport eval_completion(const std::vector<EventGraph>& test_instances,
                                     const EventGraph& schema, const ScoreFn& scorer,
                                     const InferenceConfig& infer_cfg, double hide_frac,
                                     std::uint64_t seed, int jobs = 1);

// Rule-based baseline scorers.
ScoreFn add_all_scorer();
ScoreFn add_neighbor_scorer(const EventGraph& schema);
ScoreFn model_scorer(Model& model, const EventGraph& schema);

std::string binary_report_to_tsv(const BinaryEvalReport& r);
std::string binary_report_to_json(const BinaryEvalReport& r);
std::string completion_report_to_tsv(const CompletionEvalReport& r);
std::string completion_report_to_json(const CompletionEvalReport& r);

// Score distribution data for external plotting: one "score<TAB>label" line
// per sample.
std::string score_distribution_tsv(const BinaryEvalReport& r);

}  // namespace segc
