#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "segc/graph.hpp"
#include "segc/trainer.hpp"

namespace segc {

// Completion loop: repeatedly add the highest-scoring candidate at temporal
// distance 1 from the matched subgraph, as long as its score clears the
// threshold. Each accepted candidate materializes a new instance event node
// typed after its schema node, copies the schema's temporal and argument
// links toward already-present nodes, and joins the subgraph before the next
// round is scored (bootstrapping).

using ScoreFn = std::function<double(const NodeId&, const std::set<NodeId>&)>;

struct InferenceConfig {
    double threshold = 0.5;
    int max_additions = -1;  // < 0: bounded only by the schema's event count

    void validate() const;
};

struct AddedEvent {
    NodeId instance_id;
    NodeId schema_id;
    double score = 0.0;
};

struct CompletionResult {
    EventGraph completed;
    std::vector<AddedEvent> added_events;     // insertion order
    std::set<NodeId> final_subgraph;          // schema events, after bootstrapping
    std::set<NodeId> initial_subgraph;        // matched image before any addition
    bool unmatched_input = false;             // nothing matched; input returned unchanged
    std::vector<std::string> log;
};

// Candidates adjacent to the subgraph via a temporal link in either direction.
std::set<NodeId> distance1_candidates(const EventGraph& schema, const std::set<NodeId>& subgraph,
                                      const std::set<NodeId>& candidates);

CompletionResult complete(const EventGraph& instance, const EventGraph& schema,
                          const ScoreFn& scorer, const InferenceConfig& cfg, std::uint64_t seed);

// Convenience: score with a trained model.
CompletionResult complete(const EventGraph& instance, const EventGraph& schema, Model& model,
                          const InferenceConfig& cfg, std::uint64_t seed);

// Writes the completed graph plus a sidecar (<path> + ".additions.json")
// listing added events with scores.
void save_completion(const CompletionResult& r, const std::string& graph_path);

}  // namespace segc
