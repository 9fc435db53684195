#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "segc/graph.hpp"

namespace segc {

// Maps an instance graph onto the schema with a two-stage heuristic: exact
// event-type candidate filtering, then Jaccard comparison of one-hop type
// neighborhoods for ambiguous candidates. An exhaustive assignment-search
// oracle over the same objective is provided for small-instance validation.

struct TypeNeighborhood {
    std::set<std::string> prev_types;  // types of one-hop previous events
    std::set<std::string> next_types;  // types of one-hop following events
    std::set<std::string> arg_roles;   // argument roles
};

struct MatchResult {
    std::map<NodeId, NodeId> assignment;         // instance event -> schema event (partial)
    std::set<NodeId> matched_subgraph;           // image of assignment
    std::set<NodeId> unmatched;                  // instance events with no candidate
    std::map<NodeId, NodeId> entity_assignment;  // instance entity -> schema entity
};

struct MatchObjective {
    // Pairwise node similarity s_N(i in I, j in S).
    std::function<double(const Node&, const Node&)> node_sim;
    // Pairwise link similarity s_L(link in I, link in S).
    std::function<double(const Link&, const Link&)> link_sim;

    // Default objective for tests: s_N = 1 iff types equal, s_L = 1 iff both
    // links are temporal. Mirrors the correspondence between the two heuristic
    // stages and the two objective terms.
    static MatchObjective type_and_temporal();
    static MatchObjective node_types_only();
};

template <typename T>
double jaccard(const std::set<T>& a, const std::set<T>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t inter = 0;
    for (const T& x : a) inter += b.count(x);
    return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

// Stage 1: schema event nodes whose type equals the instance event's type.
std::set<NodeId> candidate_set(const EventGraph& instance, const NodeId& event_id,
                               const EventGraph& schema);

TypeNeighborhood type_neighborhood(const EventGraph& g, const NodeId& event_id);

// Stage 2: highest total Jaccard of (prev, next, roles); ties broken by a
// seeded uniform choice.
NodeId resolve_ambiguous(const EventGraph& instance, const NodeId& event_id,
                         const std::set<NodeId>& candidates, const EventGraph& schema,
                         std::uint64_t rng_seed);

MatchResult match(const EventGraph& instance, const EventGraph& schema, std::uint64_t rng_seed);

// Objective value of an assignment under obj (both terms of the assignment
// objective). Shared by the oracle and the heuristic-vs-oracle comparisons.
double objective_value(const EventGraph& instance, const EventGraph& schema,
                       const std::map<NodeId, NodeId>& assignment, const MatchObjective& obj);

// Exhaustive search over all many-to-one event assignments. Sizes are capped
// at 8 event nodes per side.
std::pair<MatchResult, double> exact_match_oracle(const EventGraph& instance,
                                                  const EventGraph& schema,
                                                  const MatchObjective& obj);

std::string match_result_to_json(const MatchResult& r);
void save_match_result(const MatchResult& r, const std::string& path);

}  // namespace segc
