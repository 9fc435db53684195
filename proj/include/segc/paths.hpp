#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "segc/autodiff.hpp"
#include "segc/graph.hpp"
#include "segc/params.hpp"
#include "segc/tensor.hpp"

namespace segc {

// Connectivity features between a candidate event and the matched subgraph:
// simple paths of bounded length, reduced to their edge-type sequences, then a
// multi-hot vector over a fixed vocabulary of those sequences.
//
// Temporal edges are labeled "TEMP" when traversed src->dst and "TEMP_REV"
// when traversed dst->src; argument and relation edges keep their own type in
// both directions. Intermediate path nodes may be events or entities.

using PathType = std::vector<std::string>;

enum class PathLinkKinds { all, temporal_only };

struct PathConfig {
    int max_len = 4;                             // L
    PathLinkKinds link_kinds = PathLinkKinds::all;

    void validate() const;  // 1 <= max_len <= 6 (enumeration guard)
};

struct PathVocabulary {
    std::vector<PathType> paths;        // lexicographically sorted, distinct
    std::map<PathType, int> index;

    int size() const { return static_cast<int>(paths.size()); }
    bool operator==(const PathVocabulary& o) const { return paths == o.paths; }

    static PathVocabulary from_paths(std::set<PathType> all);
};

// All simple paths (node-distinct, endpoints included) from s to t with length
// <= max_len, each reduced to its edge-type sequence.
std::set<PathType> enumerate_paths(const EventGraph& g, const NodeId& s, const NodeId& t,
                                   const PathConfig& cfg);

// Union of enumerate_paths over all ordered event-node pairs of the schema.
PathVocabulary build_vocabulary(const EventGraph& schema, const PathConfig& cfg);

// Multi-hot vector over vocab: bit j set iff path type j connects e to some
// member of the context.
Tensor bag_of_paths(const EventGraph& schema, const NodeId& e, const std::set<NodeId>& context,
                    const PathVocabulary& vocab, const PathConfig& cfg);

// Precomputed per-ordered-pair path-type sets for one schema; makes repeated
// bag_of_paths calls cheap. The vocabulary it carries equals
// build_vocabulary(schema, cfg).
class PathIndex {
public:
    PathIndex(const EventGraph& schema, const PathConfig& cfg);

    const PathVocabulary& vocabulary() const { return vocab_; }
    const PathConfig& config() const { return cfg_; }

    // Path-type indices connecting source event s to target event t.
    const std::vector<int>& pair_paths(const NodeId& s, const NodeId& t) const;

    Tensor bag(const NodeId& e, const std::set<NodeId>& context) const;

private:
    PathConfig cfg_;
    PathVocabulary vocab_;
    std::map<NodeId, std::map<NodeId, std::vector<int>>> pair_paths_;
    static const std::vector<int> kEmpty;
};

// Parameter names of the path head (one hidden relu layer, sigmoid output).
void init_path_mlp(ParamStore& store, int input_dim, int hidden_dim, Rng& rng);
ad::Value predict_path_value(const ad::Value& bag, ParamStore& store);
double predict_path(const Tensor& bag, ParamStore& store);

}  // namespace segc
