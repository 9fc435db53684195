#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "segc/autodiff.hpp"
#include "segc/graph.hpp"
#include "segc/params.hpp"

namespace segc {

// Neighbor correlation model: GCN message passing over the whole schema graph
// (events and entities, all link kinds, direction-agnostic), a readout over
// the matched subgraph's event embeddings, and an MLP head on
// [h_e, h_subgraph].

enum class Readout { sum, average, attention };

struct GnnConfig {
    int num_layers = 3;   // K
    int hidden_dim = 256;
    Readout readout = Readout::sum;

    void validate() const;
};

// node_type -> one-hot index, over every node type appearing in the schema.
struct TypeVocabulary {
    std::vector<std::string> types;  // sorted
    std::map<std::string, int> index;

    int size() const { return static_cast<int>(types.size()); }
    bool operator==(const TypeVocabulary& o) const { return types == o.types; }

    static TypeVocabulary from_graph(const EventGraph& g);
};

struct SchemaEncoding {
    std::vector<NodeId> node_order;     // row i of embeddings is node_order[i]
    std::map<NodeId, int> node_index;
    Tensor embeddings;                  // n x hidden_dim, final layer
    TypeVocabulary vocab;
};

void init_gnn(ParamStore& store, int input_dim, const GnnConfig& cfg, Rng& rng);
void init_neighbor_mlp(ParamStore& store, int embed_dim, int hidden_dim, Rng& rng);

// Differentiable encoding of all schema nodes; rows follow the graph's
// canonical node order. Throws if a node type is missing from the vocabulary.
ad::Value encode_schema_value(const EventGraph& schema, const TypeVocabulary& vocab,
                              ParamStore& store, const GnnConfig& cfg);

SchemaEncoding encode_schema(const EventGraph& schema, const TypeVocabulary& vocab,
                             ParamStore& store, const GnnConfig& cfg);

// Aggregates the context rows of the encoding; attention weighs them by
// normalized dot products against the candidate's embedding.
ad::Value readout_value(const ad::Value& embeddings, const std::map<NodeId, int>& node_index,
                        const std::set<NodeId>& context, const NodeId& candidate,
                        const GnnConfig& cfg);

Tensor readout(const SchemaEncoding& enc, const std::set<NodeId>& context, const NodeId& candidate,
               const GnnConfig& cfg);

ad::Value predict_neighbor_value(const ad::Value& embeddings,
                                 const std::map<NodeId, int>& node_index, const NodeId& candidate,
                                 const std::set<NodeId>& context, ParamStore& store,
                                 const GnnConfig& cfg);

double predict_neighbor(const SchemaEncoding& enc, const NodeId& candidate,
                        const std::set<NodeId>& context, ParamStore& store, const GnnConfig& cfg);

}  // namespace segc
