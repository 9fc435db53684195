#include "segc/neighbor_model.hpp"

#include <cmath>

#include "segc/errors.hpp"

namespace segc {

void GnnConfig::validate() const {
    if (num_layers < 1) throw ValidationError("gnn config: num_layers must be >= 1");
    if (hidden_dim < 1) throw ValidationError("gnn config: hidden_dim must be >= 1");
}

TypeVocabulary TypeVocabulary::from_graph(const EventGraph& g) {
    TypeVocabulary v;
    std::set<std::string> types;
    for (const Node& n : g.nodes()) types.insert(n.type);
    v.types.assign(types.begin(), types.end());
    for (int i = 0; i < static_cast<int>(v.types.size()); ++i) v.index.emplace(v.types[i], i);
    return v;
}

void init_gnn(ParamStore& store, int input_dim, const GnnConfig& cfg, Rng& rng) {
    cfg.validate();
    int in = input_dim;
    for (int k = 1; k <= cfg.num_layers; ++k) {
        glorot_init(store, "gnn.w" + std::to_string(k), in, cfg.hidden_dim, rng);
        store.create("gnn.b" + std::to_string(k), 1, cfg.hidden_dim);
        in = cfg.hidden_dim;
    }
}

void init_neighbor_mlp(ParamStore& store, int embed_dim, int hidden_dim, Rng& rng) {
    glorot_init(store, "mlp_neighbor.w1", 2 * embed_dim, hidden_dim, rng);
    store.create("mlp_neighbor.b1", 1, hidden_dim);
    glorot_init(store, "mlp_neighbor.w2", hidden_dim, 1, rng);
    store.create("mlp_neighbor.b2", 1, 1);
}

namespace {

// Symmetrically normalized adjacency with self-loops: a_ij = 1/sqrt(d_i d_j)
// for j in N(i) or j = i, degrees counted with the self-loop. All link kinds
// participate, untyped, direction-agnostic; parallel edges collapse.
Tensor normalized_adjacency(const EventGraph& g) {
    const int n = static_cast<int>(g.nodes().size());
    std::vector<std::set<int>> nbrs(n);
    for (const Link& l : g.links()) {
        const int a = g.node_index(l.src);
        const int b = g.node_index(l.dst);
        nbrs[a].insert(b);
        nbrs[b].insert(a);
    }
    std::vector<double> inv_sqrt_deg(n);
    for (int i = 0; i < n; ++i)
        inv_sqrt_deg[i] = 1.0 / std::sqrt(static_cast<double>(nbrs[i].size() + 1));
    Tensor a(n, n);
    for (int i = 0; i < n; ++i) {
        a.at(i, i) = inv_sqrt_deg[i] * inv_sqrt_deg[i];
        for (int j : nbrs[i]) a.at(i, j) = inv_sqrt_deg[i] * inv_sqrt_deg[j];
    }
    return a;
}

Tensor one_hot_features(const EventGraph& g, const TypeVocabulary& vocab) {
    Tensor h(static_cast<int>(g.nodes().size()), vocab.size());
    for (int i = 0; i < static_cast<int>(g.nodes().size()); ++i) {
        auto it = vocab.index.find(g.nodes()[i].type);
        if (it == vocab.index.end())
            throw ValidationError("encode_schema: node type '" + g.nodes()[i].type +
                                  "' is absent from the feature vocabulary");
        h.at(i, it->second) = 1.0;
    }
    return h;
}

std::vector<int> context_rows(const std::map<NodeId, int>& node_index,
                              const std::set<NodeId>& context) {
    if (context.empty()) throw ValidationError("readout: empty context subgraph");
    std::vector<int> rows;
    for (const NodeId& id : context) {
        auto it = node_index.find(id);
        if (it == node_index.end()) throw ValidationError("readout: unknown node '" + id + "'");
        rows.push_back(it->second);
    }
    return rows;
}

}  // namespace

ad::Value encode_schema_value(const EventGraph& schema, const TypeVocabulary& vocab,
                              ParamStore& store, const GnnConfig& cfg) {
    cfg.validate();
    ad::Value adj = ad::constant(normalized_adjacency(schema));
    ad::Value h = ad::constant(one_hot_features(schema, vocab));
    for (int k = 1; k <= cfg.num_layers; ++k) {
        ad::Value agg = ad::matmul(adj, h);
        h = ad::relu(ad::add_bias(ad::matmul(agg, store.use("gnn.w" + std::to_string(k))),
                                  store.use("gnn.b" + std::to_string(k))));
    }
    return h;
}

SchemaEncoding encode_schema(const EventGraph& schema, const TypeVocabulary& vocab,
                             ParamStore& store, const GnnConfig& cfg) {
    SchemaEncoding enc;
    enc.vocab = vocab;
    for (const Node& n : schema.nodes()) {
        enc.node_index.emplace(n.id, static_cast<int>(enc.node_order.size()));
        enc.node_order.push_back(n.id);
    }
    enc.embeddings = encode_schema_value(schema, vocab, store, cfg)->val;
    return enc;
}

ad::Value readout_value(const ad::Value& embeddings, const std::map<NodeId, int>& node_index,
                        const std::set<NodeId>& context, const NodeId& candidate,
                        const GnnConfig& cfg) {
    const std::vector<int> rows = context_rows(node_index, context);
    ad::Value members = ad::select_rows(embeddings, rows);
    const int n = static_cast<int>(rows.size());
    switch (cfg.readout) {
        case Readout::sum:
            return ad::weighted_sum(members, std::vector<double>(n, 1.0));
        case Readout::average:
            return ad::weighted_sum(members, std::vector<double>(n, 1.0 / n));
        case Readout::attention: {
            auto it = node_index.find(candidate);
            if (it == node_index.end())
                throw ValidationError("readout: unknown candidate '" + candidate + "'");
            ad::Value cand = ad::select_rows(embeddings, {it->second});
            ad::Value dots = ad::matmul(members, ad::transpose(cand));  // n x 1
            ad::Value denom = ad::sum_all(dots);
            // The literal ratio is undefined near a zero denominator; fall
            // back to uniform weights there (treated as constants).
            if (std::fabs(denom->val.item()) < 1e-12)
                return ad::weighted_sum(members, std::vector<double>(n, 1.0 / n));
            return ad::weighted_sum(members, ad::div_scalar(dots, denom));
        }
    }
    throw ValidationError("readout: unknown mode");
}

Tensor readout(const SchemaEncoding& enc, const std::set<NodeId>& context, const NodeId& candidate,
               const GnnConfig& cfg) {
    return readout_value(ad::constant(enc.embeddings), enc.node_index, context, candidate, cfg)->val;
}

ad::Value predict_neighbor_value(const ad::Value& embeddings,
                                 const std::map<NodeId, int>& node_index, const NodeId& candidate,
                                 const std::set<NodeId>& context, ParamStore& store,
                                 const GnnConfig& cfg) {
    if (context.count(candidate))
        throw ValidationError("predict_neighbor: candidate '" + candidate +
                              "' is inside the context");
    auto it = node_index.find(candidate);
    if (it == node_index.end())
        throw ValidationError("predict_neighbor: unknown candidate '" + candidate + "'");
    ad::Value cand = ad::select_rows(embeddings, {it->second});
    ad::Value ctx = readout_value(embeddings, node_index, context, candidate, cfg);
    ad::Value x = ad::concat(cand, ctx);
    ad::Value h = ad::relu(ad::add_bias(ad::matmul(x, store.use("mlp_neighbor.w1")),
                                        store.use("mlp_neighbor.b1")));
    return ad::sigmoid(ad::add_bias(ad::matmul(h, store.use("mlp_neighbor.w2")),
                                    store.use("mlp_neighbor.b2")));
}

double predict_neighbor(const SchemaEncoding& enc, const NodeId& candidate,
                        const std::set<NodeId>& context, ParamStore& store, const GnnConfig& cfg) {
    return predict_neighbor_value(ad::constant(enc.embeddings), enc.node_index, candidate, context,
                                  store, cfg)
        ->val.item();
}

}  // namespace segc
