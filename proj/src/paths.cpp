#include "segc/paths.hpp"

#include <algorithm>

#include "segc/errors.hpp"

namespace segc {

void PathConfig::validate() const {
    if (max_len < 1) throw ValidationError("path config: max_len must be >= 1");
    if (max_len > 6)
        throw ValidationError("path config: max_len " + std::to_string(max_len) +
                              " exceeds the enumeration guard of 6");
}

PathVocabulary PathVocabulary::from_paths(std::set<PathType> all) {
    PathVocabulary v;
    v.paths.assign(all.begin(), all.end());  // std::set iterates in lexicographic order
    for (int i = 0; i < static_cast<int>(v.paths.size()); ++i) v.index.emplace(v.paths[i], i);
    return v;
}

namespace {

struct Hop {
    int neighbor;       // node index
    std::string label;  // traversal label
};

// Per-node traversal options under the configured link kinds.
std::vector<std::vector<Hop>> build_hops(const EventGraph& g, const PathConfig& cfg) {
    std::vector<std::vector<Hop>> hops(g.nodes().size());
    for (const Link& l : g.links()) {
        if (cfg.link_kinds == PathLinkKinds::temporal_only && l.kind != LinkKind::temporal) continue;
        const int a = g.node_index(l.src);
        const int b = g.node_index(l.dst);
        if (l.kind == LinkKind::temporal) {
            hops[a].push_back({b, kTemporalType});
            hops[b].push_back({a, kTemporalRevType});
        } else {
            hops[a].push_back({b, l.type});
            hops[b].push_back({a, l.type});
        }
    }
    return hops;
}

// DFS over simple paths from source, reporting the label sequence at every
// event node reached. Paths extend through intermediate events as well.
void walk_paths(const EventGraph& g, const std::vector<std::vector<Hop>>& hops, int source,
                int max_len, const std::function<void(int node, const PathType&)>& report) {
    std::vector<char> on_path(g.nodes().size(), 0);
    PathType labels;
    on_path[source] = 1;

    std::function<void(int)> dfs = [&](int at) {
        for (const Hop& h : hops[at]) {
            if (on_path[h.neighbor]) continue;
            labels.push_back(h.label);
            report(h.neighbor, labels);
            if (static_cast<int>(labels.size()) < max_len) {
                on_path[h.neighbor] = 1;
                dfs(h.neighbor);
                on_path[h.neighbor] = 0;
            }
            labels.pop_back();
        }
    };
    dfs(source);
}

}  // namespace

std::set<PathType> enumerate_paths(const EventGraph& g, const NodeId& s, const NodeId& t,
                                   const PathConfig& cfg) {
    cfg.validate();
    if (s == t) throw ValidationError("enumerate_paths: source equals target '" + s + "'");
    const int target = g.node_index(t);
    std::set<PathType> out;
    walk_paths(g, build_hops(g, cfg), g.node_index(s), cfg.max_len,
               [&](int node, const PathType& labels) {
                   if (node == target) out.insert(labels);
               });
    return out;
}

PathVocabulary build_vocabulary(const EventGraph& schema, const PathConfig& cfg) {
    cfg.validate();
    if (schema.role() != GraphRole::schema)
        throw ValidationError("build_vocabulary expects a schema graph");
    const auto hops = build_hops(schema, cfg);
    std::set<PathType> all;
    for (const NodeId& s : schema.event_ids()) {
        walk_paths(schema, hops, schema.node_index(s), cfg.max_len,
                   [&](int node, const PathType& labels) {
                       if (schema.nodes()[node].kind == NodeKind::event) all.insert(labels);
                   });
    }
    return PathVocabulary::from_paths(std::move(all));
}

Tensor bag_of_paths(const EventGraph& schema, const NodeId& e, const std::set<NodeId>& context,
                    const PathVocabulary& vocab, const PathConfig& cfg) {
    if (context.count(e))
        throw ValidationError("bag_of_paths: candidate '" + e + "' is inside the context");
    Tensor out(1, vocab.size());
    for (const NodeId& t : context) {
        if (t == e) continue;
        for (const PathType& p : enumerate_paths(schema, e, t, cfg)) {
            auto it = vocab.index.find(p);
            if (it != vocab.index.end()) out.v[it->second] = 1.0;
        }
    }
    return out;
}

const std::vector<int> PathIndex::kEmpty;

PathIndex::PathIndex(const EventGraph& schema, const PathConfig& cfg)
    : cfg_(cfg), vocab_(build_vocabulary(schema, cfg)) {
    const auto hops = build_hops(schema, cfg);
    for (const NodeId& s : schema.event_ids()) {
        std::map<NodeId, std::set<int>> reached;
        walk_paths(schema, hops, schema.node_index(s), cfg.max_len,
                   [&](int node, const PathType& labels) {
                       const Node& n = schema.nodes()[node];
                       if (n.kind != NodeKind::event) return;
                       reached[n.id].insert(vocab_.index.at(labels));
                   });
        auto& row = pair_paths_[s];
        for (auto& [t, ids] : reached) row.emplace(t, std::vector<int>(ids.begin(), ids.end()));
    }
}

const std::vector<int>& PathIndex::pair_paths(const NodeId& s, const NodeId& t) const {
    auto it = pair_paths_.find(s);
    if (it == pair_paths_.end()) return kEmpty;
    auto jt = it->second.find(t);
    return jt == it->second.end() ? kEmpty : jt->second;
}

Tensor PathIndex::bag(const NodeId& e, const std::set<NodeId>& context) const {
    Tensor out(1, vocab_.size());
    for (const NodeId& t : context) {
        if (t == e) continue;
        for (int id : pair_paths(e, t)) out.v[id] = 1.0;
    }
    return out;
}

void init_path_mlp(ParamStore& store, int input_dim, int hidden_dim, Rng& rng) {
    glorot_init(store, "mlp_path.w1", input_dim, hidden_dim, rng);
    store.create("mlp_path.b1", 1, hidden_dim);
    glorot_init(store, "mlp_path.w2", hidden_dim, 1, rng);
    store.create("mlp_path.b2", 1, 1);
}

ad::Value predict_path_value(const ad::Value& bag, ParamStore& store) {
    if (bag->val.cols != store.value("mlp_path.w1").rows)
        throw ValidationError("predict_path: input dimension " + bag->val.shape_str() +
                              " does not match mlp_path.w1 " +
                              store.value("mlp_path.w1").shape_str());
    ad::Value h = ad::relu(ad::add_bias(ad::matmul(bag, store.use("mlp_path.w1")),
                                        store.use("mlp_path.b1")));
    return ad::sigmoid(ad::add_bias(ad::matmul(h, store.use("mlp_path.w2")),
                                    store.use("mlp_path.b2")));
}

double predict_path(const Tensor& bag, ParamStore& store) {
    return predict_path_value(ad::constant(bag), store)->val.item();
}

}  // namespace segc
