#include "segc/inference.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "json.hpp"

#include "segc/errors.hpp"
#include "segc/matching.hpp"

namespace segc {

void InferenceConfig::validate() const {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw ValidationError("inference config: threshold must lie in (0, 1)");
}

std::set<NodeId> distance1_candidates(const EventGraph& schema, const std::set<NodeId>& subgraph,
                                      const std::set<NodeId>& candidates) {
    std::set<NodeId> out;
    const std::optional<std::set<LinkKind>> temporal{{LinkKind::temporal}};
    for (const NodeId& member : subgraph) {
        for (const NodeId& n : schema.neighbors(member, temporal))
            if (candidates.count(n)) out.insert(n);
    }
    return out;
}

namespace {

// Mutable working copy of the instance graph being completed.
struct WorkingGraph {
    std::vector<Node> nodes;
    std::vector<Link> links;
    std::set<NodeId> ids;
    std::map<NodeId, std::vector<NodeId>> schema_to_instance;  // events and entities
    std::map<std::string, int> gen_counter;                    // per new-node type

    explicit WorkingGraph(const EventGraph& g, const MatchResult& m)
        : nodes(g.nodes()), links(g.links()) {
        for (const Node& n : nodes) ids.insert(n.id);
        for (const auto& [inst, schema] : m.assignment) schema_to_instance[schema].push_back(inst);
        for (const auto& [inst, schema] : m.entity_assignment)
            schema_to_instance[schema].push_back(inst);
    }

    NodeId fresh_id(const std::string& type) {
        int& k = gen_counter[type];
        NodeId id;
        do {
            ++k;
            id = type + ":gen" + std::to_string(k);
        } while (ids.count(id));
        return id;
    }

    NodeId add_event(const Node& schema_node) {
        Node n;
        n.id = fresh_id(schema_node.type);
        n.kind = NodeKind::event;
        n.type = schema_node.type;
        nodes.push_back(n);
        ids.insert(n.id);
        schema_to_instance[schema_node.id].push_back(n.id);
        return n.id;
    }

    // Copies the schema links incident to the accepted schema event toward
    // every already-present counterpart. A schema neighbor matched by several
    // instance nodes receives one copied link per match.
    void copy_links(const EventGraph& schema, const NodeId& schema_event, const NodeId& new_id) {
        for (int li : schema.incident_links(schema_event)) {
            const Link& sl = schema.links()[li];
            if (sl.kind == LinkKind::relation) continue;  // never touches an event
            const bool outgoing = sl.src == schema_event;
            const NodeId& other = outgoing ? sl.dst : sl.src;
            auto it = schema_to_instance.find(other);
            if (it == schema_to_instance.end()) continue;
            for (const NodeId& counterpart : it->second) {
                Link l;
                l.kind = sl.kind;
                l.type = sl.type;
                l.src = outgoing ? new_id : counterpart;
                l.dst = outgoing ? counterpart : new_id;
                links.push_back(std::move(l));
            }
        }
    }
};

}  // namespace

CompletionResult complete(const EventGraph& instance, const EventGraph& schema,
                          const ScoreFn& scorer, const InferenceConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const MatchResult matched = match(instance, schema, seed);

    CompletionResult result{instance, {}, matched.matched_subgraph, matched.matched_subgraph};
    if (matched.matched_subgraph.empty()) {
        result.unmatched_input = true;
        result.log.push_back("no instance event matched the schema; returning input unchanged");
        return result;
    }

    std::set<NodeId> subgraph = matched.matched_subgraph;
    std::set<NodeId> candidates;
    for (const NodeId& e : schema.event_ids())
        if (!subgraph.count(e)) candidates.insert(e);

    WorkingGraph work(instance, matched);
    const int max_additions =
        cfg.max_additions < 0 ? static_cast<int>(schema.event_count()) : cfg.max_additions;

    while (!candidates.empty()) {
        if (static_cast<int>(result.added_events.size()) >= max_additions) {
            result.log.push_back("stopping: reached the max_additions guard of " +
                                 std::to_string(max_additions));
            break;
        }
        const std::set<NodeId> frontier = distance1_candidates(schema, subgraph, candidates);
        if (frontier.empty()) {
            result.log.push_back("stopping: no candidate at temporal distance 1");
            break;
        }
        // Scores are evaluated against the bootstrapped subgraph of this
        // iteration. Ties pick the lexicographically smallest schema id,
        // which std::set iteration already yields first.
        NodeId best_id;
        double best_score = -1.0;
        for (const NodeId& c : frontier) {
            const double s = scorer(c, subgraph);
            if (s > best_score) {
                best_score = s;
                best_id = c;
            }
        }
        if (!(best_score > cfg.threshold)) {
            result.log.push_back("stopping: best candidate '" + best_id + "' scored " +
                                 std::to_string(best_score) + ", at or below threshold");
            break;
        }

        subgraph.insert(best_id);
        candidates.erase(best_id);
        const NodeId new_id = work.add_event(schema.node(best_id));
        work.copy_links(schema, best_id, new_id);
        result.added_events.push_back({new_id, best_id, best_score});
    }
    if (candidates.empty() && !result.added_events.empty())
        result.log.push_back("stopping: candidate set exhausted");

    result.completed = EventGraph(instance.graph_id(), GraphRole::instance, std::move(work.nodes),
                                  std::move(work.links));
    result.final_subgraph = subgraph;
    return result;
}

CompletionResult complete(const EventGraph& instance, const EventGraph& schema, Model& model,
                          const InferenceConfig& cfg, std::uint64_t seed) {
    Model::Scorer scorer = model.make_scorer(schema);
    return complete(
        instance, schema,
        [&scorer](const NodeId& e, const std::set<NodeId>& ctx) { return scorer(e, ctx); }, cfg,
        seed);
}

void save_completion(const CompletionResult& r, const std::string& graph_path) {
    save_graph(r.completed, graph_path);
    nlohmann::json doc;
    doc["unmatched_input"] = r.unmatched_input;
    doc["added_events"] = nlohmann::json::array();
    for (const AddedEvent& a : r.added_events)
        doc["added_events"].push_back(
            {{"instance_id", a.instance_id}, {"schema_id", a.schema_id}, {"score", a.score}});
    doc["final_subgraph"] = std::vector<NodeId>(r.final_subgraph.begin(), r.final_subgraph.end());
    doc["log"] = r.log;
    std::ofstream out(graph_path + ".additions.json", std::ios::binary);
    if (!out) throw IoError("cannot write sidecar for '" + graph_path + "'");
    out << doc.dump(2) << "\n";
}

}  // namespace segc
