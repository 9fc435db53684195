#include "segc/matching.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

#include "segc/errors.hpp"
#include "segc/rng.hpp"

namespace segc {

MatchObjective MatchObjective::type_and_temporal() {
    MatchObjective obj;
    obj.node_sim = [](const Node& a, const Node& b) { return a.type == b.type ? 1.0 : 0.0; };
    obj.link_sim = [](const Link& a, const Link& b) {
        return (a.kind == LinkKind::temporal && b.kind == LinkKind::temporal) ? 1.0 : 0.0;
    };
    return obj;
}

MatchObjective MatchObjective::node_types_only() {
    MatchObjective obj = type_and_temporal();
    obj.link_sim = [](const Link&, const Link&) { return 0.0; };
    return obj;
}

std::set<NodeId> candidate_set(const EventGraph& instance, const NodeId& event_id,
                               const EventGraph& schema) {
    const Node& e = instance.node(event_id);
    if (e.kind != NodeKind::event)
        throw ValidationError("candidate_set: node '" + event_id + "' is not an event");
    std::set<NodeId> out;
    for (const Node& n : schema.nodes())
        if (n.kind == NodeKind::event && n.type == e.type) out.insert(n.id);
    return out;
}

TypeNeighborhood type_neighborhood(const EventGraph& g, const NodeId& event_id) {
    const Node& e = g.node(event_id);
    if (e.kind != NodeKind::event)
        throw ValidationError("type_neighborhood: node '" + event_id + "' is not an event");
    TypeNeighborhood tn;
    for (int li : g.incident_links(event_id)) {
        const Link& l = g.links()[li];
        switch (l.kind) {
            case LinkKind::temporal:
                if (l.dst == event_id)
                    tn.prev_types.insert(g.node(l.src).type);
                else
                    tn.next_types.insert(g.node(l.dst).type);
                break;
            case LinkKind::argument:
                if (l.src == event_id) tn.arg_roles.insert(l.type);
                break;
            case LinkKind::relation:
                break;
        }
    }
    return tn;
}

NodeId resolve_ambiguous(const EventGraph& instance, const NodeId& event_id,
                         const std::set<NodeId>& candidates, const EventGraph& schema,
                         std::uint64_t rng_seed) {
    if (candidates.size() < 2)
        throw ValidationError("resolve_ambiguous requires at least two candidates");
    const TypeNeighborhood mine = type_neighborhood(instance, event_id);
    double best = -1.0;
    std::vector<NodeId> winners;
    for (const NodeId& c : candidates) {
        const TypeNeighborhood theirs = type_neighborhood(schema, c);
        const double score = jaccard(theirs.prev_types, mine.prev_types) +
                             jaccard(theirs.next_types, mine.next_types) +
                             jaccard(theirs.arg_roles, mine.arg_roles);
        if (score > best + 1e-12) {
            best = score;
            winners.assign(1, c);
        } else if (score > best - 1e-12) {
            winners.push_back(c);
        }
    }
    if (winners.size() == 1) return winners.front();
    Rng rng(rng_seed);
    return winners[static_cast<std::size_t>(rng.below(winners.size()))];
}

namespace {

// Entity matching: each instance entity maps to the schema entity reachable by
// the same argument role from an already-matched event. Conflicts resolve to
// the first-processed event in node-id order.
void match_entities(const EventGraph& instance, const EventGraph& schema, MatchResult& result) {
    for (const auto& [inst_event, schema_event] : result.assignment) {
        for (int li : instance.incident_links(inst_event)) {
            const Link& l = instance.links()[li];
            if (l.kind != LinkKind::argument || l.src != inst_event) continue;
            if (result.entity_assignment.count(l.dst)) continue;
            for (int sli : schema.incident_links(schema_event)) {
                const Link& sl = schema.links()[sli];
                if (sl.kind == LinkKind::argument && sl.src == schema_event && sl.type == l.type) {
                    result.entity_assignment.emplace(l.dst, sl.dst);
                    break;  // schema links are in canonical order; smallest id wins
                }
            }
        }
    }
}

}  // namespace

MatchResult match(const EventGraph& instance, const EventGraph& schema, std::uint64_t rng_seed) {
    if (schema.role() != GraphRole::schema)
        throw ValidationError("match: second argument must have role 'schema'");
    MatchResult result;
    for (const NodeId& e : instance.event_ids()) {
        const std::set<NodeId> cands = candidate_set(instance, e, schema);
        if (cands.empty()) {
            result.unmatched.insert(e);
        } else if (cands.size() == 1) {
            result.assignment.emplace(e, *cands.begin());
        } else {
            // Per-node tie-break stream so the choice does not depend on the
            // order events are processed in.
            const NodeId pick =
                resolve_ambiguous(instance, e, cands, schema, derive_seed(rng_seed, stable_hash(e)));
            result.assignment.emplace(e, pick);
        }
    }
    for (const auto& [_, s] : result.assignment) result.matched_subgraph.insert(s);
    match_entities(instance, schema, result);
    return result;
}

namespace {

struct LinkLookup {
    // (src index, dst index) -> link indices
    std::map<std::pair<int, int>, std::vector<int>> by_pair;

    LinkLookup(const EventGraph& g, const std::vector<NodeId>& events) {
        std::map<NodeId, int> pos;
        for (int i = 0; i < static_cast<int>(events.size()); ++i) pos[events[i]] = i;
        for (int li = 0; li < static_cast<int>(g.links().size()); ++li) {
            const Link& l = g.links()[li];
            auto a = pos.find(l.src);
            auto b = pos.find(l.dst);
            if (a != pos.end() && b != pos.end())
                by_pair[{a->second, b->second}].push_back(li);
        }
    }

    const std::vector<int>* links(int a, int b) const {
        auto it = by_pair.find({a, b});
        return it == by_pair.end() ? nullptr : &it->second;
    }
};

}  // namespace

double objective_value(const EventGraph& instance, const EventGraph& schema,
                       const std::map<NodeId, NodeId>& assignment, const MatchObjective& obj) {
    double total = 0.0;
    for (const auto& [i, j] : assignment) total += obj.node_sim(instance.node(i), schema.node(j));
    // Link term: every ordered instance pair (i, i') with both ends assigned,
    // against every parallel schema link between their images.
    std::vector<std::pair<NodeId, NodeId>> pairs(assignment.begin(), assignment.end());
    for (const auto& [i1, j1] : pairs) {
        for (const auto& [i2, j2] : pairs) {
            if (i1 == i2) continue;
            for (int li : instance.incident_links(i1)) {
                const Link& il = instance.links()[li];
                if (il.src != i1 || il.dst != i2) continue;
                for (int sli : schema.incident_links(j1)) {
                    const Link& sl = schema.links()[sli];
                    if (sl.src != j1 || sl.dst != j2) continue;
                    total += obj.link_sim(il, sl);
                }
            }
        }
    }
    return total;
}

std::pair<MatchResult, double> exact_match_oracle(const EventGraph& instance,
                                                  const EventGraph& schema,
                                                  const MatchObjective& obj) {
    const std::vector<NodeId> ievents = instance.event_ids();
    const std::vector<NodeId> sevents = schema.event_ids();
    if (ievents.size() > 8 || sevents.size() > 8)
        throw ValidationError("exact_match_oracle: limited to 8 event nodes per side, got " +
                              std::to_string(ievents.size()) + " x " + std::to_string(sevents.size()));

    const LinkLookup ilinks(instance, ievents);
    const LinkLookup slinks(schema, sevents);

    std::vector<int> current(ievents.size(), -1);  // -1 = unassigned
    std::vector<int> best_assign(ievents.size(), -1);
    double best = 0.0;  // the empty assignment scores 0

    // Incremental objective: assigning i -> j adds the node term plus link
    // terms against all previously assigned pairs, in both directions.
    auto pair_gain = [&](int i, int j, int i2, int j2) {
        double g = 0.0;
        if (const auto* fw = ilinks.links(i, i2)) {
            if (const auto* sfw = slinks.links(j, j2)) {
                for (int a : *fw)
                    for (int b : *sfw) g += obj.link_sim(instance.links()[a], schema.links()[b]);
            }
        }
        if (const auto* bw = ilinks.links(i2, i)) {
            if (const auto* sbw = slinks.links(j2, j)) {
                for (int a : *bw)
                    for (int b : *sbw) g += obj.link_sim(instance.links()[a], schema.links()[b]);
            }
        }
        return g;
    };

    std::function<void(std::size_t, double)> search = [&](std::size_t pos, double score) {
        if (pos == ievents.size()) {
            if (score > best + 1e-12) {
                best = score;
                best_assign = current;
            }
            return;
        }
        current[pos] = -1;
        search(pos + 1, score);
        for (int j = 0; j < static_cast<int>(sevents.size()); ++j) {
            double gain = obj.node_sim(instance.node(ievents[pos]), schema.node(sevents[j]));
            for (std::size_t p = 0; p < pos; ++p) {
                if (current[p] < 0) continue;
                gain += pair_gain(static_cast<int>(pos), j, static_cast<int>(p), current[p]);
            }
            current[pos] = j;
            search(pos + 1, score + gain);
            current[pos] = -1;
        }
    };
    search(0, 0.0);

    MatchResult result;
    for (std::size_t i = 0; i < ievents.size(); ++i) {
        if (best_assign[i] >= 0) {
            result.assignment.emplace(ievents[i], sevents[best_assign[i]]);
            result.matched_subgraph.insert(sevents[best_assign[i]]);
        } else {
            result.unmatched.insert(ievents[i]);
        }
    }
    return {result, best};
}

std::string match_result_to_json(const MatchResult& r) {
    nlohmann::json doc;
    doc["assignment"] = nlohmann::json::object();
    for (const auto& [i, s] : r.assignment) doc["assignment"][i] = s;
    doc["unmatched"] = nlohmann::json::array();
    for (const NodeId& id : r.unmatched) doc["unmatched"].push_back(id);
    return doc.dump(2) + "\n";
}

void save_match_result(const MatchResult& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write match result '" + path + "'");
    out << match_result_to_json(r);
}

}  // namespace segc
