#pragma once

#include <vector>

#include "segc/graph.hpp"

namespace segc::fixtures {

// Mini bombing schema used across suites. Two temporal branches after the
// detonation: victims (die_1) and the justice storyline ending in the
// attacker's death (die_2). Exactly two routes of length <= 2 connect
// transport and detonate: the direct temporal link and the shared place
// entity via (destination, place).
inline EventGraph bombing_schema() {
    std::vector<Node> nodes{
        {"assemble", NodeKind::event, "Assemble", ""},
        {"transport", NodeKind::event, "Transport", ""},
        {"detonate", NodeKind::event, "Detonate", ""},
        {"die_1", NodeKind::event, "Die", ""},
        {"injure", NodeKind::event, "Injure", ""},
        {"investigate", NodeKind::event, "Investigate", ""},
        {"identify", NodeKind::event, "Identify", ""},
        {"indict", NodeKind::event, "Indict", ""},
        {"sentence", NodeKind::event, "Sentence", ""},
        {"die_2", NodeKind::event, "Die", ""},
        {"bomb", NodeKind::entity, "Weapon", ""},
        {"square", NodeKind::entity, "Place", ""},
        {"victim", NodeKind::entity, "Person", ""},
        {"attacker", NodeKind::entity, "Person", ""},
    };
    std::vector<Link> links{
        {"assemble", "transport", LinkKind::temporal, kTemporalType},
        {"transport", "detonate", LinkKind::temporal, kTemporalType},
        {"detonate", "die_1", LinkKind::temporal, kTemporalType},
        {"detonate", "injure", LinkKind::temporal, kTemporalType},
        {"detonate", "investigate", LinkKind::temporal, kTemporalType},
        {"investigate", "identify", LinkKind::temporal, kTemporalType},
        {"identify", "indict", LinkKind::temporal, kTemporalType},
        {"indict", "sentence", LinkKind::temporal, kTemporalType},
        {"sentence", "die_2", LinkKind::temporal, kTemporalType},
        {"assemble", "bomb", LinkKind::argument, "artifact"},
        {"transport", "bomb", LinkKind::argument, "cargo"},
        {"transport", "square", LinkKind::argument, "destination"},
        {"detonate", "square", LinkKind::argument, "place"},
        {"die_1", "victim", LinkKind::argument, "victim"},
        {"injure", "victim", LinkKind::argument, "victim"},
        {"die_2", "attacker", LinkKind::argument, "victim"},
        {"indict", "attacker", LinkKind::argument, "defendant"},
        {"victim", "square", LinkKind::relation, "located_at"},
    };
    return EventGraph("bombing-schema", GraphRole::schema, std::move(nodes), std::move(links));
}

// Instance echoing the matching cases: an event type absent from the schema
// (contact:0), a unique match (assemble:0), and an ambiguous one (die:0) whose
// temporal predecessor detonate:0 resolves it to die_1.
inline EventGraph bombing_instance() {
    std::vector<Node> nodes{
        {"contact:0", NodeKind::event, "Contact", ""},
        {"assemble:0", NodeKind::event, "Assemble", ""},
        {"detonate:0", NodeKind::event, "Detonate", ""},
        {"die:0", NodeKind::event, "Die", ""},
        {"bomb:0", NodeKind::entity, "Weapon", ""},
        {"alice", NodeKind::entity, "Person", ""},
    };
    std::vector<Link> links{
        {"contact:0", "assemble:0", LinkKind::temporal, kTemporalType},
        {"detonate:0", "die:0", LinkKind::temporal, kTemporalType},
        {"assemble:0", "bomb:0", LinkKind::argument, "artifact"},
        {"die:0", "alice", LinkKind::argument, "victim"},
    };
    return EventGraph("bombing-instance", GraphRole::instance, std::move(nodes), std::move(links));
}

// Two disjoint copies of the same typed component: every node's K-hop type
// neighborhood is isomorphic to its twin's.
inline EventGraph twin_schema() {
    std::vector<Node> nodes{
        {"a1", NodeKind::event, "Start", ""},   {"b1", NodeKind::event, "Mid", ""},
        {"c1", NodeKind::event, "End", ""},     {"p1", NodeKind::entity, "Person", ""},
        {"a2", NodeKind::event, "Start", ""},   {"b2", NodeKind::event, "Mid", ""},
        {"c2", NodeKind::event, "End", ""},     {"p2", NodeKind::entity, "Person", ""},
    };
    std::vector<Link> links{
        {"a1", "b1", LinkKind::temporal, kTemporalType},
        {"b1", "c1", LinkKind::temporal, kTemporalType},
        {"b1", "p1", LinkKind::argument, "agent"},
        {"a2", "b2", LinkKind::temporal, kTemporalType},
        {"b2", "c2", LinkKind::temporal, kTemporalType},
        {"b2", "p2", LinkKind::argument, "agent"},
    };
    return EventGraph("twin-schema", GraphRole::schema, std::move(nodes), std::move(links));
}

inline EventGraph chain_schema(int n) {
    std::vector<Node> nodes;
    std::vector<Link> links;
    for (int i = 0; i < n; ++i)
        nodes.push_back({"c" + std::to_string(i), NodeKind::event, "T" + std::to_string(i), ""});
    for (int i = 0; i + 1 < n; ++i)
        links.push_back({"c" + std::to_string(i), "c" + std::to_string(i + 1), LinkKind::temporal,
                         kTemporalType});
    return EventGraph("chain-schema", GraphRole::schema, std::move(nodes), std::move(links));
}

}  // namespace segc::fixtures
