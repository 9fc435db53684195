#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "segc/graph.hpp"

namespace segc {

// Desk-scale synthetic schemas and instance families.
//
// plant = none: density-driven generation. Events form a random temporal DAG
// (kept weakly connected), entities attach through argument links, and
// instances instantiate random connected temporal sub-DAGs at the configured
// coverage.
//
// plant = distance1: the schema's temporal graph splits into chain components
// ("episodes") tied together only through entity relations. Each instance
// instantiates one full chain, so a masked-out event is always a temporal
// neighbor of the rest, and events of other chains never are: sample labels
// coincide with the rule "candidate is a temporal neighbor of the context".
//
// plant = second_hop: like distance1, plus distractor events dangling off the
// chains that no instance ever contains. Distractors are temporal neighbors
// of instantiated events, so distance-1 adjacency alone over-predicts;
// separating them from true missing events needs second-hop path patterns
// (and node identity). Instances cover the chain cores only.

enum class PlantMode { none, distance1, second_hop };

std::string to_string(PlantMode m);
PlantMode plant_mode_from_string(const std::string& s);

struct GenConfig {
    int n_event_types = 12;
    int n_entity_types = 6;
    int n_schema_events = 30;
    int n_schema_entities = 40;
    double temporal_density = 0.15;
    double argument_density = 0.08;
    int n_instances = 100;
    double instance_coverage = 0.5;  // fraction of schema events per instance (plant = none)
    double dropout = 0.1;            // fraction of covered events removed as hidden truth
    PlantMode plant = PlantMode::none;
    std::uint64_t seed = 0;

    void validate() const;
};

struct PerturbConfig {
    double edge_change_frac = 0.0;  // in [0, 1]
    std::uint64_t seed = 0;

    void validate() const;
};

struct InstanceTriple {
    EventGraph full;
    EventGraph incomplete;
    std::set<NodeId> hidden_schema;  // schema-event image of the removed events
};

EventGraph gen_schema(const GenConfig& cfg);

std::vector<InstanceTriple> gen_instances(const EventGraph& schema, const GenConfig& cfg);

// Rewires floor(frac * |links|) uniformly chosen links to new endpoints that
// keep every kind constraint; the node set is unchanged.
EventGraph perturb_schema(const EventGraph& schema, const PerturbConfig& cfg);

// On-disk dataset: schema.json, inst_####.full.json / .part.json, and a
// manifest listing the seeded train/val/test split (80/10/10 by graph).
struct DatasetEntry {
    std::string id;
    std::string full_path;        // relative to the dataset directory
    std::string incomplete_path;
    std::vector<NodeId> hidden;   // schema-event ids
    std::string split;            // "train" | "val" | "test"
};

struct Dataset {
    std::string dir;
    EventGraph schema;
    std::vector<DatasetEntry> entries;
};

void write_dataset(const std::string& dir, const EventGraph& schema,
                   const std::vector<InstanceTriple>& instances, std::uint64_t split_seed);

Dataset load_dataset(const std::string& dir);

// Instance graphs of one split; incomplete graphs by default, full graphs for
// the completion protocol.
std::vector<EventGraph> load_split(const Dataset& ds, const std::string& split, bool full = false);

}  // namespace segc
