#include "segc/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "segc/errors.hpp"
#include "segc/rng.hpp"

namespace segc {

namespace fs = std::filesystem;

std::string to_string(PlantMode m) {
    switch (m) {
        case PlantMode::none: return "none";
        case PlantMode::distance1: return "distance1";
        case PlantMode::second_hop: return "second-hop";
    }
    return "?";
}

PlantMode plant_mode_from_string(const std::string& s) {
    if (s == "none") return PlantMode::none;
    if (s == "distance1") return PlantMode::distance1;
    if (s == "second-hop" || s == "second_hop") return PlantMode::second_hop;
    throw ValidationError("unknown plant mode '" + s + "'");
}

void GenConfig::validate() const {
    auto density_ok = [](double d) { return d > 0.0 && d <= 1.0; };
    if (!density_ok(temporal_density) || !density_ok(argument_density))
        throw ValidationError("gen config: densities must lie in (0, 1]");
    if (!(instance_coverage > 0.0 && instance_coverage <= 1.0))
        throw ValidationError("gen config: instance_coverage must lie in (0, 1]");
    if (!(dropout >= 0.0 && dropout < 1.0))
        throw ValidationError("gen config: dropout must lie in [0, 1)");
    if (n_schema_events < 4) throw ValidationError("gen config: n_schema_events must be >= 4");
    if (n_schema_entities < 0) throw ValidationError("gen config: n_schema_entities must be >= 0");
    if (n_event_types < 1 || n_entity_types < 1)
        throw ValidationError("gen config: type pool sizes must be >= 1");
    if (n_instances < 1) throw ValidationError("gen config: n_instances must be >= 1");
    if (plant != PlantMode::none) {
        const int comps = (n_schema_events + 7) / 8 + 1;
        if (n_schema_entities < comps)
            throw ValidationError(
                "gen config: planted modes need at least one entity per chain component");
    }
}

void PerturbConfig::validate() const {
    if (!(edge_change_frac >= 0.0 && edge_change_frac <= 1.0))
        throw ValidationError("perturb config: edge_change_frac must lie in [0, 1]");
}

namespace {

constexpr int kCoreLen = 5;        // chain length per planted component
constexpr int kDistractors = 3;    // dangling events per second-hop component
constexpr int kRolePool = 6;
constexpr int kRelationPool = 4;

std::string event_type_name(int i, int pool) { return "ET" + std::to_string(i % pool); }
std::string entity_type_name(int i, int pool) { return "NT" + std::to_string(i % pool); }
std::string role_name(int i) { return "role" + std::to_string(i % kRolePool); }

std::string padded(int k) {
    std::ostringstream os;
    os << (k < 10 ? "000" : k < 100 ? "00" : k < 1000 ? "0" : "") << k;
    return os.str();
}

struct PlantedLayout {
    // Per component: core chain event indices (temporal order) and distractor
    // event indices.
    std::vector<std::vector<int>> cores;
    std::vector<std::vector<int>> distractors;
    std::vector<std::vector<int>> entities;  // entity indices per component
};

struct BuiltSchema {
    EventGraph graph;
    PlantedLayout layout;  // empty for plant = none
};

std::string event_id(int i) { return "e" + padded(i); }
std::string entity_id(int i) { return "n" + padded(i); }

BuiltSchema build_schema(const GenConfig& cfg) {
    cfg.validate();
    Rng rng(derive_seed(cfg.seed, seed_salt::datagen));

    std::vector<Node> nodes;
    std::vector<Link> links;
    std::set<std::tuple<NodeId, NodeId, LinkKind, std::string>> seen;
    auto add_link = [&](const NodeId& src, const NodeId& dst, LinkKind kind,
                        const std::string& type) {
        if (seen.emplace(src, dst, kind, type).second) links.push_back({src, dst, kind, type});
    };

    const int ne = cfg.n_schema_events;
    for (int i = 0; i < ne; ++i) {
        const int type_idx = cfg.plant == PlantMode::none
                                 ? static_cast<int>(rng.below(cfg.n_event_types))
                                 : i;
        nodes.push_back({event_id(i), NodeKind::event, event_type_name(type_idx, cfg.n_event_types), ""});
    }
    for (int j = 0; j < cfg.n_schema_entities; ++j) {
        nodes.push_back({entity_id(j), NodeKind::entity,
                         entity_type_name(static_cast<int>(rng.below(cfg.n_entity_types)),
                                          cfg.n_entity_types),
                         ""});
    }

    PlantedLayout layout;

    if (cfg.plant == PlantMode::none) {
        // Random temporal DAG over the index order, then stitch stragglers so
        // the event set stays weakly connected.
        std::vector<char> linked(ne, 0);
        for (int i = 0; i < ne; ++i)
            for (int j = i + 1; j < ne; ++j)
                if (rng.chance(cfg.temporal_density)) {
                    add_link(event_id(i), event_id(j), LinkKind::temporal, kTemporalType);
                    linked[i] = linked[j] = 1;
                }
        for (int j = 1; j < ne; ++j) {
            bool has_earlier = false;
            for (const Link& l : links)
                if (l.kind == LinkKind::temporal && (l.dst == event_id(j) || l.src == event_id(j))) {
                    has_earlier = true;
                    break;
                }
            if (!has_earlier)
                add_link(event_id(static_cast<int>(rng.below(j))), event_id(j), LinkKind::temporal,
                         kTemporalType);
        }
        for (int i = 0; i < ne; ++i) {
            for (int j = 0; j < cfg.n_schema_entities; ++j)
                if (rng.chance(cfg.argument_density))
                    add_link(event_id(i), entity_id(j), LinkKind::argument,
                             role_name(static_cast<int>(rng.below(kRolePool))));
        }
        // Orphan entities attach somewhere so the schema stays connected.
        for (int j = 0; j < cfg.n_schema_entities; ++j) {
            bool attached = false;
            for (const Link& l : links)
                if (l.dst == entity_id(j)) {
                    attached = true;
                    break;
                }
            if (!attached)
                add_link(event_id(static_cast<int>(rng.below(ne))), entity_id(j),
                         LinkKind::argument, role_name(static_cast<int>(rng.below(kRolePool))));
        }
        for (int a = 0; a < cfg.n_schema_entities; ++a)
            for (int b = a + 1; b < cfg.n_schema_entities; ++b)
                if (rng.chance(cfg.argument_density / 2.0))
                    add_link(entity_id(a), entity_id(b), LinkKind::relation,
                             "rel" + std::to_string(rng.below(kRelationPool)));
    } else {
        // Chain components. second_hop additionally hangs distractor events
        // off core positions that have a successor.
        const bool with_distractors = cfg.plant == PlantMode::second_hop;
        int at = 0;
        while (at < ne) {
            const int remaining = ne - at;
            int core = std::min(kCoreLen, remaining);
            int extra = 0;
            if (with_distractors && remaining > core)
                extra = std::min(kDistractors, remaining - core);
            // Never leave a trailing 1-event component.
            if (remaining - core - extra == 1) {
                if (extra > 0)
                    ++extra;
                else
                    ++core;
            }
            std::vector<int> core_ids, distractor_ids;
            for (int k = 0; k < core; ++k) core_ids.push_back(at + k);
            for (int k = 0; k < extra; ++k) distractor_ids.push_back(at + core + k);
            for (std::size_t k = 0; k + 1 < core_ids.size(); ++k)
                add_link(event_id(core_ids[k]), event_id(core_ids[k + 1]), LinkKind::temporal,
                         kTemporalType);
            for (std::size_t k = 0; k < distractor_ids.size(); ++k) {
                const int attach = core_ids[k % std::max<std::size_t>(1, core_ids.size() - 1)];
                add_link(event_id(attach), event_id(distractor_ids[k]), LinkKind::temporal,
                         kTemporalType);
            }
            layout.cores.push_back(std::move(core_ids));
            layout.distractors.push_back(std::move(distractor_ids));
            at += core + extra;
        }

        const int comps = static_cast<int>(layout.cores.size());
        layout.entities.resize(comps);
        for (int j = 0; j < cfg.n_schema_entities; ++j) layout.entities[j % comps].push_back(j);

        for (int c = 0; c < comps; ++c) {
            for (int ei : layout.cores[c]) {
                for (int j : layout.entities[c])
                    if (rng.chance(std::max(0.25, cfg.argument_density)))
                        add_link(event_id(ei), entity_id(j), LinkKind::argument,
                                 role_name(static_cast<int>(rng.below(kRolePool))));
            }
            for (int j : layout.entities[c]) {
                bool attached = false;
                for (const Link& l : links)
                    if (l.dst == entity_id(j)) {
                        attached = true;
                        break;
                    }
                if (!attached)
                    add_link(event_id(layout.cores[c][0]), entity_id(j), LinkKind::argument,
                             role_name(static_cast<int>(rng.below(kRolePool))));
            }
            for (std::size_t a = 0; a < layout.entities[c].size(); ++a)
                for (std::size_t b = a + 1; b < layout.entities[c].size(); ++b)
                    if (rng.chance(cfg.argument_density / 2.0))
                        add_link(entity_id(layout.entities[c][a]), entity_id(layout.entities[c][b]),
                                 LinkKind::relation,
                                 "rel" + std::to_string(rng.below(kRelationPool)));
        }
        // Bridge consecutive components through entity relations so the whole
        // schema is one weakly connected graph.
        for (int c = 0; c + 1 < comps; ++c)
            add_link(entity_id(layout.entities[c][0]), entity_id(layout.entities[c + 1][0]),
                     LinkKind::relation, "rel_bridge");
    }

    return {EventGraph("synthetic-" + to_string(cfg.plant) + "-" + std::to_string(cfg.seed),
                       GraphRole::schema, std::move(nodes), std::move(links)),
            std::move(layout)};
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// Instantiates the chosen schema events (plus adjacent entities) as a fresh
// instance graph; ids follow the "<type>:<k>" style.
EventGraph instantiate(const EventGraph& schema, const std::vector<NodeId>& covered,
                       const std::string& graph_id) {
    std::set<NodeId> covered_set(covered.begin(), covered.end());
    std::map<NodeId, NodeId> inst_id;  // schema node -> instance node
    std::map<std::string, int> type_counter;
    std::vector<Node> nodes;

    auto make_node = [&](const Node& sn) {
        const std::string base = lower(sn.type);
        const int k = type_counter[base]++;
        const NodeId id = base + ":" + std::to_string(k);
        inst_id.emplace(sn.id, id);
        nodes.push_back({id, sn.kind, sn.type, ""});
    };

    for (const NodeId& e : covered) make_node(schema.node(e));
    for (const Link& l : schema.links())
        if (l.kind == LinkKind::argument && covered_set.count(l.src) && !inst_id.count(l.dst))
            make_node(schema.node(l.dst));

    std::vector<Link> links;
    for (const Link& l : schema.links()) {
        auto s = inst_id.find(l.src);
        auto d = inst_id.find(l.dst);
        if (s == inst_id.end() || d == inst_id.end()) continue;
        links.push_back({s->second, d->second, l.kind, l.type});
    }
    return EventGraph(graph_id, GraphRole::instance, std::move(nodes), std::move(links));
}

// Each covered event is removed independently with probability `dropout`.
// The draw is repaired so at least two events remain and, for the planted
// families, every hidden event keeps a temporal neighbor among the remaining
// ones (completable from distance 1).
std::set<NodeId> pick_hidden(const EventGraph& schema, const std::vector<NodeId>& covered,
                             double dropout, bool require_adjacent, Rng& rng) {
    std::set<NodeId> hidden;
    for (const NodeId& e : covered)
        if (rng.chance(dropout)) hidden.insert(e);
    while (covered.size() - hidden.size() < 2 && !hidden.empty())
        hidden.erase(std::prev(hidden.end()));
    if (!require_adjacent) return hidden;

    const std::set<NodeId> covered_set(covered.begin(), covered.end());
    const std::optional<std::set<LinkKind>> temporal{{LinkKind::temporal}};
    bool changed = true;
    while (changed) {
        changed = false;
        for (const NodeId& h : hidden) {
            bool has = false;
            for (const NodeId& n : schema.neighbors(h, temporal))
                if (!hidden.count(n) && covered_set.count(n)) has = true;
            if (!has) {
                hidden.erase(h);  // unhide stranded events
                changed = true;
                break;
            }
        }
    }
    return hidden;
}

}  // namespace

EventGraph gen_schema(const GenConfig& cfg) { return build_schema(cfg).graph; }

std::vector<InstanceTriple> gen_instances(const EventGraph& schema, const GenConfig& cfg) {
    cfg.validate();
    Rng rng(derive_seed(cfg.seed + 1, seed_salt::datagen));
    std::vector<InstanceTriple> out;

    PlantedLayout layout;
    if (cfg.plant != PlantMode::none) {
        BuiltSchema rebuilt = build_schema(cfg);
        if (!rebuilt.graph.same_structure(schema))
            throw ValidationError(
                "gen_instances: schema does not match the planted generator configuration");
        layout = std::move(rebuilt.layout);
    }

    const std::vector<NodeId> all_events = schema.event_ids();
    const std::optional<std::set<LinkKind>> temporal{{LinkKind::temporal}};

    for (int k = 0; k < cfg.n_instances; ++k) {
        std::vector<NodeId> covered;
        if (cfg.plant == PlantMode::none) {
            const std::size_t target = std::max<std::size_t>(
                2, static_cast<std::size_t>(
                       std::ceil(cfg.instance_coverage * static_cast<double>(all_events.size()))));
            if (all_events.size() < 2)
                throw ValidationError("gen_instances: schema has fewer than 2 events");
            std::set<NodeId> covered_set{all_events[rng.below(all_events.size())]};
            while (covered_set.size() < target) {
                std::vector<NodeId> frontier;
                for (const NodeId& c : covered_set)
                    for (const NodeId& n : schema.neighbors(c, temporal))
                        if (!covered_set.count(n)) frontier.push_back(n);
                if (frontier.empty()) break;
                std::sort(frontier.begin(), frontier.end());
                frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
                covered_set.insert(frontier[rng.below(frontier.size())]);
            }
            covered.assign(covered_set.begin(), covered_set.end());
        } else {
            const auto& core = layout.cores[k % layout.cores.size()];
            for (int ei : core) covered.push_back(event_id(ei));
        }
        if (covered.size() < 2)
            throw ValidationError("gen_instances: coverage leaves fewer than 2 events");

        const std::set<NodeId> hidden =
            pick_hidden(schema, covered, cfg.dropout, cfg.plant != PlantMode::none, rng);

        EventGraph full = instantiate(schema, covered, "inst_" + padded(k));
        // instantiate() assigns "<type>:<k>" ids in covered order; replay the
        // counters to find the instance ids of the hidden schema events.
        std::set<NodeId> hidden_instance_ids;
        std::map<std::string, int> type_counter;
        for (const NodeId& e : covered) {
            const std::string base = lower(schema.node(e).type);
            const int idx = type_counter[base]++;
            if (hidden.count(e)) hidden_instance_ids.insert(base + ":" + std::to_string(idx));
        }
        EventGraph incomplete = remove_events(full, hidden_instance_ids);
        out.push_back({std::move(full), std::move(incomplete), hidden});
    }
    return out;
}

EventGraph perturb_schema(const EventGraph& schema, const PerturbConfig& cfg) {
    cfg.validate();
    Rng rng(derive_seed(cfg.seed, seed_salt::datagen));
    std::vector<Link> links = schema.links();
    const std::vector<NodeId> events = schema.event_ids();
    const std::vector<NodeId> entities = schema.entity_ids();

    std::set<std::tuple<NodeId, NodeId, LinkKind, std::string>> present;
    for (const Link& l : links) present.emplace(l.src, l.dst, l.kind, l.type);

    const std::size_t n_rewire =
        static_cast<std::size_t>(std::floor(cfg.edge_change_frac * static_cast<double>(links.size())));
    std::vector<std::size_t> order(links.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);

    for (std::size_t r = 0; r < n_rewire; ++r) {
        Link& l = links[order[r]];
        present.erase({l.src, l.dst, l.kind, l.type});
        for (int attempt = 0; attempt < 128; ++attempt) {
            NodeId src, dst;
            switch (l.kind) {
                case LinkKind::temporal: {
                    src = events[rng.below(events.size())];
                    dst = events[rng.below(events.size())];
                    break;
                }
                case LinkKind::argument: {
                    src = events[rng.below(events.size())];
                    dst = entities[rng.below(entities.size())];
                    break;
                }
                case LinkKind::relation: {
                    src = entities[rng.below(entities.size())];
                    dst = entities[rng.below(entities.size())];
                    break;
                }
            }
            if (src == dst) continue;
            if (src == l.src && dst == l.dst) continue;  // rewired means moved
            if (present.count({src, dst, l.kind, l.type})) continue;
            l.src = src;
            l.dst = dst;
            break;
        }
        present.emplace(l.src, l.dst, l.kind, l.type);  // re-inserts the original on failure
    }
    return EventGraph(schema.graph_id(), GraphRole::schema, schema.nodes(), std::move(links));
}

void write_dataset(const std::string& dir, const EventGraph& schema,
                   const std::vector<InstanceTriple>& instances, std::uint64_t split_seed) {
    fs::create_directories(dir);
    save_graph(schema, (fs::path(dir) / "schema.json").string());

    std::vector<std::size_t> order(instances.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(derive_seed(split_seed, seed_salt::datagen + 100));
    rng.shuffle(order);
    const std::size_t n = instances.size();
    const std::size_t n_train = static_cast<std::size_t>(std::floor(0.8 * static_cast<double>(n)));
    const std::size_t n_val = static_cast<std::size_t>(std::floor(0.1 * static_cast<double>(n)));
    std::vector<std::string> split(n, "test");
    for (std::size_t i = 0; i < n; ++i) {
        if (i < n_train)
            split[order[i]] = "train";
        else if (i < n_train + n_val)
            split[order[i]] = "val";
    }

    nlohmann::json manifest;
    manifest["schema"] = "schema.json";
    manifest["instances"] = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) {
        const std::string id = instances[i].full.graph_id();
        const std::string full_name = id + ".full.json";
        const std::string part_name = id + ".part.json";
        save_graph(instances[i].full, (fs::path(dir) / full_name).string());
        save_graph(instances[i].incomplete, (fs::path(dir) / part_name).string());
        nlohmann::json e;
        e["id"] = id;
        e["full"] = full_name;
        e["incomplete"] = part_name;
        e["hidden"] = std::vector<NodeId>(instances[i].hidden_schema.begin(),
                                          instances[i].hidden_schema.end());
        e["split"] = split[i];
        manifest["instances"].push_back(std::move(e));
    }
    std::ofstream out(fs::path(dir) / "manifest.json", std::ios::binary);
    if (!out) throw IoError("cannot write manifest in '" + dir + "'");
    out << manifest.dump(2) << "\n";
}

Dataset load_dataset(const std::string& dir) {
    const fs::path base(dir);
    std::ifstream in(base / "manifest.json", std::ios::binary);
    if (!in) throw IoError("cannot open manifest in '" + dir + "'");
    nlohmann::json manifest;
    try {
        in >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("manifest.json: " + std::string(e.what()));
    }
    Dataset ds{dir, load_graph((base / manifest.at("schema").get<std::string>()).string()), {}};
    for (const nlohmann::json& e : manifest.at("instances")) {
        DatasetEntry entry;
        entry.id = e.at("id").get<std::string>();
        entry.full_path = e.at("full").get<std::string>();
        entry.incomplete_path = e.at("incomplete").get<std::string>();
        entry.hidden = e.at("hidden").get<std::vector<NodeId>>();
        entry.split = e.at("split").get<std::string>();
        ds.entries.push_back(std::move(entry));
    }
    return ds;
}

std::vector<EventGraph> load_split(const Dataset& ds, const std::string& split, bool full) {
    std::vector<EventGraph> out;
    for (const DatasetEntry& e : ds.entries) {
        if (e.split != split) continue;
        const std::string& name = full ? e.full_path : e.incomplete_path;
        out.push_back(load_graph((fs::path(ds.dir) / name).string()));
    }
    return out;
}

}  // namespace segc
