#include "segc/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "segc/errors.hpp"

namespace segc {

using nlohmann::json;

std::string to_string(NodeKind k) { return k == NodeKind::event ? "event" : "entity"; }

std::string to_string(LinkKind k) {
    switch (k) {
        case LinkKind::temporal: return "temporal";
        case LinkKind::argument: return "argument";
        case LinkKind::relation: return "relation";
    }
    return "?";
}

std::string to_string(GraphRole r) { return r == GraphRole::schema ? "schema" : "instance"; }

EventGraph::EventGraph(std::string graph_id, GraphRole role, std::vector<Node> nodes,
                       std::vector<Link> links)
    : graph_id_(std::move(graph_id)), role_(role), nodes_(std::move(nodes)), links_(std::move(links)) {
    std::sort(nodes_.begin(), nodes_.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
    std::sort(links_.begin(), links_.end());
    for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
        if (!index_.emplace(nodes_[i].id, i).second)
            throw ValidationError("graph '" + graph_id_ + "': duplicate node id '" + nodes_[i].id + "'");
    }
    validate();
    incident_.resize(nodes_.size());
    for (int li = 0; li < static_cast<int>(links_.size()); ++li) {
        incident_[index_.at(links_[li].src)].push_back(li);
        incident_[index_.at(links_[li].dst)].push_back(li);
    }
    for (const Node& n : nodes_)
        if (n.kind == NodeKind::event) ++n_events_;
}

void EventGraph::validate() const {
    for (const Node& n : nodes_) {
        if (n.id.empty()) throw ValidationError("graph '" + graph_id_ + "': node with empty id");
        if (n.type.empty())
            throw ValidationError("graph '" + graph_id_ + "': node '" + n.id + "' has empty type");
    }
    const Link* prev = nullptr;
    for (const Link& l : links_) {
        const std::string where = "link " + l.src + " -> " + l.dst + " (" + to_string(l.kind) + ")";
        auto src_it = index_.find(l.src);
        auto dst_it = index_.find(l.dst);
        if (src_it == index_.end())
            throw ValidationError("graph '" + graph_id_ + "': " + where + " references unknown node '" + l.src + "'");
        if (dst_it == index_.end())
            throw ValidationError("graph '" + graph_id_ + "': " + where + " references unknown node '" + l.dst + "'");
        if (l.src == l.dst)
            throw ValidationError("graph '" + graph_id_ + "': self-link on node '" + l.src + "'");
        if (l.type.empty())
            throw ValidationError("graph '" + graph_id_ + "': " + where + " has empty type");
        const Node& s = nodes_[src_it->second];
        const Node& d = nodes_[dst_it->second];
        switch (l.kind) {
            case LinkKind::temporal:
                if (s.kind != NodeKind::event || d.kind != NodeKind::event)
                    throw ValidationError("graph '" + graph_id_ + "': temporal " + where +
                                          " must connect event to event");
                if (l.type != kTemporalType)
                    throw ValidationError("graph '" + graph_id_ + "': temporal " + where +
                                          " must have type 'TEMP', got '" + l.type + "'");
                break;
            case LinkKind::argument:
                if (s.kind != NodeKind::event || d.kind != NodeKind::entity)
                    throw ValidationError("graph '" + graph_id_ + "': argument " + where +
                                          " must connect event to entity");
                break;
            case LinkKind::relation:
                if (s.kind != NodeKind::entity || d.kind != NodeKind::entity)
                    throw ValidationError("graph '" + graph_id_ + "': relation " + where +
                                          " must connect entity to entity");
                break;
        }
        if (prev && *prev == l)
            throw ValidationError("graph '" + graph_id_ + "': duplicate " + where + " type '" + l.type + "'");
        prev = &l;
    }
}

bool EventGraph::has_node(const NodeId& id) const { return index_.count(id) > 0; }

const Node& EventGraph::node(const NodeId& id) const {
    auto it = index_.find(id);
    if (it == index_.end())
        throw ValidationError("graph '" + graph_id_ + "': unknown node id '" + id + "'");
    return nodes_[it->second];
}

int EventGraph::node_index(const NodeId& id) const {
    auto it = index_.find(id);
    if (it == index_.end())
        throw ValidationError("graph '" + graph_id_ + "': unknown node id '" + id + "'");
    return it->second;
}

std::vector<NodeId> EventGraph::event_ids() const {
    std::vector<NodeId> out;
    for (const Node& n : nodes_)
        if (n.kind == NodeKind::event) out.push_back(n.id);
    return out;
}

std::vector<NodeId> EventGraph::entity_ids() const {
    std::vector<NodeId> out;
    for (const Node& n : nodes_)
        if (n.kind == NodeKind::entity) out.push_back(n.id);
    return out;
}

std::set<NodeId> EventGraph::neighbors(const NodeId& id,
                                       const std::optional<std::set<LinkKind>>& filter) const {
    int idx = node_index(id);
    std::set<NodeId> out;
    for (int li : incident_[idx]) {
        const Link& l = links_[li];
        if (filter && !filter->count(l.kind)) continue;
        out.insert(l.src == id ? l.dst : l.src);
    }
    return out;
}

const std::vector<int>& EventGraph::incident_links(const NodeId& id) const {
    return incident_[node_index(id)];
}

std::size_t EventGraph::count_links(LinkKind kind) const {
    std::size_t c = 0;
    for (const Link& l : links_)
        if (l.kind == kind) ++c;
    return c;
}

bool EventGraph::same_structure(const EventGraph& other) const {
    return nodes_ == other.nodes_ && links_ == other.links_;
}

std::set<NodeId> neighbors(const EventGraph& g, const NodeId& id,
                           const std::optional<std::set<LinkKind>>& filter) {
    return g.neighbors(id, filter);
}

EventGraph remove_events(const EventGraph& g, const std::set<NodeId>& hidden) {
    std::vector<Node> nodes;
    for (const Node& n : g.nodes())
        if (!hidden.count(n.id)) nodes.push_back(n);
    std::vector<Link> links;
    for (const Link& l : g.links())
        if (!hidden.count(l.src) && !hidden.count(l.dst)) links.push_back(l);
    return EventGraph(g.graph_id(), g.role(), std::move(nodes), std::move(links));
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ParseError(where + ": unknown field '" + it.key() + "'");
    }
}

std::string require_string(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
    if (!obj.at(key).is_string()) throw ParseError(where + ": field '" + key + "' must be a string");
    return obj.at(key).get<std::string>();
}

NodeKind parse_node_kind(const std::string& s, const std::string& where) {
    if (s == "event") return NodeKind::event;
    if (s == "entity") return NodeKind::entity;
    throw ParseError(where + ": invalid node kind '" + s + "'");
}

LinkKind parse_link_kind(const std::string& s, const std::string& where) {
    if (s == "temporal") return LinkKind::temporal;
    if (s == "argument") return LinkKind::argument;
    if (s == "relation") return LinkKind::relation;
    throw ParseError(where + ": invalid link kind '" + s + "'");
}

}  // namespace

EventGraph parse_graph(const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(origin + ": malformed JSON: " + e.what());
    }
    if (!doc.is_object()) throw ParseError(origin + ": top-level value must be an object");
    reject_unknown_keys(doc, {"graph_id", "role", "nodes", "links"}, origin);

    const std::string graph_id = require_string(doc, "graph_id", origin);
    const std::string role_s = require_string(doc, "role", origin);
    GraphRole role;
    if (role_s == "schema")
        role = GraphRole::schema;
    else if (role_s == "instance")
        role = GraphRole::instance;
    else
        throw ParseError(origin + ": invalid role '" + role_s + "'");

    if (!doc.contains("nodes") || !doc.at("nodes").is_array())
        throw ParseError(origin + ": 'nodes' must be an array");
    if (!doc.contains("links") || !doc.at("links").is_array())
        throw ParseError(origin + ": 'links' must be an array");

    std::vector<Node> nodes;
    for (const json& jn : doc.at("nodes")) {
        if (!jn.is_object()) throw ParseError(origin + ": node entries must be objects");
        const std::string where = origin + ": node";
        reject_unknown_keys(jn, {"id", "kind", "type", "label"}, where);
        Node n;
        n.id = require_string(jn, "id", where);
        n.kind = parse_node_kind(require_string(jn, "kind", where), where + " '" + n.id + "'");
        n.type = require_string(jn, "type", where + " '" + n.id + "'");
        if (jn.contains("label")) {
            if (!jn.at("label").is_string())
                throw ParseError(where + " '" + n.id + "': 'label' must be a string");
            n.label = jn.at("label").get<std::string>();
        }
        nodes.push_back(std::move(n));
    }

    std::vector<Link> links;
    for (const json& jl : doc.at("links")) {
        if (!jl.is_object()) throw ParseError(origin + ": link entries must be objects");
        const std::string where = origin + ": link";
        reject_unknown_keys(jl, {"src", "dst", "kind", "type"}, where);
        Link l;
        l.src = require_string(jl, "src", where);
        l.dst = require_string(jl, "dst", where);
        l.kind = parse_link_kind(require_string(jl, "kind", where + " " + l.src + "->" + l.dst),
                                 where + " " + l.src + "->" + l.dst);
        l.type = require_string(jl, "type", where + " " + l.src + "->" + l.dst);
        links.push_back(std::move(l));
    }

    return EventGraph(graph_id, role, std::move(nodes), std::move(links));
}

EventGraph load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open graph file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str(), path);
}

std::string graph_to_json(const EventGraph& g) {
    json doc;
    doc["graph_id"] = g.graph_id();
    doc["role"] = to_string(g.role());
    json jnodes = json::array();
    for (const Node& n : g.nodes()) {
        json jn;
        jn["id"] = n.id;
        jn["kind"] = to_string(n.kind);
        jn["type"] = n.type;
        if (!n.label.empty()) jn["label"] = n.label;
        jnodes.push_back(std::move(jn));
    }
    doc["nodes"] = std::move(jnodes);
    json jlinks = json::array();
    for (const Link& l : g.links()) {
        json jl;
        jl["src"] = l.src;
        jl["dst"] = l.dst;
        jl["kind"] = to_string(l.kind);
        jl["type"] = l.type;
        jlinks.push_back(std::move(jl));
    }
    doc["links"] = std::move(jlinks);
    return doc.dump(2) + "\n";
}

void save_graph(const EventGraph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write graph file '" + path + "'");
    out << graph_to_json(g);
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace segc
