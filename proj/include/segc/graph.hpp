#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace segc {

// Core data model for schema and instance event graphs.
//
// Both schemas and instances share one representation: event/entity nodes and
// temporal/argument/relation links. Temporal links are stored directed (src
// happens before dst) with the fixed type "TEMP"; the reversed traversal label
// "TEMP_REV" is synthesized at traversal time and never stored.

using NodeId = std::string;

enum class NodeKind { event, entity };
enum class LinkKind { temporal, argument, relation };
enum class GraphRole { schema, instance };

inline constexpr const char* kTemporalType = "TEMP";
inline constexpr const char* kTemporalRevType = "TEMP_REV";

struct Node {
    NodeId id;
    NodeKind kind = NodeKind::event;
    std::string type;   // event type or entity type; non-empty
    std::string label;  // optional free text

    bool operator==(const Node&) const = default;
};

struct Link {
    NodeId src;
    NodeId dst;
    LinkKind kind = LinkKind::temporal;
    std::string type;  // "TEMP" | argument role | relation name

    bool operator==(const Link&) const = default;
    auto operator<=>(const Link&) const = default;
};

// Immutable after construction; any number of concurrent readers is safe.
class EventGraph {
public:
    EventGraph(std::string graph_id, GraphRole role, std::vector<Node> nodes,
               std::vector<Link> links);

    const std::string& graph_id() const { return graph_id_; }
    GraphRole role() const { return role_; }

    // Canonical node order (sorted by id); stable across runs and platforms.
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Link>& links() const { return links_; }

    bool has_node(const NodeId& id) const;
    const Node& node(const NodeId& id) const;  // throws ValidationError if absent
    int node_index(const NodeId& id) const;    // index into nodes()

    std::vector<NodeId> event_ids() const;
    std::vector<NodeId> entity_ids() const;
    std::size_t event_count() const { return n_events_; }

    // Direction-agnostic adjacency. The filter restricts link kinds; an empty
    // optional means all kinds.
    std::set<NodeId> neighbors(const NodeId& id,
                               const std::optional<std::set<LinkKind>>& filter = std::nullopt) const;

    // Links incident to a node, in canonical order.
    const std::vector<int>& incident_links(const NodeId& id) const;

    std::size_t count_links(LinkKind kind) const;

    bool same_structure(const EventGraph& other) const;

private:
    std::string graph_id_;
    GraphRole role_;
    std::vector<Node> nodes_;
    std::vector<Link> links_;
    std::map<NodeId, int> index_;
    std::vector<std::vector<int>> incident_;  // per node: link indices
    std::size_t n_events_ = 0;

    void validate() const;
};

std::string to_string(NodeKind k);
std::string to_string(LinkKind k);
std::string to_string(GraphRole r);

EventGraph load_graph(const std::string& path);
EventGraph parse_graph(const std::string& json_text, const std::string& origin = "<string>");
void save_graph(const EventGraph& g, const std::string& path);
std::string graph_to_json(const EventGraph& g);

std::set<NodeId> neighbors(const EventGraph& g, const NodeId& id,
                           const std::optional<std::set<LinkKind>>& filter = std::nullopt);

// Copy of g without the given nodes and their incident links.
EventGraph remove_events(const EventGraph& g, const std::set<NodeId>& hidden);

}  // namespace segc
