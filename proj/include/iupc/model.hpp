#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iupc/expr.hpp"
#include "iupc/time.hpp"

namespace iupc {

enum class NodeKind { Activity, Start, End, XorSplit, XorJoin, AndSplit, AndJoin };

std::string node_kind_text(NodeKind k);
std::optional<NodeKind> node_kind_from_text(const std::string& s);

struct Node {
    std::string id;
    NodeKind kind = NodeKind::Activity;
    std::string label;                   // nonempty iff kind == Activity
    std::vector<std::string> resources;  // passive resources this activity uses

    bool operator==(const Node&) const = default;
};

struct Guard {
    DataExpr expr;

    bool operator==(const Guard&) const = default;
};

struct ControlEdge {
    std::string from;
    std::string to;
    std::optional<Guard> guard;  // xor-split outgoing edges only

    bool operator==(const ControlEdge&) const = default;
};

enum class DataType { Integer, String, Boolean };

std::string data_type_text(DataType t);

struct DataDomain {
    // exactly one of the two is populated
    std::optional<std::pair<std::int64_t, std::int64_t>> int_range;
    std::vector<std::string> enumeration;

    bool operator==(const DataDomain&) const = default;
};

struct DataElement {
    std::string name;
    DataType type = DataType::Integer;
    std::optional<DataDomain> domain;

    bool operator==(const DataElement&) const = default;
};

enum class AccessMode { Read, Write };

struct DataEdge {
    std::string activity;  // node id
    std::string element;
    AccessMode mode = AccessMode::Read;

    bool operator==(const DataEdge&) const = default;
};

// Directed control-flow graph of one process type: activities, gateways,
// guarded edges, and the data elements the process carries.
struct ProcessSchema {
    std::string id;  // process-type name
    std::vector<Node> nodes;
    std::vector<ControlEdge> control_edges;
    std::vector<DataElement> data_elements;
    std::vector<DataEdge> data_edges;

    bool operator==(const ProcessSchema&) const = default;

    const Node* node(const std::string& node_id) const;
    const Node& start_node() const;
    const Node& end_node() const;
    const DataElement* data_element(const std::string& name) const;

    std::vector<const Node*> activities() const;
    std::vector<const Node*> activities_labeled(const std::string& label) const;
    std::set<std::string> activity_labels() const;

    // Edge indices sorted by (from, to); deterministic traversal order.
    std::vector<std::size_t> outgoing(const std::string& node_id) const;
    std::vector<std::size_t> incoming(const std::string& node_id) const;

    // Throws ModelError on invariant breach; returns warnings for conditions
    // that are flagged rather than rejected (overlapping xor guards).
    std::vector<std::string> validate() const;
};

// Domain-wide catalog of activity names, including ones not used by any
// currently loaded schema.
struct ActivityRepository {
    std::set<std::string> labels;

    bool operator==(const ActivityRepository&) const = default;
};

// Organizational model: roles, actors, role assignments, passive resources.
struct ResourceModel {
    std::set<std::string> roles;
    std::set<std::string> actors;
    std::map<std::string, std::set<std::string>> role_assignments;  // actor -> roles
    std::set<std::string> resources;

    bool operator==(const ResourceModel&) const = default;

    // Yes/No when the actor is known to the model, Maybe otherwise.
    Tri actor_has_role(const std::string& actor, const std::string& role) const;

    void validate() const;  // throws ModelError
};

enum class EventKind { Start, Complete };

struct Event {
    EventKind kind = EventKind::Start;
    std::string activity_label;
    std::string occurrence_id;
    Timestamp timestamp = 0;
    std::optional<std::string> actor;
    std::map<std::string, Value> data;

    bool operator==(const Event&) const = default;
};

// Timestamped start/complete event sequence of one process instance.
struct Trace {
    std::string instance_id;
    std::string process_type;
    std::vector<Event> events;

    bool operator==(const Trace&) const = default;

    void validate() const;  // throws OrderError / ModelError
};

}  // namespace iupc
