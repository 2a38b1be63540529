#include "iupc/model.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "iupc/errors.hpp"

namespace iupc {

std::string node_kind_text(NodeKind k) {
    switch (k) {
        case NodeKind::Activity: return "activity";
        case NodeKind::Start: return "start";
        case NodeKind::End: return "end";
        case NodeKind::XorSplit: return "xor-split";
        case NodeKind::XorJoin: return "xor-join";
        case NodeKind::AndSplit: return "and-split";
        case NodeKind::AndJoin: return "and-join";
    }
    return "activity";
}

std::optional<NodeKind> node_kind_from_text(const std::string& s) {
    if (s == "activity") return NodeKind::Activity;
    if (s == "start") return NodeKind::Start;
    if (s == "end") return NodeKind::End;
    if (s == "xor-split") return NodeKind::XorSplit;
    if (s == "xor-join") return NodeKind::XorJoin;
    if (s == "and-split") return NodeKind::AndSplit;
    if (s == "and-join") return NodeKind::AndJoin;
    return std::nullopt;
}

std::string data_type_text(DataType t) {
    switch (t) {
        case DataType::Integer: return "integer";
        case DataType::String: return "string";
        case DataType::Boolean: return "boolean";
    }
    return "integer";
}

const Node* ProcessSchema::node(const std::string& node_id) const {
    for (const Node& n : nodes)
        if (n.id == node_id) return &n;
    return nullptr;
}

const Node& ProcessSchema::start_node() const {
    for (const Node& n : nodes)
        if (n.kind == NodeKind::Start) return n;
    throw ModelError("schema '" + id + "' has no start node");
}

const Node& ProcessSchema::end_node() const {
    for (const Node& n : nodes)
        if (n.kind == NodeKind::End) return n;
    throw ModelError("schema '" + id + "' has no end node");
}

const DataElement* ProcessSchema::data_element(const std::string& name) const {
    for (const DataElement& d : data_elements)
        if (d.name == name) return &d;
    return nullptr;
}

std::vector<const Node*> ProcessSchema::activities() const {
    std::vector<const Node*> out;
    for (const Node& n : nodes)
        if (n.kind == NodeKind::Activity) out.push_back(&n);
    return out;
}

std::vector<const Node*> ProcessSchema::activities_labeled(const std::string& label) const {
    std::vector<const Node*> out;
    for (const Node& n : nodes)
        if (n.kind == NodeKind::Activity && n.label == label) out.push_back(&n);
    return out;
}

std::set<std::string> ProcessSchema::activity_labels() const {
    std::set<std::string> out;
    for (const Node& n : nodes)
        if (n.kind == NodeKind::Activity) out.insert(n.label);
    return out;
}

std::vector<std::size_t> ProcessSchema::outgoing(const std::string& node_id) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < control_edges.size(); ++i)
        if (control_edges[i].from == node_id) out.push_back(i);
    std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
        return control_edges[a].to < control_edges[b].to;
    });
    return out;
}

std::vector<std::size_t> ProcessSchema::incoming(const std::string& node_id) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < control_edges.size(); ++i)
        if (control_edges[i].to == node_id) out.push_back(i);
    std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
        return control_edges[a].from < control_edges[b].from;
    });
    return out;
}

namespace {

std::set<std::string> reachable(const ProcessSchema& s, const std::string& from, bool forward) {
    std::set<std::string> seen{from};
    std::deque<std::string> work{from};
    while (!work.empty()) {
        std::string cur = work.front();
        work.pop_front();
        for (const ControlEdge& e : s.control_edges) {
            const std::string& src = forward ? e.from : e.to;
            const std::string& dst = forward ? e.to : e.from;
            if (src == cur && seen.insert(dst).second) work.push_back(dst);
        }
    }
    return seen;
}

}  // namespace

std::vector<std::string> ProcessSchema::validate() const {
    std::vector<std::string> warnings;
    if (id.empty()) throw ModelError("schema has an empty id");

    std::set<std::string> ids;
    std::size_t starts = 0, ends = 0;
    for (const Node& n : nodes) {
        if (n.id.empty()) throw ModelError("schema '" + id + "': node with empty id");
        if (!ids.insert(n.id).second)
            throw ModelError("schema '" + id + "': duplicate node id '" + n.id + "'");
        if (n.kind == NodeKind::Start) ++starts;
        if (n.kind == NodeKind::End) ++ends;
        bool is_activity = n.kind == NodeKind::Activity;
        if (is_activity && n.label.empty())
            throw ModelError("schema '" + id + "': activity '" + n.id + "' has no label");
        if (!is_activity && !n.label.empty())
            throw ModelError("schema '" + id + "': non-activity '" + n.id + "' carries a label");
    }
    if (starts != 1) throw ModelError("schema '" + id + "': expected exactly one start node");
    if (ends != 1) throw ModelError("schema '" + id + "': expected exactly one end node");

    for (const ControlEdge& e : control_edges) {
        if (!node(e.from))
            throw ModelError("schema '" + id + "': edge from unknown node '" + e.from + "'");
        if (!node(e.to))
            throw ModelError("schema '" + id + "': edge to unknown node '" + e.to + "'");
    }

    for (const Node& n : nodes) {
        std::size_t out = outgoing(n.id).size();
        std::size_t in = incoming(n.id).size();
        auto fail = [&](const std::string& what) {
            throw ModelError("schema '" + id + "': node '" + n.id + "' " + what);
        };
        switch (n.kind) {
            case NodeKind::Start:
                if (in != 0) fail("is a start node with incoming edges");
                if (out != 1) fail("is a start node without exactly one outgoing edge");
                break;
            case NodeKind::End:
                if (out != 0) fail("is an end node with outgoing edges");
                if (in < 1) fail("is an end node without incoming edges");
                break;
            case NodeKind::Activity:
                if (in != 1 || out != 1) fail("is an activity without exactly one incoming and one outgoing edge");
                break;
            case NodeKind::XorSplit:
            case NodeKind::AndSplit:
                if (in != 1) fail("is a split without exactly one incoming edge");
                if (out < 2) fail("is a split with fewer than two outgoing edges");
                break;
            case NodeKind::XorJoin:
            case NodeKind::AndJoin:
                if (out != 1) fail("is a join without exactly one outgoing edge");
                if (in < 2) fail("is a join with fewer than two incoming edges");
                break;
        }
    }

    // Guards sit exactly on xor-split outgoing edges and reference only
    // declared case-level elements.
    for (const ControlEdge& e : control_edges) {
        const Node* from = node(e.from);
        bool needs_guard = from->kind == NodeKind::XorSplit;
        if (needs_guard && !e.guard)
            throw ModelError("schema '" + id + "': xor-split edge '" + e.from + "' -> '" + e.to +
                             "' lacks a guard");
        if (!needs_guard && e.guard)
            throw ModelError("schema '" + id + "': edge '" + e.from + "' -> '" + e.to +
                             "' carries a guard but is not an xor-split branch");
        if (e.guard) {
            if (!e.guard->expr.referenced_vars().empty())
                throw ModelError("schema '" + id + "': guard on edge '" + e.from + "' -> '" +
                                 e.to + "' references pattern variables");
            for (const std::string& elem : e.guard->expr.referenced_elements())
                if (!data_element(elem))
                    throw ModelError("schema '" + id + "': guard on edge '" + e.from + "' -> '" +
                                     e.to + "' references undeclared data element '" + elem + "'");
        }
    }

    // Guards of one xor-split should be pairwise unsatisfiable together;
    // overlaps are flagged, not rejected.
    for (const Node& n : nodes) {
        if (n.kind != NodeKind::XorSplit) continue;
        auto edges = outgoing(n.id);
        for (std::size_t i = 0; i < edges.size(); ++i) {
            for (std::size_t j = i + 1; j < edges.size(); ++j) {
                const auto& gi = control_edges[edges[i]].guard;
                const auto& gj = control_edges[edges[j]].guard;
                if (!gi || !gj) continue;
                PathFacts joint = facts_from_guards({gi->expr, gj->expr});
                bool contradictory = false;
                for (const auto& [elem, facts] : joint) {
                    (void)elem;
                    if (facts.contradictory || facts.ints.empty()) contradictory = true;
                }
                if (!contradictory && joint.empty())
                    continue;  // nothing decidable; leave unflagged
                if (!contradictory)
                    warnings.push_back("schema '" + id + "': xor-split '" + n.id +
                                       "' has overlapping guards on branches to '" +
                                       control_edges[edges[i]].to + "' and '" +
                                       control_edges[edges[j]].to + "'");
            }
        }
    }

    const std::string start_id = start_node().id;
    const std::string end_id = end_node().id;
    std::set<std::string> from_start = reachable(*this, start_id, true);
    std::set<std::string> to_end = reachable(*this, end_id, false);
    for (const Node& n : nodes) {
        if (!from_start.count(n.id) || !to_end.count(n.id))
            throw ModelError("schema '" + id + "': node '" + n.id +
                             "' lies on no start-to-end path");
    }

    for (const DataElement& d : data_elements) {
        if (d.name.empty()) throw ModelError("schema '" + id + "': data element with empty name");
        if (d.domain) {
            bool has_range = d.domain->int_range.has_value();
            bool has_enum = !d.domain->enumeration.empty();
            if (has_range == has_enum)
                throw ModelError("schema '" + id + "': data element '" + d.name +
                                 "' domain must be an integer range or a nonempty enumeration");
            if (has_range && d.domain->int_range->first > d.domain->int_range->second)
                throw ModelError("schema '" + id + "': data element '" + d.name +
                                 "' has an empty integer range");
        }
    }

    for (const DataEdge& e : data_edges) {
        const Node* n = node(e.activity);
        if (!n || n->kind != NodeKind::Activity)
            throw ModelError("schema '" + id + "': data edge references unknown activity '" +
                             e.activity + "'");
        if (!data_element(e.element))
            throw ModelError("schema '" + id + "': data edge references undeclared element '" +
                             e.element + "'");
    }

    return warnings;
}

Tri ResourceModel::actor_has_role(const std::string& actor, const std::string& role) const {
    if (!actors.count(actor)) return Tri::Maybe;
    auto it = role_assignments.find(actor);
    if (it == role_assignments.end()) return Tri::No;
    return it->second.count(role) ? Tri::Yes : Tri::No;
}

void ResourceModel::validate() const {
    for (const auto& [actor, assigned] : role_assignments) {
        if (!actors.count(actor))
            throw ModelError("resource model assigns roles to unknown actor '" + actor + "'");
        for (const std::string& role : assigned)
            if (!roles.count(role))
                throw ModelError("actor '" + actor + "' is assigned to undeclared role '" + role +
                                 "'");
    }
}

void Trace::validate() const {
    Timestamp last = std::numeric_limits<Timestamp>::min();
    std::set<std::string> started, completed;
    for (const Event& e : events) {
        if (e.timestamp < last)
            throw OrderError("trace '" + instance_id + "': events not ordered by timestamp at '" +
                             e.occurrence_id + "'");
        last = e.timestamp;
        if (e.activity_label.empty())
            throw ModelError("trace '" + instance_id + "': event with empty activity label");
        if (e.occurrence_id.empty())
            throw ModelError("trace '" + instance_id + "': event with empty occurrence id");
        if (e.kind == EventKind::Start) {
            if (!started.insert(e.occurrence_id).second)
                throw OrderError("trace '" + instance_id + "': duplicate START for occurrence '" +
                                 e.occurrence_id + "'");
        } else {
            if (!started.count(e.occurrence_id))
                throw OrderError("trace '" + instance_id + "': COMPLETE without START for occurrence '" +
                                 e.occurrence_id + "'");
            if (!completed.insert(e.occurrence_id).second)
                throw OrderError("trace '" + instance_id + "': duplicate COMPLETE for occurrence '" +
                                 e.occurrence_id + "'");
        }
    }
}

}  // namespace iupc
