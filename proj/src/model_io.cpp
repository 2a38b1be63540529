#include "iupc/model_io.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "iupc/dsl.hpp"
#include "iupc/errors.hpp"

namespace iupc {

namespace {

using Json = nlohmann::ordered_json;

Json parse_json(std::string_view text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SyntaxError(what + ": " + e.what());
    }
}

const Json& require_field(const Json& j, const std::string& key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw SyntaxError(where + ": missing field '" + key + "'");
    return *it;
}

std::string require_string(const Json& j, const std::string& key, const std::string& where) {
    const Json& v = require_field(j, key, where);
    if (!v.is_string()) throw SyntaxError(where + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

Value value_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_string()) return j.get<std::string>();
    throw SyntaxError(where + ": values must be integers, booleans or strings");
}

Json value_to_json(const Value& v) {
    if (std::holds_alternative<std::int64_t>(v)) return std::get<std::int64_t>(v);
    if (std::holds_alternative<bool>(v)) return std::get<bool>(v);
    return std::get<std::string>(v);
}

}  // namespace

ProcessSchema parse_process_schema(std::string_view text) {
    Json j = parse_json(text, "schema document");
    if (!j.is_object()) throw SyntaxError("schema document: expected a JSON object");
    ProcessSchema s;
    s.id = require_string(j, "id", "schema document");

    for (const Json& nj : require_field(j, "nodes", "schema document")) {
        Node n;
        n.id = require_string(nj, "id", "node");
        std::string kind = require_string(nj, "kind", "node '" + n.id + "'");
        auto k = node_kind_from_text(kind);
        if (!k) throw SyntaxError("node '" + n.id + "': unknown kind '" + kind + "'");
        n.kind = *k;
        if (nj.contains("label")) n.label = nj["label"].get<std::string>();
        if (nj.contains("resources"))
            for (const Json& r : nj["resources"]) n.resources.push_back(r.get<std::string>());
        s.nodes.push_back(std::move(n));
    }

    for (const Json& ej : require_field(j, "control_edges", "schema document")) {
        ControlEdge e;
        e.from = require_string(ej, "from", "control edge");
        e.to = require_string(ej, "to", "control edge");
        if (ej.contains("guard") && !ej["guard"].is_null()) {
            if (!ej["guard"].is_string())
                throw SyntaxError("control edge '" + e.from + "' -> '" + e.to +
                                  "': guard must be an expression string");
            e.guard = Guard{parse_data_expr(ej["guard"].get<std::string>())};
        }
        s.control_edges.push_back(std::move(e));
    }

    if (j.contains("data_elements")) {
        for (const Json& dj : j["data_elements"]) {
            DataElement d;
            d.name = require_string(dj, "name", "data element");
            std::string type = require_string(dj, "type", "data element '" + d.name + "'");
            if (type == "integer")
                d.type = DataType::Integer;
            else if (type == "string")
                d.type = DataType::String;
            else if (type == "boolean")
                d.type = DataType::Boolean;
            else
                throw SyntaxError("data element '" + d.name + "': unknown type '" + type + "'");
            if (dj.contains("domain") && !dj["domain"].is_null()) {
                const Json& dom = dj["domain"];
                DataDomain domain;
                if (dom.is_object()) {
                    domain.int_range = {require_field(dom, "min", "domain").get<std::int64_t>(),
                                        require_field(dom, "max", "domain").get<std::int64_t>()};
                } else if (dom.is_array()) {
                    for (const Json& v : dom) domain.enumeration.push_back(v.get<std::string>());
                } else {
                    throw SyntaxError("data element '" + d.name +
                                      "': domain must be {min, max} or an enumeration array");
                }
                d.domain = std::move(domain);
            }
            s.data_elements.push_back(std::move(d));
        }
    }

    if (j.contains("data_edges")) {
        for (const Json& ej : j["data_edges"]) {
            DataEdge e;
            e.activity = require_string(ej, "activity", "data edge");
            e.element = require_string(ej, "data_element", "data edge");
            std::string mode = require_string(ej, "mode", "data edge");
            if (mode == "read")
                e.mode = AccessMode::Read;
            else if (mode == "write")
                e.mode = AccessMode::Write;
            else
                throw SyntaxError("data edge on '" + e.activity + "': unknown mode '" + mode + "'");
            s.data_edges.push_back(std::move(e));
        }
    }

    s.validate();
    return s;
}

std::string serialize_process_schema(const ProcessSchema& s) {
    Json j;
    j["id"] = s.id;
    j["nodes"] = Json::array();
    for (const Node& n : s.nodes) {
        Json nj;
        nj["id"] = n.id;
        nj["kind"] = node_kind_text(n.kind);
        if (!n.label.empty()) nj["label"] = n.label;
        if (!n.resources.empty()) nj["resources"] = n.resources;
        j["nodes"].push_back(std::move(nj));
    }
    j["control_edges"] = Json::array();
    for (const ControlEdge& e : s.control_edges) {
        Json ej;
        ej["from"] = e.from;
        ej["to"] = e.to;
        if (e.guard) ej["guard"] = e.guard->expr.to_string();
        j["control_edges"].push_back(std::move(ej));
    }
    if (!s.data_elements.empty()) {
        j["data_elements"] = Json::array();
        for (const DataElement& d : s.data_elements) {
            Json dj;
            dj["name"] = d.name;
            dj["type"] = data_type_text(d.type);
            if (d.domain) {
                if (d.domain->int_range) {
                    dj["domain"] = Json{{"min", d.domain->int_range->first},
                                        {"max", d.domain->int_range->second}};
                } else {
                    dj["domain"] = d.domain->enumeration;
                }
            }
            j["data_elements"].push_back(std::move(dj));
        }
    }
    if (!s.data_edges.empty()) {
        j["data_edges"] = Json::array();
        for (const DataEdge& e : s.data_edges) {
            Json ej;
            ej["activity"] = e.activity;
            ej["data_element"] = e.element;
            ej["mode"] = e.mode == AccessMode::Read ? "read" : "write";
            j["data_edges"].push_back(std::move(ej));
        }
    }
    return j.dump(2) + "\n";
}

ActivityRepository parse_activity_repository(std::string_view text) {
    Json j = parse_json(text, "repository document");
    ActivityRepository repo;
    for (const Json& l : require_field(j, "labels", "repository document")) {
        if (!l.is_string()) throw SyntaxError("repository document: labels must be strings");
        repo.labels.insert(l.get<std::string>());
    }
    return repo;
}

std::string serialize_activity_repository(const ActivityRepository& repo) {
    Json j;
    j["labels"] = repo.labels;
    return j.dump(2) + "\n";
}

ResourceModel parse_resource_model(std::string_view text) {
    Json j = parse_json(text, "resource model document");
    if (!j.is_object()) throw SyntaxError("resource model document: expected a JSON object");
    ResourceModel m;
    if (j.contains("roles"))
        for (const Json& r : j["roles"]) m.roles.insert(r.get<std::string>());
    if (j.contains("actors"))
        for (const Json& a : j["actors"]) m.actors.insert(a.get<std::string>());
    if (j.contains("role_assignments")) {
        for (auto it = j["role_assignments"].begin(); it != j["role_assignments"].end(); ++it) {
            std::set<std::string>& roles = m.role_assignments[it.key()];
            for (const Json& r : it.value()) roles.insert(r.get<std::string>());
        }
    }
    if (j.contains("resources"))
        for (const Json& r : j["resources"]) m.resources.insert(r.get<std::string>());
    m.validate();
    return m;
}

std::string serialize_resource_model(const ResourceModel& m) {
    Json j;
    j["roles"] = m.roles;
    j["actors"] = m.actors;
    j["role_assignments"] = Json::object();
    for (const auto& [actor, roles] : m.role_assignments) j["role_assignments"][actor] = roles;
    j["resources"] = m.resources;
    return j.dump(2) + "\n";
}

std::vector<Trace> parse_trace(std::string_view text) {
    std::vector<Trace> traces;
    std::map<std::string, std::size_t> index;
    std::istringstream lines{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw SyntaxError(std::string("trace document: ") + e.what(), line_no, 1);
        }
        const std::string where = "trace event (line " + std::to_string(line_no) + ")";
        std::string instance = require_string(j, "instance_id", where);
        std::string process_type = require_string(j, "process_type", where);
        Event e;
        std::string kind = require_string(j, "kind", where);
        if (kind == "start")
            e.kind = EventKind::Start;
        else if (kind == "complete")
            e.kind = EventKind::Complete;
        else
            throw SyntaxError(where + ": unknown event kind '" + kind + "'");
        e.activity_label = require_string(j, "activity_label", where);
        e.occurrence_id = require_string(j, "occurrence_id", where);
        e.timestamp = parse_iso8601(require_string(j, "timestamp", where));
        if (j.contains("actor") && !j["actor"].is_null()) e.actor = j["actor"].get<std::string>();
        if (j.contains("data") && !j["data"].is_null()) {
            for (auto it = j["data"].begin(); it != j["data"].end(); ++it)
                e.data[it.key()] = value_from_json(it.value(), where);
        }

        auto found = index.find(instance);
        if (found == index.end()) {
            index[instance] = traces.size();
            traces.push_back(Trace{instance, process_type, {}});
        } else if (traces[found->second].process_type != process_type) {
            throw ModelError("instance '" + instance + "' appears with conflicting process types");
        }
        traces[index[instance]].events.push_back(std::move(e));
    }
    std::sort(traces.begin(), traces.end(),
              [](const Trace& a, const Trace& b) { return a.instance_id < b.instance_id; });
    for (Trace& t : traces) {
        std::stable_sort(t.events.begin(), t.events.end(),
                         [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
        t.validate();
    }
    return traces;
}

std::string serialize_traces(const std::vector<Trace>& traces) {
    std::string out;
    for (const Trace& t : traces) {
        for (const Event& e : t.events) {
            Json j;
            j["instance_id"] = t.instance_id;
            j["process_type"] = t.process_type;
            j["kind"] = e.kind == EventKind::Start ? "start" : "complete";
            j["activity_label"] = e.activity_label;
            j["occurrence_id"] = e.occurrence_id;
            j["timestamp"] = format_iso8601(e.timestamp);
            if (e.actor) j["actor"] = *e.actor;
            if (!e.data.empty()) {
                Json dj = Json::object();
                for (const auto& [k, v] : e.data) dj[k] = value_to_json(v);
                j["data"] = std::move(dj);
            }
            out += j.dump();
            out += "\n";
        }
    }
    return out;
}

}  // namespace iupc
