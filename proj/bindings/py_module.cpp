#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "iupc/base.hpp"
#include "iupc/dsl.hpp"
#include "iupc/errors.hpp"
#include "iupc/identifier.hpp"
#include "iupc/matcher.hpp"
#include "iupc/model_io.hpp"
#include "iupc/monitor.hpp"
#include "iupc/paths.hpp"
#include "iupc/properties.hpp"
#include "iupc/verifier.hpp"

namespace py = pybind11;
using namespace iupc;

namespace {

py::dict verdict_to_dict(const Verdict& v) {
    py::dict d;
    d["status"] = verdict_status_text(v.status);
    d["monitor_required"] = v.monitor_required;
    py::list paths;
    for (const PathWitness& w : v.path_witnesses) {
        py::dict wj;
        wj["nodes"] = w.nodes;
        wj["guards"] = w.guards;
        paths.append(wj);
    }
    d["path_witnesses"] = paths;
    py::list intervals;
    for (const IntervalWitness& w : v.interval_witnesses) {
        py::dict wj;
        wj["element"] = w.element;
        wj["lo"] = w.lo ? py::cast(*w.lo) : py::none();
        wj["hi"] = w.hi ? py::cast(*w.hi) : py::none();
        intervals.append(wj);
    }
    d["interval_witnesses"] = intervals;
    return d;
}

py::dict violation_to_dict(const Violation& v) {
    py::dict d;
    d["constraint"] = v.constraint_id;
    d["instance"] = v.instance_id;
    d["reason"] = violation_reason_text(v.reason);
    d["timestamp"] = format_iso8601(v.timestamp);
    d["binding"] = v.binding;
    d["detail"] = v.detail;
    return d;
}

py::dict action_to_dict(const Action& a) {
    py::dict d;
    d["kind"] = action_kind_text(a.kind);
    d["constraint"] = a.constraint_id;
    d["instance"] = a.instance_id;
    d["occurrence"] = a.occurrence_id;
    d["detail"] = a.detail;
    return d;
}

std::set<std::string> property_set(const ProcessConstraint& c, bool scope) {
    std::set<std::string> out;
    if (scope) {
        for (Scope s : c.properties.scope) out.insert(scope_text(s));
    } else {
        for (Application a : c.properties.application) out.insert(application_text(a));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "process-constraint engine: identification, unification, "
              "design-time checking and trace replay";

    py::register_exception<Error>(m, "IupcError");

    py::class_<ProcessSchema>(m, "ProcessSchema")
        .def_readonly("id", &ProcessSchema::id)
        .def("activity_labels",
             [](const ProcessSchema& s) {
                 return std::vector<std::string>(s.activity_labels().begin(),
                                                 s.activity_labels().end());
             })
        .def("to_json", &serialize_process_schema)
        .def("__repr__", [](const ProcessSchema& s) {
            return "<ProcessSchema '" + s.id + "', " + std::to_string(s.nodes.size()) + " nodes>";
        });

    py::class_<ProcessConstraint>(m, "ProcessConstraint")
        .def_readonly("id", &ProcessConstraint::id)
        .def_property_readonly("usage",
                               [](const ProcessConstraint& c) {
                                   return usage_text(c.properties.usage);
                               })
        .def_property_readonly("application",
                               [](const ProcessConstraint& c) { return property_set(c, false); })
        .def_property_readonly("scope",
                               [](const ProcessConstraint& c) { return property_set(c, true); })
        .def_property_readonly("origin",
                               [](const ProcessConstraint& c) {
                                   return origin_text(c.properties.origin);
                               })
        .def_property_readonly("type",
                               [](const ProcessConstraint& c) { return classify_type(c); })
        .def("compact_form", &ProcessConstraint::compact_form)
        .def("serialize", [](const ProcessConstraint& c) { return serialize_constraint(c); })
        .def("__repr__", [](const ProcessConstraint& c) {
            return "<ProcessConstraint " + c.id + ": " + c.compact_form() + ">";
        });

    py::class_<ResourceModel>(m, "ResourceModel")
        .def("to_json", &serialize_resource_model);

    py::class_<Trace>(m, "Trace")
        .def_readonly("instance_id", &Trace::instance_id)
        .def_readonly("process_type", &Trace::process_type)
        .def("__len__", [](const Trace& t) { return t.events.size(); });

    m.def("parse_process_schema", [](const std::string& text) {
        return parse_process_schema(text);
    });
    m.def("parse_constraint", [](const std::string& text) { return parse_constraint(text); });
    m.def("parse_resource_model", [](const std::string& text) {
        return parse_resource_model(text);
    });
    m.def("parse_traces", [](const std::string& text) { return parse_trace(text); });

    m.def(
        "enumerate_paths",
        [](const ProcessSchema& s, int loop_bound) {
            PathOptions options;
            options.loop_bound = loop_bound;
            std::vector<std::vector<std::string>> out;
            for (const ExecutionPath& p : enumerate_paths(s, options)) out.push_back(p.nodes);
            return out;
        },
        py::arg("schema"), py::arg("loop_bound") = 2);

    m.def(
        "identify",
        [](const std::string& rules_text, const std::vector<ProcessSchema>& schemas,
           const std::vector<std::string>& repo_labels) {
            RuleDocument doc = parse_rule_document(rules_text);
            DomainRuleSet rules = DomainRuleSet::from_document(doc);
            ActivityRepository repo;
            repo.labels.insert(repo_labels.begin(), repo_labels.end());
            py::list out;
            for (const IdentificationResult& r : identify(rules, schemas, repo)) {
                py::dict d;
                d["rule"] = r.rule_id;
                d["status"] = id_status_text(r.status);
                py::list enabled;
                for (const EnabledEvidence& ev : r.enabled_in) {
                    py::dict e;
                    e["schema"] = ev.schema_id;
                    e["anchor_labels"] = ev.anchor_labels;
                    enabled.append(e);
                }
                d["enabled_in"] = enabled;
                d["repository_labels"] = r.repository_labels;
                out.append(d);
            }
            return out;
        },
        py::arg("rules_text"), py::arg("schemas"), py::arg("repo_labels"));

    m.def(
        "check_design_time",
        [](const ProcessConstraint& c, const ProcessSchema& s, int loop_bound) {
            PathOptions options;
            options.loop_bound = loop_bound;
            return verdict_to_dict(check_design_time(c, s, options));
        },
        py::arg("constraint"), py::arg("schema"), py::arg("loop_bound") = 2);

    m.def(
        "analyze_data_coverage",
        [](const ProcessConstraint& c, const ProcessSchema& s, int loop_bound) {
            PathOptions options;
            options.loop_bound = loop_bound;
            return verdict_to_dict(analyze_data_coverage(c, s, options));
        },
        py::arg("constraint"), py::arg("schema"), py::arg("loop_bound") = 2);

    m.def(
        "replay",
        [](const std::vector<ProcessConstraint>& constraints,
           const std::vector<ProcessSchema>& schemas, const ResourceModel& resources,
           const std::string& trace_text) {
            MonitorSession session(constraints, schemas, resources);
            ReplayResult result = replay(session, merge_traces(parse_trace(trace_text)));
            py::list actions, violations;
            for (const Action& a : result.actions) actions.append(action_to_dict(a));
            for (const Violation& v : result.violations) violations.append(violation_to_dict(v));
            py::dict out;
            out["actions"] = actions;
            out["violations"] = violations;
            return out;
        },
        py::arg("constraints"), py::arg("schemas"), py::arg("resources"), py::arg("trace_text"));
}
