#include "iupc/verifier.hpp"

#include <algorithm>

#include <json.hpp>

#include "iupc/errors.hpp"
#include "iupc/matcher.hpp"

namespace iupc {

namespace {

using Json = nlohmann::ordered_json;

enum class PathOutcome { Ok, Fail, Possible };

PathWitness witness_of(const ExecutionPath& path) {
    PathWitness w;
    w.nodes = path.nodes;
    for (const DataExpr& g : path.guards) w.guards.push_back(g.to_string());
    return w;
}

void sort_witnesses(std::vector<PathWitness>& witnesses) {
    std::sort(witnesses.begin(), witnesses.end(),
              [](const PathWitness& a, const PathWitness& b) {
                  if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
                  return a.nodes < b.nodes;
              });
    witnesses.erase(std::unique(witnesses.begin(), witnesses.end()), witnesses.end());
}

}  // namespace

std::string verdict_status_text(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::Satisfied: return "satisfied";
        case VerdictStatus::Violated: return "violated";
        case VerdictStatus::PossiblyViolated: return "possibly-violated";
    }
    return "satisfied";
}

Verdict check_design_time(const ProcessConstraint& c, const ProcessSchema& s,
                          const PathOptions& options) {
    std::vector<MatchBinding> anchors = match_schema(c.linkage.pattern, s);
    if (anchors.empty())
        throw PatternUnmatched("constraint '" + c.id + "': no anchor label occurs in schema '" +
                               s.id + "' (identification may be stale)");

    std::vector<ExecutionPath> paths = enumerate_paths(s, options);
    std::size_t n_ok = 0, n_fail = 0, n_possible = 0;
    std::vector<PathWitness> witnesses;

    for (const ExecutionPath& path : paths) {
        bool infeasible = false;
        PathFacts facts = path_facts(s, path, infeasible);
        if (infeasible) continue;

        bool path_bad = false;
        for (const MatchBinding& anchor : anchors) {
            bool on_path = true;
            for (const auto& [var, node_id] : anchor.vars) {
                (void)var;
                if (std::find(path.nodes.begin(), path.nodes.end(), node_id) == path.nodes.end())
                    on_path = false;
            }
            if (!on_path) continue;

            Tri gate = c.condition.data ? eval_data_expr_static(*c.condition.data, facts)
                                        : Tri::Yes;
            PathOutcome outcome;
            if (gate == Tri::No) {
                outcome = PathOutcome::Ok;  // constraint does not apply on this path
            } else if (holds_on_path(c.linkage.pattern, s, path, anchor)) {
                // structure satisfied; time/resource obligations stay run-time
                outcome = c.consequent_mandatory() ? PathOutcome::Ok : PathOutcome::Possible;
            } else if (!c.consequent_mandatory()) {
                // conditions only bind matched structure; unmatched is vacuous
                outcome = PathOutcome::Ok;
            } else {
                outcome = gate == Tri::Yes ? PathOutcome::Fail : PathOutcome::Possible;
            }

            switch (outcome) {
                case PathOutcome::Ok: ++n_ok; break;
                case PathOutcome::Fail: ++n_fail; path_bad = true; break;
                case PathOutcome::Possible: ++n_possible; path_bad = true; break;
            }
        }
        if (path_bad) witnesses.push_back(witness_of(path));
    }

    Verdict v;
    if (n_fail + n_possible == 0) {
        v.status = VerdictStatus::Satisfied;
    } else if (n_ok + n_possible == 0) {
        v.status = VerdictStatus::Violated;
    } else {
        v.status = VerdictStatus::PossiblyViolated;
        v.monitor_required = true;
    }
    sort_witnesses(witnesses);
    v.path_witnesses = std::move(witnesses);
    return v;
}

Verdict analyze_data_coverage(const ProcessConstraint& c, const ProcessSchema& s,
                              const PathOptions& options) {
    if (!c.condition.data)
        throw NotIntervalDecidable("constraint '" + c.id + "' carries no data condition");
    std::optional<std::string> element = single_case_element(*c.condition.data);
    if (!element)
        throw NotIntervalDecidable("constraint '" + c.id +
                                   "': data condition is not a comparison over one element");
    std::optional<IntervalSet> required = interval_of_expr(*c.condition.data, *element);
    if (!required)
        throw NotIntervalDecidable("constraint '" + c.id +
                                   "': data condition is not interval-decidable");
    const DataElement* de = s.data_element(*element);
    if (!de || de->type != DataType::Integer)
        throw NotIntervalDecidable("element '" + *element +
                                   "' is not an integer data element of schema '" + s.id + "'");
    bool guarded = false;
    for (const ControlEdge& e : s.control_edges) {
        if (!e.guard) continue;
        auto elems = e.guard->expr.referenced_elements();
        if (std::find(elems.begin(), elems.end(), *element) != elems.end()) guarded = true;
    }
    if (!guarded)
        throw NotIntervalDecidable("no xor guard of schema '" + s.id + "' constrains element '" +
                                   *element + "'");

    std::vector<MatchBinding> anchors = match_schema(c.linkage.pattern, s);
    if (anchors.empty())
        throw PatternUnmatched("constraint '" + c.id + "': no anchor label occurs in schema '" +
                               s.id + "' (identification may be stale)");

    IntervalSet covered = IntervalSet::none();
    for (const ExecutionPath& path : enumerate_paths(s, options)) {
        bool infeasible = false;
        PathFacts facts = path_facts(s, path, infeasible);
        if (infeasible) continue;

        bool satisfies = true;  // paths the pattern cannot trigger on are safe
        for (const MatchBinding& anchor : anchors) {
            bool on_path = true;
            for (const auto& [var, node_id] : anchor.vars) {
                (void)var;
                if (std::find(path.nodes.begin(), path.nodes.end(), node_id) == path.nodes.end())
                    on_path = false;
            }
            if (on_path && !holds_on_path(c.linkage.pattern, s, path, anchor)) satisfies = false;
        }
        if (!satisfies) continue;
        auto it = facts.find(*element);
        covered = covered.unite(it == facts.end() ? IntervalSet::all() : it->second.ints);
    }

    IntervalSet req = *required;
    if (de->domain && de->domain->int_range)
        req = req.intersect(
            IntervalSet::range(de->domain->int_range->first, de->domain->int_range->second));

    IntervalSet gap = req.difference(covered);
    Verdict v;
    if (gap.empty()) {
        v.status = VerdictStatus::Satisfied;
        return v;
    }
    v.status = VerdictStatus::PossiblyViolated;
    v.monitor_required = true;
    for (const Interval& part : gap.parts())
        v.interval_witnesses.push_back(IntervalWitness{*element, part.lo, part.hi});
    return v;
}

bool VerificationReport::all_satisfied() const {
    for (const VerificationEntry& e : entries) {
        if (!e.error.empty()) return false;
        if (e.verdict && e.verdict->status != VerdictStatus::Satisfied) return false;
    }
    return true;
}

VerificationReport verify_all(const ConstraintBase& base, const std::vector<ProcessSchema>& schemas,
                              const PathOptions& options) {
    if (!base.identification_current())
        throw StaleIdentification("constraint base version " + std::to_string(base.version()) +
                                  " exceeds identification version " +
                                  std::to_string(base.identification_version()));

    std::vector<const ProcessSchema*> ordered;
    for (const ProcessSchema& s : schemas) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(),
              [](const ProcessSchema* a, const ProcessSchema* b) { return a->id < b->id; });

    VerificationReport report;
    for (const auto& [id, c] : base.constraints()) {
        std::optional<IdStatus> status = base.status_of(id);
        if (status != IdStatus::Enabled) {
            VerificationEntry e;
            e.constraint_id = id;
            e.skipped_reason = status ? id_status_text(*status) : "unidentified";
            report.entries.push_back(std::move(e));
            ++report.skipped;
            continue;
        }
        if (c.properties.usage != Usage::Compliance) {
            VerificationEntry e;
            e.constraint_id = id;
            e.skipped_reason = usage_text(c.properties.usage) + std::string(" (run-time only)");
            report.entries.push_back(std::move(e));
            ++report.skipped;
            continue;
        }
        for (const ProcessSchema* s : ordered) {
            if (!c.linkage.context.matches_process(s->id)) continue;
            VerificationEntry e;
            e.constraint_id = id;
            e.schema_id = s->id;
            try {
                Verdict v = check_design_time(c, *s, options);
                if (v.status == VerdictStatus::PossiblyViolated && c.condition.data &&
                    c.consequent_mandatory()) {
                    try {
                        Verdict refined = analyze_data_coverage(c, *s, options);
                        refined.path_witnesses = v.path_witnesses;
                        if (refined.status == VerdictStatus::Satisfied)
                            refined.path_witnesses.clear();
                        v = std::move(refined);
                    } catch (const NotIntervalDecidable&) {
                        // keep the conservative verdict
                    }
                }
                e.verdict = std::move(v);
                ++report.checked;
            } catch (const Error& err) {
                e.error = std::string(err.kind()) + ": " + err.what();
            }
            report.entries.push_back(std::move(e));
        }
    }
    return report;
}

namespace {

Json verdict_to_json(const Verdict& v) {
    Json witnesses = Json::array();
    for (const PathWitness& w : v.path_witnesses) {
        Json wj;
        wj["kind"] = "path";
        wj["nodes"] = w.nodes;
        wj["guards"] = w.guards;
        witnesses.push_back(std::move(wj));
    }
    for (const IntervalWitness& w : v.interval_witnesses) {
        Json wj;
        wj["kind"] = "interval";
        wj["element"] = w.element;
        wj["lo"] = w.lo ? Json(*w.lo) : Json(nullptr);
        wj["hi"] = w.hi ? Json(*w.hi) : Json(nullptr);
        witnesses.push_back(std::move(wj));
    }
    Json j;
    j["status"] = verdict_status_text(v.status);
    j["witnesses"] = std::move(witnesses);
    j["monitor_required"] = v.monitor_required;
    return j;
}

}  // namespace

std::string report_to_json(const VerificationReport& report) {
    Json j;
    j["entries"] = Json::array();
    for (const VerificationEntry& e : report.entries) {
        Json ej;
        ej["constraint"] = e.constraint_id;
        ej["schema"] = e.schema_id.empty() ? Json(nullptr) : Json(e.schema_id);
        if (e.verdict) {
            Json v = verdict_to_json(*e.verdict);
            ej["status"] = v["status"];
            ej["witnesses"] = v["witnesses"];
            ej["monitor_required"] = v["monitor_required"];
        } else {
            ej["status"] = e.error.empty() ? "skipped" : "error";
            ej["witnesses"] = Json::array();
            ej["monitor_required"] = false;
        }
        ej["skipped_reason"] = e.skipped_reason.empty() ? Json(nullptr) : Json(e.skipped_reason);
        if (!e.error.empty()) ej["error"] = e.error;
        j["entries"].push_back(std::move(ej));
    }
    j["checked"] = report.checked;
    j["skipped"] = report.skipped;
    return j.dump(2) + "\n";
}

std::string report_to_text(const VerificationReport& report) {
    std::string out;
    for (const VerificationEntry& e : report.entries) {
        out += e.constraint_id;
        if (!e.schema_id.empty()) out += " @ " + e.schema_id;
        if (e.verdict) {
            out += ": " + verdict_status_text(e.verdict->status);
            if (e.verdict->monitor_required) out += " (monitor)";
            for (const IntervalWitness& w : e.verdict->interval_witnesses) {
                out += " witness " + w.element + " in [" +
                       (w.lo ? std::to_string(*w.lo) : std::string("-inf")) + ", " +
                       (w.hi ? std::to_string(*w.hi) : std::string("+inf")) + "]";
            }
            for (std::size_t i = 0; i < e.verdict->path_witnesses.size() && i < 3; ++i) {
                out += " witness path";
                for (const std::string& n : e.verdict->path_witnesses[i].nodes) out += " " + n;
            }
        } else if (!e.error.empty()) {
            out += ": error " + e.error;
        } else {
            out += ": skipped (" + e.skipped_reason + ")";
        }
        out += "\n";
    }
    out += "checked " + std::to_string(report.checked) + ", skipped " +
           std::to_string(report.skipped) + "\n";
    return out;
}

}  // namespace iupc
