#include "iupc/identifier.hpp"

#include <algorithm>

#include "iupc/errors.hpp"

namespace iupc {

std::string id_status_text(IdStatus s) {
    switch (s) {
        case IdStatus::Enabled: return "enabled";
        case IdStatus::Idle: return "idle";
        case IdStatus::NonProcess: return "non-process";
    }
    return "non-process";
}

DomainRuleSet DomainRuleSet::from_document(const RuleDocument& doc) {
    DomainRuleSet rules;
    rules.constraints = doc.constraints;
    rules.opaque = doc.opaque_rules;
    return rules;
}

namespace {

IdentificationResult identify_one(const ProcessConstraint& c,
                                  const std::vector<ProcessSchema>& schemas,
                                  const ActivityRepository& repo) {
    IdentificationResult r;
    r.rule_id = c.id;

    std::set<std::string> referenced = c.linkage.pattern.referenced_labels();
    std::set<std::string> all_schema_labels;
    for (const ProcessSchema& s : schemas) {
        auto labels = s.activity_labels();
        all_schema_labels.insert(labels.begin(), labels.end());
    }

    // process constraint iff every referenced label resolves somewhere
    for (const std::string& label : referenced) {
        if (!all_schema_labels.count(label) && !repo.labels.count(label)) {
            r.status = IdStatus::NonProcess;
            return r;
        }
    }

    // enabled iff an anchor label occurs in a schema within the context scope
    std::set<std::string> anchor_labels = c.linkage.pattern.anchor_labels();
    std::vector<const ProcessSchema*> ordered;
    for (const ProcessSchema& s : schemas) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(),
              [](const ProcessSchema* a, const ProcessSchema* b) { return a->id < b->id; });
    for (const ProcessSchema* s : ordered) {
        if (!c.linkage.context.matches_process(s->id)) continue;
        std::set<std::string> labels = s->activity_labels();
        EnabledEvidence evidence;
        evidence.schema_id = s->id;
        for (const std::string& anchor : anchor_labels)
            if (labels.count(anchor)) evidence.anchor_labels.push_back(anchor);
        if (!evidence.anchor_labels.empty()) r.enabled_in.push_back(std::move(evidence));
    }
    if (!r.enabled_in.empty()) {
        r.status = IdStatus::Enabled;
        return r;
    }

    r.status = IdStatus::Idle;
    for (const std::string& label : referenced)
        if (repo.labels.count(label)) r.repository_labels.push_back(label);
    std::sort(r.repository_labels.begin(), r.repository_labels.end());
    return r;
}

}  // namespace

std::vector<IdentificationResult> identify(const DomainRuleSet& rules,
                                           const std::vector<ProcessSchema>& schemas,
                                           const ActivityRepository& repo) {
    std::vector<IdentificationResult> results;
    results.reserve(rules.constraints.size() + rules.opaque.size());
    for (const ProcessConstraint& c : rules.constraints)
        results.push_back(identify_one(c, schemas, repo));
    for (const OpaqueRule& r : rules.opaque) {
        // no structural pattern, hence no anchor object
        IdentificationResult res;
        res.rule_id = r.id;
        res.status = IdStatus::NonProcess;
        results.push_back(std::move(res));
    }
    return results;
}

RecomputeResult recompute_on_change(const std::vector<IdentificationResult>& prev,
                                    const DomainRuleSet& rules,
                                    const std::vector<ProcessSchema>& schemas_after,
                                    const ActivityRepository& repo,
                                    const std::string& added_label,
                                    const std::string& schema_id) {
    RecomputeResult out;
    out.results = prev;

    const ProcessSchema* changed = nullptr;
    for (const ProcessSchema& s : schemas_after)
        if (s.id == schema_id) changed = &s;
    if (!changed) throw ModelError("changed schema '" + schema_id + "' is not loaded");
    if (!changed->activity_labels().count(added_label))
        throw ModelError("schema '" + schema_id + "' does not contain the added label '" +
                         added_label + "'");

    for (const ProcessConstraint& c : rules.constraints) {
        if (!c.linkage.pattern.referenced_labels().count(added_label)) continue;
        IdentificationResult fresh = identify_one(c, schemas_after, repo);
        auto slot = std::find_if(out.results.begin(), out.results.end(),
                                 [&](const IdentificationResult& r) { return r.rule_id == c.id; });
        if (slot == out.results.end())
            throw ModelError("previous identification lacks rule '" + c.id + "'");
        if (slot->status != fresh.status)
            out.transitions.push_back(StatusTransition{c.id, slot->status, fresh.status});
        *slot = std::move(fresh);
    }
    return out;
}

}  // namespace iupc
