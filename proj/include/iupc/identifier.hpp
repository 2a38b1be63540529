#pragma once

#include <string>
#include <vector>

#include "iupc/dsl.hpp"
#include "iupc/model.hpp"

namespace iupc {

enum class IdStatus { Enabled, Idle, NonProcess };

std::string id_status_text(IdStatus s);

struct EnabledEvidence {
    std::string schema_id;
    std::vector<std::string> anchor_labels;  // anchor labels found in that schema

    bool operator==(const EnabledEvidence&) const = default;
};

struct IdentificationResult {
    std::string rule_id;
    IdStatus status = IdStatus::NonProcess;
    std::vector<EnabledEvidence> enabled_in;      // enabled
    std::vector<std::string> repository_labels;   // idle

    bool operator==(const IdentificationResult&) const = default;
};

// Domain rules under consideration: parsed constraints plus opaque free-text
// rules (which carry no structural pattern and are never process constraints).
struct DomainRuleSet {
    std::vector<ProcessConstraint> constraints;
    std::vector<OpaqueRule> opaque;

    static DomainRuleSet from_document(const RuleDocument& doc);
};

// A rule is a process constraint iff every activity label it references
// resolves to a loaded schema or the repository; among process constraints,
// enabled iff at least one anchor label occurs in a schema within the rule's
// context scope, else idle. Results in rule order, one status per rule.
std::vector<IdentificationResult> identify(const DomainRuleSet& rules,
                                           const std::vector<ProcessSchema>& schemas,
                                           const ActivityRepository& repo);

struct StatusTransition {
    std::string rule_id;
    IdStatus from = IdStatus::NonProcess;
    IdStatus to = IdStatus::NonProcess;

    bool operator==(const StatusTransition&) const = default;
};

struct RecomputeResult {
    std::vector<IdentificationResult> results;
    std::vector<StatusTransition> transitions;
};

// Incremental re-identification after `added_label` was added to schema
// `schema_id`. `schemas_after` is the post-change schema set; only rules
// referencing the added label are re-evaluated.
RecomputeResult recompute_on_change(const std::vector<IdentificationResult>& prev,
                                    const DomainRuleSet& rules,
                                    const std::vector<ProcessSchema>& schemas_after,
                                    const ActivityRepository& repo,
                                    const std::string& added_label,
                                    const std::string& schema_id);

}  // namespace iupc
