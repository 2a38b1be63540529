#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iupc/base.hpp"
#include "iupc/constraint.hpp"
#include "iupc/matcher.hpp"
#include "iupc/model.hpp"

namespace iupc {

// One event within a multi-instance stream.
struct TraceEvent {
    std::string instance_id;
    std::string process_type;
    Event event;

    bool operator==(const TraceEvent&) const = default;
};

struct Action {
    enum class Kind { TriggerBefore, TriggerAfter, Queue, Resume, RaiseException };

    Kind kind = Kind::TriggerBefore;
    std::string constraint_id;
    std::string instance_id;
    std::string occurrence_id;
    std::string detail;

    bool operator==(const Action&) const = default;
};

std::string action_kind_text(Action::Kind k);

struct Violation {
    enum class Reason { Pattern, Data, Time, Resource, Sync };

    std::string constraint_id;
    std::string instance_id;
    std::map<std::string, std::string> binding;  // var -> occurrence id
    Reason reason = Reason::Pattern;
    Timestamp timestamp = 0;
    std::string detail;

    bool operator==(const Violation&) const = default;
};

std::string violation_reason_text(Violation::Reason r);
std::string violation_to_json_line(const Violation& v);

struct ObligationRow {
    std::string constraint_id;
    std::string instance_id;
    std::map<std::string, std::string> anchor;  // var -> occurrence id
    std::string waiting_for;

    bool operator==(const ObligationRow&) const = default;
};

struct StepResult {
    std::vector<Action> actions;
    std::vector<Violation> violations;
};

// Single-writer replay state machine enforcing the run-time part of a
// constraint set: trigger positions, attribution, synchronization, temporal
// distances, actor identity, and pattern obligations decided at instance
// close.
class MonitorSession {
public:
    MonitorSession(std::vector<ProcessConstraint> constraints, std::vector<ProcessSchema> schemas,
                   ResourceModel resources);

    StepResult step(const TraceEvent& e);
    std::vector<Violation> close_instance(const std::string& instance_id);
    std::vector<ObligationRow> pending_obligations() const;

    // mutex resource -> holding occurrence id; exposed for invariant checks
    const std::map<std::string, std::string>& mutex_table() const { return mutex_; }
    const std::vector<ProcessConstraint>& active_constraints() const { return constraints_; }

private:
    struct Occurrence {
        std::string label;
        std::string occurrence_id;
        std::optional<Timestamp> started;
        std::optional<Timestamp> completed;
        std::optional<std::string> start_actor;
        std::optional<std::string> complete_actor;
        std::map<std::string, Value> data;  // merged start/complete payloads
    };

    struct InstanceState {
        std::string process_type;
        Trace trace;  // accumulated event view the matcher runs against
        std::map<std::string, Occurrence> occurrences;
        std::map<std::string, Value> case_data;
        Timestamp last_timestamp = 0;
        bool closed = false;
    };

    const ProcessSchema* schema_for(const std::string& process_type) const;
    bool constraint_applies(const ProcessConstraint& c, const std::string& instance_id,
                            const InstanceState& inst) const;
    DataEnv data_env(const InstanceState& inst, const MatchBinding& binding) const;
    const Occurrence* occurrence_of(const InstanceState& inst, const MatchBinding& binding,
                                    const std::string& var) const;
    // Decides the condition obligations of one full binding once its data gate
    // is definite; records the decision so it is never re-emitted.
    void check_full_binding(const ProcessConstraint& c, const std::string& instance_id,
                            InstanceState& inst, const MatchBinding& full, bool at_close,
                            std::vector<Violation>& out, Timestamp now);

    std::vector<ProcessConstraint> constraints_;  // sorted by id
    std::vector<ProcessSchema> schemas_;
    ResourceModel resources_;

    std::map<std::string, InstanceState> instances_;
    // (constraint, instance, rendered binding) combinations already decided
    std::set<std::string> decided_;
    std::map<std::string, std::string> mutex_;              // resource -> occurrence
    std::map<std::string, std::deque<std::string>> queue_;  // resource -> waiting occurrences
    std::map<std::string, std::string> occurrence_instance_;  // occurrence -> owning instance
    Timestamp last_seen_ = 0;
    bool any_event_ = false;
};

// Session over the enabled constraints of `base` whose application includes
// run-time. `extra_monitored` force-loads additional constraint ids (e.g.
// compliance constraints a design-time check flagged for monitoring).
MonitorSession open_session(const ConstraintBase& base, std::vector<ProcessSchema> schemas,
                            ResourceModel resources,
                            const std::set<std::string>& extra_monitored = {});

// Steps every event (already ordered) and closes all instances at end of
// stream in ascending instance-id order.
struct ReplayResult {
    std::vector<Action> actions;
    std::vector<Violation> violations;
};

ReplayResult replay(MonitorSession& session, const std::vector<TraceEvent>& events);

// Flattens traces into one timestamp-ordered stream (stable across traces by
// instance id).
std::vector<TraceEvent> merge_traces(const std::vector<Trace>& traces);

}  // namespace iupc
