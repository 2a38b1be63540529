#include "iupc/monitor.hpp"

#include <algorithm>

#include <json.hpp>

#include "iupc/errors.hpp"

namespace iupc {

namespace {

using Json = nlohmann::ordered_json;

std::string binding_key(const std::string& constraint_id, const std::string& instance_id,
                        const MatchBinding& b) {
    std::string key = constraint_id + "|" + instance_id;
    for (const auto& [var, occ] : b.vars) key += "|" + var + "=" + occ;
    return key;
}

std::string behavior_detail(const Behavior& b) {
    switch (b.kind) {
        case Behavior::Kind::Attribute:
            return "attribute " + b.key + " := " + attribute_value_to_string(b.value);
        case Behavior::Kind::Synchronize:
            return "synchronize '" + b.resource + "'";
        case Behavior::Kind::RaiseException:
            return "raise-exception" + (b.message.empty() ? "" : " '" + b.message + "'");
        case Behavior::Kind::None:
            break;
    }
    return {};
}

// Anchor part of a (possibly full) binding.
MatchBinding anchor_part(const StructuralPattern& p, const MatchBinding& b) {
    MatchBinding out;
    out.completeness = MatchBinding::Completeness::AnchorOnly;
    for (const PatternBinding& a : p.anchors()) {
        auto it = b.vars.find(a.var);
        if (it != b.vars.end()) out.vars.insert(*it);
    }
    return out;
}

}  // namespace

std::string action_kind_text(Action::Kind k) {
    switch (k) {
        case Action::Kind::TriggerBefore: return "trigger-before";
        case Action::Kind::TriggerAfter: return "trigger-after";
        case Action::Kind::Queue: return "queue";
        case Action::Kind::Resume: return "resume";
        case Action::Kind::RaiseException: return "raise-exception";
    }
    return "trigger-before";
}

std::string violation_reason_text(Violation::Reason r) {
    switch (r) {
        case Violation::Reason::Pattern: return "pattern";
        case Violation::Reason::Data: return "data";
        case Violation::Reason::Time: return "time";
        case Violation::Reason::Resource: return "resource";
        case Violation::Reason::Sync: return "sync";
    }
    return "pattern";
}

std::string violation_to_json_line(const Violation& v) {
    Json j;
    j["constraint"] = v.constraint_id;
    j["instance"] = v.instance_id;
    j["reason"] = violation_reason_text(v.reason);
    j["timestamp"] = format_iso8601(v.timestamp);
    if (!v.binding.empty()) {
        Json b = Json::object();
        for (const auto& [var, occ] : v.binding) b[var] = occ;
        j["binding"] = std::move(b);
    }
    if (!v.detail.empty()) j["detail"] = v.detail;
    return j.dump();
}

MonitorSession::MonitorSession(std::vector<ProcessConstraint> constraints,
                               std::vector<ProcessSchema> schemas, ResourceModel resources)
    : constraints_(std::move(constraints)),
      schemas_(std::move(schemas)),
      resources_(std::move(resources)) {
    std::sort(constraints_.begin(), constraints_.end(),
              [](const ProcessConstraint& a, const ProcessConstraint& b) { return a.id < b.id; });
}

const ProcessSchema* MonitorSession::schema_for(const std::string& process_type) const {
    for (const ProcessSchema& s : schemas_)
        if (s.id == process_type) return &s;
    return nullptr;
}

bool MonitorSession::constraint_applies(const ProcessConstraint& c, const std::string& instance_id,
                                        const InstanceState& inst) const {
    return c.linkage.context.matches_process(inst.process_type) &&
           c.linkage.context.matches_instance(instance_id);
}

const MonitorSession::Occurrence* MonitorSession::occurrence_of(const InstanceState& inst,
                                                                const MatchBinding& binding,
                                                                const std::string& var) const {
    auto it = binding.vars.find(var);
    if (it == binding.vars.end()) return nullptr;
    auto oit = inst.occurrences.find(it->second);
    return oit == inst.occurrences.end() ? nullptr : &oit->second;
}

DataEnv MonitorSession::data_env(const InstanceState& inst, const MatchBinding& binding) const {
    DataEnv env;
    env.case_data = &inst.case_data;
    env.occurrence_data = [this, &inst, &binding](
                              const std::string& var) -> const std::map<std::string, Value>* {
        const Occurrence* occ = occurrence_of(inst, binding, var);
        return occ ? &occ->data : nullptr;
    };
    return env;
}

void MonitorSession::check_full_binding(const ProcessConstraint& c, const std::string& instance_id,
                                        InstanceState& inst, const MatchBinding& full,
                                        bool at_close, std::vector<Violation>& out, Timestamp now) {
    std::string key = binding_key(c.id, instance_id, full);
    if (decided_.count(key)) return;

    Tri gate = c.condition.data ? eval_data_expr(*c.condition.data, data_env(inst, full))
                                : Tri::Yes;
    if (gate == Tri::Maybe && !at_close) return;  // data may still arrive
    decided_.insert(key);
    if (gate != Tri::Yes) return;  // the condition gate does not apply

    for (const TimeAtom& atom : c.condition.time.atoms) {
        const Occurrence* first = occurrence_of(inst, full, atom.first);
        const Occurrence* second = occurrence_of(inst, full, atom.second);
        if (!first || !second || !first->completed || !second->started) continue;
        // measured COMPLETE(first) -> START(second)
        Timestamp gap = *second->started - *first->completed;
        bool bad = atom.kind == TimeAtom::Kind::MinBetween ? gap < atom.gap.ms
                                                           : gap > atom.gap.ms;
        if (bad) {
            Violation v;
            v.constraint_id = c.id;
            v.instance_id = instance_id;
            v.binding = full.vars;
            v.reason = Violation::Reason::Time;
            v.timestamp = now;
            v.detail = (atom.kind == TimeAtom::Kind::MinBetween ? "min_time_between("
                                                                : "max_time_between(") +
                       atom.first + ", " + atom.second + ", " + format_duration(atom.gap) +
                       ") breached";
            out.push_back(std::move(v));
        }
    }

    for (const ResourceAtom& atom : c.condition.resource.atoms) {
        auto actor_of = [&](const std::string& var) -> std::optional<std::string> {
            const Occurrence* occ = occurrence_of(inst, full, var);
            if (!occ) return std::nullopt;
            return occ->complete_actor ? occ->complete_actor : occ->start_actor;
        };
        std::optional<std::string> bad_detail;
        switch (atom.kind) {
            case ResourceAtom::Kind::Role: {
                auto actor = actor_of(atom.var);
                if (actor && resources_.actor_has_role(*actor, atom.name) == Tri::No)
                    bad_detail = "actor '" + *actor + "' lacks role '" + atom.name + "'";
                break;
            }
            case ResourceAtom::Kind::SameActor: {
                auto a = actor_of(atom.var), b = actor_of(atom.other_var);
                if (a && b && *a != *b)
                    bad_detail = "same-actor(" + atom.var + ", " + atom.other_var + ") breached";
                break;
            }
            case ResourceAtom::Kind::DifferentActor: {
                auto a = actor_of(atom.var), b = actor_of(atom.other_var);
                if (a && b && *a == *b)
                    bad_detail =
                        "different-actor(" + atom.var + ", " + atom.other_var + ") breached";
                break;
            }
            case ResourceAtom::Kind::UsesResource: {
                const ProcessSchema* schema = schema_for(inst.process_type);
                const Occurrence* occ = occurrence_of(inst, full, atom.var);
                if (!schema || !occ) break;
                bool uses = false;
                for (const Node* n : schema->activities_labeled(occ->label))
                    if (std::find(n->resources.begin(), n->resources.end(), atom.name) !=
                        n->resources.end())
                        uses = true;
                if (!uses)
                    bad_detail = "activity '" + occ->label + "' does not use resource '" +
                                 atom.name + "'";
                break;
            }
        }
        if (bad_detail) {
            Violation v;
            v.constraint_id = c.id;
            v.instance_id = instance_id;
            v.binding = full.vars;
            v.reason = Violation::Reason::Resource;
            v.timestamp = now;
            v.detail = *bad_detail;
            out.push_back(std::move(v));
        }
    }
}

StepResult MonitorSession::step(const TraceEvent& e) {
    StepResult result;
    const Event& ev = e.event;
    if (any_event_ && ev.timestamp < last_seen_)
        throw OutOfOrderEvent("event '" + ev.occurrence_id + "' is older than the last seen event");
    any_event_ = true;
    last_seen_ = ev.timestamp;

    auto [it, inserted] = instances_.try_emplace(e.instance_id);
    InstanceState& inst = it->second;
    if (inserted) {
        inst.process_type = e.process_type;
        inst.trace.instance_id = e.instance_id;
        inst.trace.process_type = e.process_type;
    } else if (inst.closed) {
        throw OutOfOrderEvent("event for closed instance '" + e.instance_id + "'");
    } else if (inst.process_type != e.process_type) {
        throw ModelError("instance '" + e.instance_id + "' appears with conflicting process types");
    }

    if (ev.kind == EventKind::Start) {
        auto [oit, fresh] = inst.occurrences.try_emplace(ev.occurrence_id);
        if (!fresh && oit->second.started)
            throw OutOfOrderEvent("duplicate START for occurrence '" + ev.occurrence_id + "'");
        Occurrence& occ = oit->second;
        occ.label = ev.activity_label;
        occ.occurrence_id = ev.occurrence_id;
        occ.started = ev.timestamp;
        occ.start_actor = ev.actor;
        for (const auto& [k, v] : ev.data) occ.data[k] = v;
        occurrence_instance_[ev.occurrence_id] = e.instance_id;
    } else {
        auto oit = inst.occurrences.find(ev.occurrence_id);
        if (oit == inst.occurrences.end() || !oit->second.started)
            throw OutOfOrderEvent("COMPLETE without START for occurrence '" + ev.occurrence_id +
                                  "'");
        if (oit->second.completed)
            throw OutOfOrderEvent("duplicate COMPLETE for occurrence '" + ev.occurrence_id + "'");
        if (oit->second.label != ev.activity_label)
            throw ModelError("occurrence '" + ev.occurrence_id +
                             "' completes with a different activity label");
        Occurrence& occ = oit->second;
        occ.completed = ev.timestamp;
        occ.complete_actor = ev.actor;
        for (const auto& [k, v] : ev.data) occ.data[k] = v;
    }
    for (const auto& [k, v] : ev.data) inst.case_data[k] = v;
    inst.trace.events.push_back(ev);
    inst.last_timestamp = ev.timestamp;

    const ProcessSchema* schema = schema_for(inst.process_type);

    for (const ProcessConstraint& c : constraints_) {
        if (!constraint_applies(c, e.instance_id, inst)) continue;

        // attribution: starting an activity carrying ROLE/ACTOR restrictions
        if (ev.kind == EventKind::Start && c.behavior.kind == Behavior::Kind::Attribute) {
            const PatternBinding* target = c.linkage.pattern.binding(c.behavior.target);
            if (target && target->label == ev.activity_label && ev.actor) {
                if (c.behavior.key == "ROLE" && std::holds_alternative<Value>(c.behavior.value)) {
                    const Value& v = std::get<Value>(c.behavior.value);
                    if (std::holds_alternative<std::string>(v) &&
                        resources_.actor_has_role(*ev.actor, std::get<std::string>(v)) ==
                            Tri::No) {
                        Violation viol;
                        viol.constraint_id = c.id;
                        viol.instance_id = e.instance_id;
                        viol.binding = {{c.behavior.target, ev.occurrence_id}};
                        viol.reason = Violation::Reason::Resource;
                        viol.timestamp = ev.timestamp;
                        viol.detail = "actor '" + *ev.actor + "' lacks role '" +
                                      std::get<std::string>(v) + "' for '" + ev.activity_label +
                                      "'";
                        result.violations.push_back(std::move(viol));
                    }
                } else if (c.behavior.key == "ACTOR" &&
                           std::holds_alternative<Value>(c.behavior.value)) {
                    const Value& v = std::get<Value>(c.behavior.value);
                    if (std::holds_alternative<std::string>(v) &&
                        *ev.actor != std::get<std::string>(v)) {
                        Violation viol;
                        viol.constraint_id = c.id;
                        viol.instance_id = e.instance_id;
                        viol.binding = {{c.behavior.target, ev.occurrence_id}};
                        viol.reason = Violation::Reason::Resource;
                        viol.timestamp = ev.timestamp;
                        viol.detail = "activity '" + ev.activity_label + "' is assigned to '" +
                                      std::get<std::string>(v) + "'";
                        result.violations.push_back(std::move(viol));
                    }
                }
            }
        }

        // trigger positions
        for (const TriggerPosition& tp : c.linkage.trigger_positions) {
            bool fires = (tp.position == TriggerPosition::Position::Before &&
                          ev.kind == EventKind::Start) ||
                         (tp.position == TriggerPosition::Position::After &&
                          ev.kind == EventKind::Complete);
            if (!fires) continue;
            const PatternBinding* target = c.linkage.pattern.binding(tp.target);
            if (!target || target->label != ev.activity_label) continue;
            if (c.condition.data) {
                MatchBinding self;
                self.vars[tp.target] = ev.occurrence_id;
                if (eval_data_expr(*c.condition.data, data_env(inst, self)) != Tri::Yes) continue;
            }
            Action a;
            a.kind = c.behavior.kind == Behavior::Kind::RaiseException
                         ? Action::Kind::RaiseException
                         : (tp.position == TriggerPosition::Position::Before
                                ? Action::Kind::TriggerBefore
                                : Action::Kind::TriggerAfter);
            a.constraint_id = c.id;
            a.instance_id = e.instance_id;
            a.occurrence_id = ev.occurrence_id;
            a.detail = behavior_detail(c.behavior);
            result.actions.push_back(std::move(a));
        }

        // synchronization on a mutex resource
        if (c.behavior.kind == Behavior::Kind::Synchronize) {
            const PatternBinding* target = c.linkage.pattern.binding(c.behavior.target);
            if (target && target->label == ev.activity_label) {
                const std::string& res = c.behavior.resource;
                if (ev.kind == EventKind::Start) {
                    auto holder = mutex_.find(res);
                    if (holder == mutex_.end()) {
                        mutex_[res] = ev.occurrence_id;
                    } else {
                        queue_[res].push_back(ev.occurrence_id);
                        Action a;
                        a.kind = Action::Kind::Queue;
                        a.constraint_id = c.id;
                        a.instance_id = e.instance_id;
                        a.occurrence_id = ev.occurrence_id;
                        a.detail = "resource '" + res + "' held by '" + holder->second + "'";
                        result.actions.push_back(std::move(a));
                    }
                } else {
                    auto holder = mutex_.find(res);
                    if (holder != mutex_.end() && holder->second == ev.occurrence_id) {
                        mutex_.erase(holder);
                        auto& waiting = queue_[res];
                        if (!waiting.empty()) {
                            std::string next = waiting.front();
                            waiting.pop_front();
                            mutex_[res] = next;
                            Action a;
                            a.kind = Action::Kind::Resume;
                            a.constraint_id = c.id;
                            a.instance_id = occurrence_instance_.count(next)
                                                ? occurrence_instance_[next]
                                                : "";
                            a.occurrence_id = next;
                            a.detail = "acquired resource '" + res + "'";
                            result.actions.push_back(std::move(a));
                        }
                    } else {
                        auto& waiting = queue_[res];
                        auto wit = std::find(waiting.begin(), waiting.end(), ev.occurrence_id);
                        if (wit != waiting.end()) {
                            // ran to completion while the resource was held elsewhere
                            waiting.erase(wit);
                            Violation v;
                            v.constraint_id = c.id;
                            v.instance_id = e.instance_id;
                            v.binding = {{c.behavior.target, ev.occurrence_id}};
                            v.reason = Violation::Reason::Sync;
                            v.timestamp = ev.timestamp;
                            v.detail = "occurrence '" + ev.occurrence_id +
                                       "' overlapped on resource '" + res + "'";
                            result.violations.push_back(std::move(v));
                        }
                    }
                }
            }
        }

        // condition obligations decide on COMPLETE of the later binding
        if (ev.kind == EventKind::Complete && c.properties.usage != Usage::Behavioral &&
            !c.consequent_mandatory()) {
            for (const MatchBinding& b :
                 match_trace_prefix(c.linkage.pattern, inst.trace, inst.trace.events.size(),
                                    schema)) {
                if (b.completeness != MatchBinding::Completeness::Full) continue;
                check_full_binding(c, e.instance_id, inst, b, false, result.violations,
                                   ev.timestamp);
            }
        }
    }
    return result;
}

std::vector<Violation> MonitorSession::close_instance(const std::string& instance_id) {
    auto it = instances_.find(instance_id);
    if (it == instances_.end()) throw ModelError("instance '" + instance_id + "' never started");
    InstanceState& inst = it->second;
    if (inst.closed) throw ModelError("instance '" + instance_id + "' already closed");

    std::vector<Violation> out;
    const ProcessSchema* schema = schema_for(inst.process_type);
    Timestamp now = inst.last_timestamp;

    for (const ProcessConstraint& c : constraints_) {
        if (!constraint_applies(c, instance_id, inst)) continue;
        if (c.properties.usage == Usage::Behavioral) continue;

        std::vector<MatchBinding> bindings = match_trace_prefix(
            c.linkage.pattern, inst.trace, inst.trace.events.size(), schema);

        // any undecided condition obligations settle now, with final data
        if (!c.consequent_mandatory()) {
            for (const MatchBinding& b : bindings) {
                if (b.completeness != MatchBinding::Completeness::Full) continue;
                check_full_binding(c, instance_id, inst, b, true, out, now);
            }
        }

        // absent labels that completed anywhere in the trace
        std::vector<std::string> absent_hits;
        for (const std::string& absent : c.linkage.pattern.absences) {
            for (const auto& [occ_id, occ] : inst.occurrences) {
                (void)occ_id;
                if (occ.completed && occ.label == absent) {
                    absent_hits.push_back(absent);
                    break;
                }
            }
        }

        // pattern obligations per anchor combination
        std::map<MatchBinding, bool> combos;  // anchor combo -> has gate-passing full binding
        for (const MatchBinding& b : bindings) {
            MatchBinding combo = anchor_part(c.linkage.pattern, b);
            bool& satisfied = combos.emplace(combo, false).first->second;
            if (b.completeness == MatchBinding::Completeness::Full) {
                Tri gate = c.condition.data
                               ? eval_data_expr(*c.condition.data, data_env(inst, b))
                               : Tri::Yes;
                if (gate != Tri::No) satisfied = true;
            }
        }
        for (const auto& [combo, has_full] : combos) {
            Tri gate = c.condition.data
                           ? eval_data_expr(*c.condition.data, data_env(inst, combo))
                           : Tri::Yes;
            bool mandatory_miss = c.consequent_mandatory() && !has_full && gate == Tri::Yes;
            bool absence_hit = !absent_hits.empty() && gate != Tri::No;
            if (!mandatory_miss && !absence_hit) continue;
            std::string key = binding_key(c.id, instance_id, combo) + "|close";
            if (!decided_.insert(key).second) continue;
            Violation v;
            v.constraint_id = c.id;
            v.instance_id = instance_id;
            v.binding = combo.vars;
            v.reason = Violation::Reason::Pattern;
            v.timestamp = now;
            if (mandatory_miss)
                v.detail = "required consequent pattern never matched";
            else
                v.detail = "absent activity '" + absent_hits.front() + "' occurred";
            out.push_back(std::move(v));
        }
    }

    // release anything this instance still holds
    for (auto mit = mutex_.begin(); mit != mutex_.end();) {
        auto owner = occurrence_instance_.find(mit->second);
        if (owner != occurrence_instance_.end() && owner->second == instance_id) {
            auto& waiting = queue_[mit->first];
            if (!waiting.empty()) {
                mit->second = waiting.front();
                waiting.pop_front();
                ++mit;
            } else {
                mit = mutex_.erase(mit);
            }
        } else {
            ++mit;
        }
    }
    for (auto& [res, waiting] : queue_) {
        (void)res;
        std::erase_if(waiting, [&](const std::string& occ) {
            auto owner = occurrence_instance_.find(occ);
            return owner != occurrence_instance_.end() && owner->second == instance_id;
        });
    }

    inst.closed = true;

    // through-execution constraints scoped entirely to closed instances vanish
    std::erase_if(constraints_, [&](const ProcessConstraint& c) {
        if (c.linkage.context.all_instances) return false;
        for (const std::string& i : c.linkage.context.instances) {
            auto iit = instances_.find(i);
            if (iit == instances_.end() || !iit->second.closed) return false;
        }
        return true;
    });

    return out;
}

std::vector<ObligationRow> MonitorSession::pending_obligations() const {
    std::vector<ObligationRow> rows;
    for (const auto& [instance_id, inst] : instances_) {
        if (inst.closed) continue;
        const ProcessSchema* schema = schema_for(inst.process_type);
        for (const ProcessConstraint& c : constraints_) {
            if (!constraint_applies(c, instance_id, inst)) continue;
            if (c.properties.usage == Usage::Behavioral) continue;
            for (const MatchBinding& b : match_trace_prefix(c.linkage.pattern, inst.trace,
                                                            inst.trace.events.size(), schema)) {
                if (b.completeness != MatchBinding::Completeness::AnchorOnly) continue;
                ObligationRow row;
                row.constraint_id = c.id;
                row.instance_id = instance_id;
                row.anchor = b.vars;
                std::string waiting;
                for (const PatternBinding& cons : c.linkage.pattern.consequents()) {
                    if (!waiting.empty()) waiting += ", ";
                    waiting += cons.var + " is '" + cons.label + "'";
                }
                row.waiting_for = waiting.empty() ? "condition evaluation" : waiting;
                rows.push_back(std::move(row));
            }
        }
    }
    std::sort(rows.begin(), rows.end(), [](const ObligationRow& a, const ObligationRow& b) {
        if (a.constraint_id != b.constraint_id) return a.constraint_id < b.constraint_id;
        if (a.instance_id != b.instance_id) return a.instance_id < b.instance_id;
        return a.anchor < b.anchor;
    });
    return rows;
}

MonitorSession open_session(const ConstraintBase& base, std::vector<ProcessSchema> schemas,
                            ResourceModel resources, const std::set<std::string>& extra_monitored) {
    std::vector<ProcessConstraint> active;
    for (const auto& [id, c] : base.constraints()) {
        if (base.status_of(id) != IdStatus::Enabled) continue;
        bool run_time = c.properties.application.count(Application::RunTime) > 0;
        if (run_time || extra_monitored.count(id)) active.push_back(c);
    }
    return MonitorSession(std::move(active), std::move(schemas), std::move(resources));
}

ReplayResult replay(MonitorSession& session, const std::vector<TraceEvent>& events) {
    ReplayResult result;
    std::set<std::string> instances;
    for (const TraceEvent& e : events) {
        StepResult step = session.step(e);
        result.actions.insert(result.actions.end(), step.actions.begin(), step.actions.end());
        result.violations.insert(result.violations.end(), step.violations.begin(),
                                 step.violations.end());
        instances.insert(e.instance_id);
    }
    for (const std::string& instance : instances) {
        std::vector<Violation> closing = session.close_instance(instance);
        result.violations.insert(result.violations.end(), closing.begin(), closing.end());
    }
    return result;
}

std::vector<TraceEvent> merge_traces(const std::vector<Trace>& traces) {
    std::vector<TraceEvent> events;
    for (const Trace& t : traces)
        for (const Event& e : t.events) events.push_back(TraceEvent{t.instance_id, t.process_type, e});
    std::stable_sort(events.begin(), events.end(), [](const TraceEvent& a, const TraceEvent& b) {
        if (a.event.timestamp != b.event.timestamp) return a.event.timestamp < b.event.timestamp;
        return a.instance_id < b.instance_id;
    });
    return events;
}

}  // namespace iupc
