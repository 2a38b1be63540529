#include "iupc/constraint.hpp"

#include <algorithm>

#include "iupc/errors.hpp"

namespace iupc {

bool Context::matches_process(const std::string& process_type) const {
    return all_processes ||
           std::find(processes.begin(), processes.end(), process_type) != processes.end();
}

bool Context::matches_instance(const std::string& instance_id) const {
    return all_instances ||
           std::find(instances.begin(), instances.end(), instance_id) != instances.end();
}

bool Context::overlaps(const Context& other) const {
    bool proc = all_processes || other.all_processes;
    if (!proc) {
        for (const std::string& p : processes)
            if (other.matches_process(p)) proc = true;
    }
    if (!proc) return false;
    if (all_instances || other.all_instances) return true;
    for (const std::string& i : instances)
        if (other.matches_instance(i)) return true;
    return false;
}

const PatternBinding* StructuralPattern::binding(const std::string& var) const {
    for (const PatternBinding& b : bindings)
        if (b.var == var) return &b;
    return nullptr;
}

std::vector<PatternBinding> StructuralPattern::anchors() const {
    std::vector<PatternBinding> out;
    for (const PatternBinding& b : bindings)
        if (b.anchor) out.push_back(b);
    return out;
}

std::vector<PatternBinding> StructuralPattern::consequents() const {
    std::vector<PatternBinding> out;
    for (const PatternBinding& b : bindings)
        if (!b.anchor) out.push_back(b);
    return out;
}

std::set<std::string> StructuralPattern::vars() const {
    std::set<std::string> out;
    for (const PatternBinding& b : bindings) out.insert(b.var);
    return out;
}

std::set<std::string> StructuralPattern::referenced_labels() const {
    std::set<std::string> out;
    for (const PatternBinding& b : bindings) out.insert(b.label);
    for (const std::string& a : absences) out.insert(a);
    return out;
}

std::set<std::string> StructuralPattern::anchor_labels() const {
    std::set<std::string> out;
    for (const PatternBinding& b : bindings)
        if (b.anchor) out.insert(b.label);
    return out;
}

std::vector<std::string> Condition::referenced_vars() const {
    std::vector<std::string> vars;
    if (data) vars = data->referenced_vars();
    for (const std::string& v : time.referenced_vars()) vars.push_back(v);
    for (const std::string& v : resource.referenced_vars()) vars.push_back(v);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

std::string attribute_value_to_string(const AttributeValue& v) {
    if (std::holds_alternative<Value>(v)) return value_to_string(std::get<Value>(v));
    if (std::holds_alternative<Duration>(v)) return format_duration(std::get<Duration>(v));
    const DurationSpec& spec = std::get<DurationSpec>(v);
    return "(" + format_duration(spec.mean) + ", " + format_duration(spec.deviation) + ")";
}

std::string usage_text(Usage u) {
    switch (u) {
        case Usage::Compliance: return "compliance";
        case Usage::Behavioral: return "behavioral";
        case Usage::Meta: return "meta";
    }
    return "compliance";
}

std::string application_text(Application a) {
    return a == Application::DesignTime ? "design-time" : "run-time";
}

std::string scope_text(Scope s) {
    switch (s) {
        case Scope::Structure: return "structure";
        case Scope::Data: return "data";
        case Scope::Resource: return "resource";
        case Scope::Time: return "time";
    }
    return "structure";
}

std::string origin_text(Origin o) {
    return o == Origin::External ? "external" : "through-execution";
}

bool ProcessConstraint::same_triple(const ProcessConstraint& other) const {
    return linkage == other.linkage && condition == other.condition && behavior == other.behavior;
}

bool ProcessConstraint::structurally_equal(const ProcessConstraint& other) const {
    return id == other.id && same_triple(other) && properties == other.properties;
}

std::string ProcessConstraint::compact_form() const {
    const Context& ctx = linkage.context;
    std::string procs;
    if (ctx.all_processes) {
        procs = "ALL";
    } else if (ctx.processes.size() == 1) {
        procs = ctx.processes[0];
    } else {
        procs = "{";
        for (std::size_t i = 0; i < ctx.processes.size(); ++i) {
            if (i) procs += ", ";
            procs += ctx.processes[i];
        }
        procs += "}";
    }
    std::string insts;
    if (ctx.all_instances) {
        insts = "ALL";
    } else if (ctx.instances.size() == 1) {
        insts = ctx.instances[0];
    } else {
        insts = "{";
        for (std::size_t i = 0; i < ctx.instances.size(); ++i) {
            if (i) insts += ", ";
            insts += ctx.instances[i];
        }
        insts += "}";
    }
    std::string tp;
    if (linkage.trigger_positions.empty()) {
        tp = "∅";
    } else {
        tp = "{";
        bool first = true;
        for (const TriggerPosition& t : linkage.trigger_positions) {
            if (!first) tp += ", ";
            first = false;
            tp += t.position == TriggerPosition::Position::Before ? "before(" : "after(";
            tp += t.target + ")";
        }
        tp += "}";
    }
    return "((" + procs + ", " + insts + "), SP_" + id + ", " + tp + ")";
}

void ProcessConstraint::validate() const {
    if (id.empty()) throw ModelError("constraint with empty id");
    const StructuralPattern& p = linkage.pattern;
    if (p.bindings.empty())
        throw ModelError("constraint '" + id + "': structural pattern has no bindings");
    if (p.anchors().empty())
        throw ModelError("constraint '" + id + "': structural pattern has no anchor binding");
    std::set<std::string> seen;
    for (const PatternBinding& b : p.bindings) {
        if (b.var.empty() || b.label.empty())
            throw ModelError("constraint '" + id + "': binding with empty variable or label");
        if (!seen.insert(b.var).second)
            throw ModelError("constraint '" + id + "': duplicate pattern variable '" + b.var + "'");
    }
    for (const Relation& r : p.relations) {
        if (r.left == r.right)
            throw ModelError("constraint '" + id + "': relation relates '" + r.left +
                             "' to itself");
        for (const std::string& v : {r.left, r.right})
            if (!p.binding(v))
                throw BindError("constraint '" + id + "': relation references unbound variable '" +
                                v + "'");
    }
    if (!linkage.context.all_processes && linkage.context.processes.empty())
        throw ModelError("constraint '" + id + "': named process selector is empty");
    if (!linkage.context.all_instances && linkage.context.instances.empty())
        throw ModelError("constraint '" + id + "': named instance selector is empty");
    for (const std::string& v : condition.referenced_vars())
        if (!p.binding(v))
            throw BindError("constraint '" + id + "': condition references unbound variable '" +
                            v + "'");
    for (const TimeAtom& a : condition.time.atoms)
        if (a.gap.ms <= 0)
            throw ModelError("constraint '" + id + "': non-positive duration in time condition");
    for (const TriggerPosition& t : linkage.trigger_positions)
        if (!p.binding(t.target))
            throw BindError("constraint '" + id + "': trigger references unbound variable '" +
                            t.target + "'");
    if (!linkage.trigger_positions.empty() && behavior.kind == Behavior::Kind::None)
        throw ModelError("constraint '" + id + "': trigger positions require a behavior");
    if (behavior.kind != Behavior::Kind::None && !p.binding(behavior.target))
        throw BindError("constraint '" + id + "': behavior targets unbound variable '" +
                        behavior.target + "'");
}

bool PropertyPredicate::holds(const ProcessConstraint& c) const {
    switch (kind) {
        case Kind::UsageIs: return usage_text(c.properties.usage) == value;
        case Kind::HasTrigger: return !c.linkage.trigger_positions.empty();
        case Kind::HasBehavior: return !c.behavior.empty();
        case Kind::HasCondition: return !c.condition.empty();
        case Kind::ScopeIncludes:
            for (Scope s : c.properties.scope)
                if (scope_text(s) == value) return true;
            return false;
    }
    return false;
}

std::string PropertyPredicate::to_string() const {
    switch (kind) {
        case Kind::UsageIs: return "usage == " + value;
        case Kind::HasTrigger: return "has trigger";
        case Kind::HasBehavior: return "has behavior";
        case Kind::HasCondition: return "has condition";
        case Kind::ScopeIncludes: return "scope includes " + value;
    }
    return {};
}

DerivedProperties meta_properties() {
    DerivedProperties p;
    p.usage = Usage::Meta;
    p.application = {Application::DesignTime};
    p.scope = {Scope::Structure};
    p.origin = Origin::External;
    return p;
}

}  // namespace iupc
