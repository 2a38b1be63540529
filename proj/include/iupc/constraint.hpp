#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "iupc/expr.hpp"

namespace iupc {

// Which processes and instances a constraint binds to.
struct Context {
    bool all_processes = false;
    std::vector<std::string> processes;  // nonempty iff !all_processes
    bool all_instances = false;
    std::vector<std::string> instances;  // nonempty iff !all_instances

    bool operator==(const Context&) const = default;

    bool matches_process(const std::string& process_type) const;
    bool matches_instance(const std::string& instance_id) const;
    bool overlaps(const Context& other) const;
};

struct PatternBinding {
    std::string var;
    std::string label;
    bool anchor = false;  // anchor (antecedent) vs consequent binding

    bool operator==(const PatternBinding&) const = default;
};

struct Relation {
    enum class Kind { EventuallyFollows, DirectlyFollows, ParallelWith };

    Kind kind = Kind::EventuallyFollows;
    std::string left;   // for the follows kinds, left precedes right
    std::string right;

    bool operator==(const Relation&) const = default;
};

// Existence/absence/ordering predicates over activity labels; the constraint's
// hook into a process. At least one binding is an anchor.
struct StructuralPattern {
    std::vector<PatternBinding> bindings;
    std::vector<Relation> relations;
    std::vector<std::string> absences;

    bool operator==(const StructuralPattern&) const = default;

    const PatternBinding* binding(const std::string& var) const;
    std::vector<PatternBinding> anchors() const;
    std::vector<PatternBinding> consequents() const;
    std::set<std::string> vars() const;
    // All activity labels the pattern references (bindings plus absences).
    std::set<std::string> referenced_labels() const;
    std::set<std::string> anchor_labels() const;
};

struct TriggerPosition {
    enum class Position { Before, After };

    Position position = Position::Before;
    std::string target;  // pattern variable

    bool operator==(const TriggerPosition&) const = default;
    auto operator<=>(const TriggerPosition&) const = default;
};

struct Linkage {
    Context context;
    StructuralPattern pattern;
    std::vector<TriggerPosition> trigger_positions;

    bool operator==(const Linkage&) const = default;
};

// Data/time/resource restrictions imposed on the linkage's matched activities.
// Data expressions gate applicability; time and resource atoms are obligations
// on matched bindings.
struct Condition {
    std::optional<DataExpr> data;
    TimeExpr time;
    ResourceExpr resource;

    bool operator==(const Condition&) const = default;

    bool empty() const { return !data && time.empty() && resource.empty(); }
    std::vector<std::string> referenced_vars() const;
};

struct DurationSpec {
    Duration mean;
    Duration deviation;

    bool operator==(const DurationSpec&) const = default;
};

using AttributeValue = std::variant<Value, Duration, DurationSpec>;

std::string attribute_value_to_string(const AttributeValue& v);

// The action part: attribution of resource/time information, synchronization
// on a mutex resource, or a process-execution instruction (exception).
struct Behavior {
    enum class Kind { None, Attribute, Synchronize, RaiseException };

    Kind kind = Kind::None;
    std::string target;                       // pattern var (all kinds but None)
    std::string key;                          // Attribute, e.g. ROLE, DURATION
    AttributeValue value = Value{std::int64_t{0}};  // Attribute
    std::string resource;                     // Synchronize mutex name
    std::string message;                      // RaiseException

    bool operator==(const Behavior&) const = default;

    bool empty() const { return kind == Kind::None; }
};

enum class Usage { Compliance, Behavioral, Meta };
enum class Application { DesignTime, RunTime };
enum class Scope { Structure, Data, Resource, Time };
enum class Origin { External, ThroughExecution };

std::string usage_text(Usage u);
std::string application_text(Application a);
std::string scope_text(Scope s);
std::string origin_text(Origin o);

struct DerivedProperties {
    Usage usage = Usage::Compliance;
    std::set<Application> application;
    std::set<Scope> scope;
    Origin origin = Origin::External;

    bool operator==(const DerivedProperties&) const = default;
};

// The unified constraint representation: Linkage, Condition, Behavior, plus
// the properties derived from them.
struct ProcessConstraint {
    std::string id;
    std::string source_text;  // original document text, not part of equality
    Linkage linkage;
    Condition condition;
    Behavior behavior;
    DerivedProperties properties;

    // Structural triple equality; ignores id, source text and derived
    // properties (which are a pure function of the triple).
    bool same_triple(const ProcessConstraint& other) const;
    bool structurally_equal(const ProcessConstraint& other) const;

    // The time/resource parts of the condition obligate matched bindings; a
    // constraint without them obligates its consequent structure instead.
    bool consequent_mandatory() const { return condition.time.empty() && condition.resource.empty(); }

    // Rendering in the compact linkage form, e.g.
    // "((Invasive Surgery, ALL), SP_C6, ∅)".
    std::string compact_form() const;

    // Throws BindError when a condition/trigger/behavior references a var not
    // bound in the pattern; ModelError on other invariant breaches.
    void validate() const;
};

// Predicate over a process constraint's derived properties, used by meta
// constraints.
struct PropertyPredicate {
    enum class Kind { UsageIs, HasTrigger, HasBehavior, HasCondition, ScopeIncludes };

    Kind kind = Kind::UsageIs;
    std::string value;  // usage or scope name

    bool operator==(const PropertyPredicate&) const = default;

    bool holds(const ProcessConstraint& c) const;
    std::string to_string() const;
};

// "for each activity using resource R" selector.
struct ActivitySelector {
    std::string resource;

    bool operator==(const ActivitySelector&) const = default;
};

// "for each constraint [where P]" selector.
struct ConstraintSelector {
    std::optional<PropertyPredicate> where;

    bool operator==(const ConstraintSelector&) const = default;
};

struct MetaRequirement {
    enum class Kind { AttachedConstraint, Predicate };

    Kind kind = Kind::AttachedConstraint;
    std::string constraint_id;  // AttachedConstraint
    PropertyPredicate predicate;

    bool operator==(const MetaRequirement&) const = default;
};

// Checks the consistency of other constraints: every selected activity or
// constraint must satisfy the requirement.
struct MetaConstraint {
    std::string id;
    std::string source_text;
    std::variant<ActivitySelector, ConstraintSelector> for_each;
    MetaRequirement require;

    bool operator==(const MetaConstraint& other) const {
        return id == other.id && for_each == other.for_each && require == other.require;
    }
};

DerivedProperties meta_properties();

}  // namespace iupc
