#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "iupc/interval.hpp"
#include "iupc/time.hpp"

namespace iupc {

// Runtime value of a data element.
using Value = std::variant<std::int64_t, bool, std::string>;

std::string value_to_string(const Value& v);

// Three-valued logic for static and partial evaluation.
enum class Tri { No, Yes, Maybe };

Tri tri_and(Tri a, Tri b);
Tri tri_or(Tri a, Tri b);
Tri tri_not(Tri a);

// `var.element` reference; an empty var refers to instance-level (case) data,
// which is also the only form allowed inside schema guards.
struct FieldRef {
    std::string var;
    std::string element;

    bool operator==(const FieldRef&) const = default;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

std::string cmp_op_text(CmpOp op);

// Boolean expression over data elements: comparison and same-value atoms under
// and/or/not. Value semantics throughout so structural equality is defaulted.
struct DataExpr {
    enum class Kind { Compare, SameValue, And, Or, Not };

    Kind kind = Kind::Compare;
    FieldRef lhs;                     // Compare, SameValue
    CmpOp op = CmpOp::Eq;             // Compare
    Value literal = std::int64_t{0};  // Compare
    FieldRef rhs;                     // SameValue
    std::vector<DataExpr> children;   // And, Or (n-ary); Not (exactly one)

    bool operator==(const DataExpr&) const = default;

    static DataExpr compare(FieldRef ref, CmpOp op, Value literal);
    static DataExpr same_value(FieldRef a, FieldRef b);
    static DataExpr conjunction(std::vector<DataExpr> children);
    static DataExpr disjunction(std::vector<DataExpr> children);
    static DataExpr negation(DataExpr child);

    // DSL-syntax rendering; reparses to an equal expression.
    std::string to_string() const;

    // Every var mentioned by any atom (empty case-level vars excluded).
    std::vector<std::string> referenced_vars() const;
    // Every data-element name mentioned by any atom.
    std::vector<std::string> referenced_elements() const;
};

struct TimeAtom {
    enum class Kind { MinBetween, MaxBetween };

    Kind kind = Kind::MinBetween;
    std::string first;
    std::string second;
    Duration gap;

    bool operator==(const TimeAtom&) const = default;
};

// Conjunction of min/max temporal-distance atoms.
struct TimeExpr {
    std::vector<TimeAtom> atoms;

    bool empty() const { return atoms.empty(); }
    bool operator==(const TimeExpr&) const = default;
    std::string to_string() const;
    std::vector<std::string> referenced_vars() const;
};

struct ResourceAtom {
    enum class Kind { Role, SameActor, DifferentActor, UsesResource };

    Kind kind = Kind::Role;
    std::string var;
    std::string other_var;  // SameActor / DifferentActor
    std::string name;       // role or resource name

    bool operator==(const ResourceAtom&) const = default;
};

// Conjunction of role / actor-identity / resource-usage atoms.
struct ResourceExpr {
    std::vector<ResourceAtom> atoms;

    bool empty() const { return atoms.empty(); }
    bool operator==(const ResourceExpr&) const = default;
    std::string to_string() const;
    std::vector<std::string> referenced_vars() const;
};

// --- evaluation -------------------------------------------------------------

// Lookup environment for runtime evaluation of a DataExpr. Missing values make
// the affected atom Maybe.
struct DataEnv {
    // instance-level data, element -> value
    const std::map<std::string, Value>* case_data = nullptr;
    // per-variable occurrence data; null result means the var is unbound
    std::function<const std::map<std::string, Value>*(const std::string& var)> occurrence_data;
};

Tri eval_data_expr(const DataExpr& e, const DataEnv& env);

// What a conjunction of taken guards pins down about one data element.
struct ElementFacts {
    IntervalSet ints = IntervalSet::all();  // integer-typed elements
    std::optional<Value> equals;            // exact known value (string/bool)
    std::vector<Value> not_equal;           // excluded values
    bool contradictory = false;
};

using PathFacts = std::map<std::string, ElementFacts>;

// Extracts per-element facts from the guards taken along a path. Guards whose
// shape is not a conjunction of case-level comparison atoms contribute nothing.
PathFacts facts_from_guards(const std::vector<DataExpr>& guards);

// Conjoins one guard's decidable atoms into the facts.
void apply_guard_facts(PathFacts& facts, const DataExpr& guard);

// Some element is pinned to an empty value set.
bool facts_contradictory(const PathFacts& facts);

// Three-valued truth of `e` for every data assignment consistent with `facts`.
// Atoms over occurrence data (non-empty var) are Maybe.
Tri eval_data_expr_static(const DataExpr& e, const PathFacts& facts);

// Integer solution set of `e` for `element`, when `e` is a conjunction of
// comparison atoms over exactly that one case-level element. Returns nullopt
// for any other shape.
std::optional<IntervalSet> interval_of_expr(const DataExpr& e, const std::string& element);

// The single case-level element an interval-decidable expression ranges over.
std::optional<std::string> single_case_element(const DataExpr& e);

}  // namespace iupc
