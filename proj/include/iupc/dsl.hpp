#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "iupc/constraint.hpp"

namespace iupc {

// Constraint DSL. One document is a sequence of blocks:
//
//   constraint ID {
//     context (process STR [, STR ...] | any process) (all | instances STR [, STR ...]);
//     on [exists] VAR is STR [, [exists] VAR is STR ...];
//     [require ITEM and ITEM and ...;]        item: [exists] VAR is STR | relation
//     [absent STR [, STR ...];]
//     [condition SECTION and SECTION and ...;] section: data(...) | time(...) | resource(...)
//     [trigger (before|after) VAR [, (before|after) VAR ...];]
//     [behavior attribute VAR KEY := VALUE
//      | behavior synchronize VAR STR
//      | behavior raise-exception VAR [STR];]
//   }
//
//   meta ID { for each activity uses-resource STR require constraint ID2; }
//   meta ID { for each constraint [where PRED] require PRED; }
//
//   rule ID STR;        // opaque free-text domain rule
//
// Relations: X eventually-precedes Y | X directly-precedes Y | X parallel-with Y.
// Durations: integer + unit in {m, h, d}.

struct OpaqueRule {
    std::string id;
    std::string text;

    bool operator==(const OpaqueRule&) const = default;
};

// Everything found in one or more DSL documents.
struct RuleDocument {
    std::vector<ProcessConstraint> constraints;
    std::vector<MetaConstraint> metas;
    std::vector<OpaqueRule> opaque_rules;
};

// Parses a document containing exactly one constraint block.
ProcessConstraint parse_constraint(std::string_view text);

// Parses a document containing exactly one meta block.
MetaConstraint parse_meta_constraint(std::string_view text);

// Parses a full document of constraint / meta / rule blocks.
RuleDocument parse_rule_document(std::string_view text);

// Canonical rendering; parse(serialize(c)) is structurally equal to c.
std::string serialize_constraint(const ProcessConstraint& c);
std::string serialize_meta_constraint(const MetaConstraint& m);

// Expression-only entry point, used for schema guards.
DataExpr parse_data_expr(std::string_view text);

}  // namespace iupc
