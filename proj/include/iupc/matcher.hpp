#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "iupc/constraint.hpp"
#include "iupc/model.hpp"
#include "iupc/paths.hpp"

namespace iupc {

// Assignment of pattern variables to matched elements: schema node ids when
// matching statically, trace occurrence ids when matching dynamically.
struct MatchBinding {
    enum class Completeness { AnchorOnly, Full };

    std::map<std::string, std::string> vars;
    Completeness completeness = Completeness::AnchorOnly;

    bool operator==(const MatchBinding&) const = default;
    auto operator<=>(const MatchBinding&) const = default;
};

inline constexpr std::size_t kDefaultBindingCap = 100'000;

// One anchor-only binding per assignment of anchor variables to same-labeled
// activity nodes (Cartesian product over anchors). Empty iff some anchor label
// does not occur in the schema.
std::vector<MatchBinding> match_schema(const StructuralPattern& p, const ProcessSchema& s,
                                       std::size_t cap = kDefaultBindingCap);

// True iff, for every placement of the anchor nodes on the path, the
// consequent variables can be bound so that all relations hold and no absent
// label occurs. eventually = strict precedence in path order, directly =
// adjacency among activity nodes, parallel-with is decided on the schema.
bool holds_on_path(const StructuralPattern& p, const ProcessSchema& s, const ExecutionPath& path,
                   const MatchBinding& anchor);

// Bindings over completed occurrences in events[0, upto). Ordering relations
// are evaluated on completion order; parallel-with needs the schema (null =>
// the relation cannot hold). Full bindings enumerate every assignment; anchor
// combinations without one yield a single anchor-only binding.
std::vector<MatchBinding> match_trace_prefix(const StructuralPattern& p, const Trace& t,
                                             std::size_t upto,
                                             const ProcessSchema* schema = nullptr,
                                             std::size_t cap = kDefaultBindingCap);

// Nodes lie on different branches of a common and-split.
bool nodes_parallel(const ProcessSchema& s, const std::string& node_a, const std::string& node_b);

}  // namespace iupc
