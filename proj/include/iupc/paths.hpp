#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "iupc/model.hpp"

namespace iupc {

// One bounded start-to-end execution of a schema: the fired node ids in order
// plus the guards of the xor branches taken.
struct ExecutionPath {
    std::vector<std::string> nodes;
    std::vector<DataExpr> guards;

    bool operator==(const ExecutionPath&) const = default;

    // Positions (indices into nodes) of activity nodes, via the schema.
    std::vector<std::size_t> activity_positions(const ProcessSchema& s) const;
    std::vector<std::string> activity_labels(const ProcessSchema& s) const;
};

struct PathOptions {
    int loop_bound = 2;              // max traversals of any control edge
    std::size_t max_paths = 1'000'000;
};

// Every start-to-end path: xor-splits contribute one branch per path,
// and-splits contribute all interleavings of their branches, cycles are
// unrolled at most loop_bound times. Result ordered lexicographically by node
// sequence. Throws PathExplosion past options.max_paths.
std::vector<ExecutionPath> enumerate_paths(const ProcessSchema& schema,
                                           const PathOptions& options = {});

// Flow-sensitive facts the taken guards pin down about the data state at the
// end of the path. A write-mode data edge clears what is known about its
// element; `infeasible` is set when a guard contradicts the facts in force at
// its own evaluation point (only possible when nothing wrote the element in
// between).
PathFacts path_facts(const ProcessSchema& schema, const ExecutionPath& path, bool& infeasible);

}  // namespace iupc
