#pragma once

#include <string>

#include "iupc/constraint.hpp"

namespace iupc {

// Pure function of the constraint AST: usage, application phases, scope
// perspectives, and origin.
DerivedProperties derive_properties(const ProcessConstraint& c);

// Maps a constraint onto one of the implemented type names:
// resource-attribution, timing-attribution, structural-compliance,
// data-compliance, temporal-compliance, separation-of-duty, binding-of-duty,
// access-constraint, synchronization, meta, generic-business-compliance.
std::string classify_type(const ProcessConstraint& c);

}  // namespace iupc
