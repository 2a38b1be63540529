#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iupc/base.hpp"
#include "iupc/constraint.hpp"
#include "iupc/model.hpp"
#include "iupc/paths.hpp"

namespace iupc {

enum class VerdictStatus { Satisfied, Violated, PossiblyViolated };

std::string verdict_status_text(VerdictStatus s);

struct PathWitness {
    std::vector<std::string> nodes;
    std::vector<std::string> guards;  // rendered guard expressions taken

    bool operator==(const PathWitness&) const = default;
};

struct IntervalWitness {
    std::string element;
    std::optional<std::int64_t> lo;  // absent = unbounded
    std::optional<std::int64_t> hi;

    bool operator==(const IntervalWitness&) const = default;
};

struct Verdict {
    VerdictStatus status = VerdictStatus::Satisfied;
    bool monitor_required = false;
    std::vector<PathWitness> path_witnesses;      // shortest first, id-lexicographic ties
    std::vector<IntervalWitness> interval_witnesses;

    bool operator==(const Verdict&) const = default;
};

// Design-time check of one enabled compliance constraint against one schema.
// satisfied: every enumerated path passes for every anchor placement;
// violated: every anchor-carrying path definitively fails; anything in
// between, or any dependence on run-time values, is possibly-violated with
// monitoring required. Throws PatternUnmatched when no anchor label occurs.
Verdict check_design_time(const ProcessConstraint& c, const ProcessSchema& s,
                          const PathOptions& options = {});

// Interval coverage analysis for a constraint whose data condition is an
// interval-decidable comparison over one integer element: the witness is the
// exact integer set (required interval minus the coverage of the satisfying
// paths). Throws NotIntervalDecidable when the shape does not fit.
Verdict analyze_data_coverage(const ProcessConstraint& c, const ProcessSchema& s,
                              const PathOptions& options = {});

struct VerificationEntry {
    std::string constraint_id;
    std::string schema_id;               // empty for skipped entries
    std::optional<Verdict> verdict;
    std::string skipped_reason;          // nonempty for skipped entries
    std::string error;                   // per-constraint error, batch continues

    bool operator==(const VerificationEntry&) const = default;
};

struct VerificationReport {
    std::vector<VerificationEntry> entries;  // ordered by (constraint id, schema id)
    int checked = 0;   // design-time checks performed
    int skipped = 0;   // constraints skipped

    bool all_satisfied() const;
};

// Batch driver: runs design-time checks only on enabled compliance
// constraints against their context-matching schemas; everything else is
// reported as skipped with its reason. Per-constraint errors are collected
// without aborting the batch.
VerificationReport verify_all(const ConstraintBase& base,
                              const std::vector<ProcessSchema>& schemas,
                              const PathOptions& options = {});

std::string report_to_json(const VerificationReport& report);
std::string report_to_text(const VerificationReport& report);

}  // namespace iupc
