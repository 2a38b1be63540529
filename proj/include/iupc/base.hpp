#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iupc/constraint.hpp"
#include "iupc/identifier.hpp"
#include "iupc/model.hpp"

namespace iupc {

// Persistent, versioned collection of constraints with identification status.
// Single writer; every mutation bumps the version.
class ConstraintBase {
public:
    void add_constraint(ProcessConstraint c);          // replaces an existing id
    void remove_constraint(const std::string& id);
    void add_meta(MetaConstraint m);

    const ProcessConstraint* find(const std::string& id) const;
    const std::map<std::string, ProcessConstraint>& constraints() const { return constraints_; }
    const std::vector<MetaConstraint>& metas() const { return metas_; }

    // Stores identification results (must cover exactly the constraint ids)
    // and stamps them with the current version.
    void set_identification(const std::vector<IdentificationResult>& results);
    const std::map<std::string, IdentificationResult>& identification() const {
        return identification_;
    }
    std::optional<IdStatus> status_of(const std::string& id) const;
    bool identification_current() const { return identification_version_ == version_; }

    std::uint64_t version() const { return version_; }
    std::uint64_t identification_version() const { return identification_version_; }

    // Used by load_base to restore persisted counters.
    void restore_versions(std::uint64_t version, std::uint64_t identification_version);

private:
    std::map<std::string, ProcessConstraint> constraints_;
    std::map<std::string, IdentificationResult> identification_;
    std::vector<MetaConstraint> metas_;
    std::uint64_t version_ = 0;
    std::uint64_t identification_version_ = 0;
};

// Base directory layout: <dir>/index.json plus <dir>/constraints/*.iupc.
ConstraintBase load_base(const std::filesystem::path& dir);

// Throws VersionConflict when the directory holds a newer version than `base`.
void save_base(const ConstraintBase& base, const std::filesystem::path& dir);

struct Conflict {
    enum class Kind { Contradiction, OrderingCycle, Duplicate };

    Kind kind = Kind::Contradiction;
    std::string first_id;
    std::string second_id;
    std::string detail;

    bool operator==(const Conflict&) const = default;
};

std::string conflict_kind_text(Conflict::Kind k);

// Pairwise structural checks over constraints with overlapping context:
// required-existence vs absence contradictions, two-constraint ordering
// cycles, and duplicate triples. Each conflict reported once, ids ordered.
std::vector<Conflict> check_consistency(const ConstraintBase& base);

struct MetaViolation {
    std::string meta_id;
    std::string subject;  // "schema/node" or constraint id
    std::string detail;

    bool operator==(const MetaViolation&) const = default;
};

// Evaluates every meta constraint over the base and the loaded schemas.
// Throws ModelError when a meta references an unresolvable id or resource.
std::vector<MetaViolation> evaluate_meta(const ConstraintBase& base,
                                         const std::vector<ProcessSchema>& schemas,
                                         const ResourceModel& resources);

// Sub-base containing only enabled constraints. Throws StaleIdentification
// when the base changed after identification.
ConstraintBase filter_enabled(const ConstraintBase& base);

}  // namespace iupc
