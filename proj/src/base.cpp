#include "iupc/base.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "iupc/dsl.hpp"
#include "iupc/errors.hpp"

namespace iupc {

namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SyntaxError("cannot read file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw SyntaxError("cannot write file '" + path.string() + "'");
    out << content;
}

}  // namespace

void ConstraintBase::add_constraint(ProcessConstraint c) {
    constraints_[c.id] = std::move(c);
    ++version_;
}

void ConstraintBase::remove_constraint(const std::string& id) {
    constraints_.erase(id);
    identification_.erase(id);
    ++version_;
}

void ConstraintBase::add_meta(MetaConstraint m) {
    metas_.push_back(std::move(m));
    ++version_;
}

const ProcessConstraint* ConstraintBase::find(const std::string& id) const {
    auto it = constraints_.find(id);
    return it == constraints_.end() ? nullptr : &it->second;
}

void ConstraintBase::set_identification(const std::vector<IdentificationResult>& results) {
    std::map<std::string, IdentificationResult> index;
    for (const IdentificationResult& r : results) {
        if (!constraints_.count(r.rule_id)) continue;  // opaque rules are not stored in the base
        index[r.rule_id] = r;
    }
    for (const auto& [id, c] : constraints_) {
        (void)c;
        if (!index.count(id))
            throw ModelError("identification results do not cover constraint '" + id + "'");
    }
    identification_ = std::move(index);
    ++version_;
    identification_version_ = version_;
}

std::optional<IdStatus> ConstraintBase::status_of(const std::string& id) const {
    auto it = identification_.find(id);
    if (it == identification_.end()) return std::nullopt;
    return it->second.status;
}

void ConstraintBase::restore_versions(std::uint64_t version, std::uint64_t identification_version) {
    version_ = version;
    identification_version_ = identification_version;
}

ConstraintBase load_base(const std::filesystem::path& dir) {
    Json index;
    try {
        index = Json::parse(read_file(dir / "index.json"));
    } catch (const nlohmann::json::parse_error& e) {
        throw SyntaxError("base index '" + (dir / "index.json").string() + "': " + e.what());
    }
    if (!index.is_object()) throw SyntaxError("base index: expected a JSON object");

    ConstraintBase base;
    if (index.contains("constraints")) {
        for (const Json& entry : index["constraints"]) {
            std::string id = entry.at("id").get<std::string>();
            std::string file = entry.at("file").get<std::string>();
            ProcessConstraint c = parse_constraint(read_file(dir / file));
            if (c.id != id)
                throw SyntaxError("base entry '" + id + "' points at file declaring '" + c.id +
                                  "'");
            base.add_constraint(std::move(c));
        }
    }
    if (index.contains("meta_constraints")) {
        for (const Json& entry : index["meta_constraints"]) {
            std::string id = entry.at("id").get<std::string>();
            std::string file = entry.at("file").get<std::string>();
            MetaConstraint m = parse_meta_constraint(read_file(dir / file));
            if (m.id != id)
                throw SyntaxError("base entry '" + id + "' points at file declaring '" + m.id +
                                  "'");
            base.add_meta(std::move(m));
        }
    }

    if (index.contains("identification") && index["identification"].is_object()) {
        std::vector<IdentificationResult> results;
        const Json& ident = index["identification"];
        for (auto it = ident.begin(); it != ident.end(); ++it) {
            IdentificationResult r;
            r.rule_id = it.key();
            std::string status = it.value().at("status").get<std::string>();
            if (status == "enabled")
                r.status = IdStatus::Enabled;
            else if (status == "idle")
                r.status = IdStatus::Idle;
            else if (status == "non-process")
                r.status = IdStatus::NonProcess;
            else
                throw SyntaxError("base identification: unknown status '" + status + "'");
            if (it.value().contains("enabled_in")) {
                for (const Json& ej : it.value()["enabled_in"]) {
                    EnabledEvidence ev;
                    ev.schema_id = ej.at("schema").get<std::string>();
                    for (const Json& l : ej.at("anchor_labels"))
                        ev.anchor_labels.push_back(l.get<std::string>());
                    r.enabled_in.push_back(std::move(ev));
                }
            }
            if (it.value().contains("repository_labels"))
                for (const Json& l : it.value()["repository_labels"])
                    r.repository_labels.push_back(l.get<std::string>());
            results.push_back(std::move(r));
        }
        if (!results.empty()) base.set_identification(results);
    }

    std::uint64_t version = index.value("version", std::uint64_t{1});
    std::uint64_t ident_version = index.value("identification_version", std::uint64_t{0});
    base.restore_versions(version, ident_version);
    return base;
}

void save_base(const ConstraintBase& base, const std::filesystem::path& dir) {
    std::filesystem::path index_path = dir / "index.json";
    if (std::filesystem::exists(index_path)) {
        try {
            Json existing = Json::parse(read_file(index_path));
            std::uint64_t existing_version = existing.value("version", std::uint64_t{0});
            if (existing_version > base.version())
                throw VersionConflict("base at '" + dir.string() + "' has version " +
                                      std::to_string(existing_version) +
                                      ", newer than in-memory version " +
                                      std::to_string(base.version()));
        } catch (const nlohmann::json::parse_error&) {
            // unreadable index is overwritten
        }
    }
    std::filesystem::create_directories(dir / "constraints");

    Json index;
    index["version"] = base.version();
    index["identification_version"] = base.identification_version();
    index["constraints"] = Json::array();
    for (const auto& [id, c] : base.constraints()) {
        std::string file = "constraints/" + id + ".iupc";
        write_file(dir / file, serialize_constraint(c));
        index["constraints"].push_back(Json{{"id", id}, {"file", file}});
    }
    index["meta_constraints"] = Json::array();
    for (const MetaConstraint& m : base.metas()) {
        std::string file = "constraints/" + m.id + ".iupc";
        write_file(dir / file, serialize_meta_constraint(m));
        index["meta_constraints"].push_back(Json{{"id", m.id}, {"file", file}});
    }
    if (!base.identification().empty()) {
        Json ident = Json::object();
        for (const auto& [id, r] : base.identification()) {
            Json rj;
            rj["status"] = id_status_text(r.status);
            if (!r.enabled_in.empty()) {
                rj["enabled_in"] = Json::array();
                for (const EnabledEvidence& ev : r.enabled_in)
                    rj["enabled_in"].push_back(
                        Json{{"schema", ev.schema_id}, {"anchor_labels", ev.anchor_labels}});
            }
            if (!r.repository_labels.empty()) rj["repository_labels"] = r.repository_labels;
            ident[id] = std::move(rj);
        }
        index["identification"] = std::move(ident);
    }
    write_file(index_path, index.dump(2) + "\n");
}

std::string conflict_kind_text(Conflict::Kind k) {
    switch (k) {
        case Conflict::Kind::Contradiction: return "contradiction";
        case Conflict::Kind::OrderingCycle: return "ordering-cycle";
        case Conflict::Kind::Duplicate: return "duplicate";
    }
    return "contradiction";
}

std::vector<Conflict> check_consistency(const ConstraintBase& base) {
    std::vector<const ProcessConstraint*> cs;
    for (const auto& [id, c] : base.constraints()) {
        (void)id;
        cs.push_back(&c);
    }

    std::vector<Conflict> conflicts;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        for (std::size_t j = i + 1; j < cs.size(); ++j) {
            const ProcessConstraint& a = *cs[i];
            const ProcessConstraint& b = *cs[j];
            if (!a.linkage.context.overlaps(b.linkage.context)) continue;

            // required existence vs absence
            auto contradiction = [&](const ProcessConstraint& requires_side,
                                     const ProcessConstraint& absent_side) {
                for (const PatternBinding& binding : requires_side.linkage.pattern.consequents()) {
                    const auto& absences = absent_side.linkage.pattern.absences;
                    if (std::find(absences.begin(), absences.end(), binding.label) !=
                        absences.end()) {
                        conflicts.push_back(Conflict{
                            Conflict::Kind::Contradiction, a.id, b.id,
                            "'" + requires_side.id + "' requires '" + binding.label + "' which '" +
                                absent_side.id + "' declares absent"});
                    }
                }
            };
            contradiction(a, b);
            contradiction(b, a);

            // two-constraint ordering cycle over the same label pair
            if (a.consequent_mandatory() && b.consequent_mandatory()) {
                auto label_pairs = [](const ProcessConstraint& c) {
                    std::vector<std::pair<std::string, std::string>> pairs;
                    for (const Relation& r : c.linkage.pattern.relations) {
                        if (r.kind == Relation::Kind::ParallelWith) continue;
                        const PatternBinding* l = c.linkage.pattern.binding(r.left);
                        const PatternBinding* rt = c.linkage.pattern.binding(r.right);
                        if (l && rt) pairs.emplace_back(l->label, rt->label);
                    }
                    return pairs;
                };
                for (const auto& pa : label_pairs(a)) {
                    for (const auto& pb : label_pairs(b)) {
                        if (pa.first == pb.second && pa.second == pb.first) {
                            conflicts.push_back(Conflict{
                                Conflict::Kind::OrderingCycle, a.id, b.id,
                                "'" + pa.first + "' must precede '" + pa.second +
                                    "' and vice versa"});
                        }
                    }
                }
            }

            if (a.same_triple(b)) {
                conflicts.push_back(Conflict{Conflict::Kind::Duplicate, a.id, b.id,
                                             "structurally identical constraints"});
            }
        }
    }
    return conflicts;
}

std::vector<MetaViolation> evaluate_meta(const ConstraintBase& base,
                                         const std::vector<ProcessSchema>& schemas,
                                         const ResourceModel& resources) {
    std::vector<const ProcessSchema*> ordered;
    for (const ProcessSchema& s : schemas) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(),
              [](const ProcessSchema* a, const ProcessSchema* b) { return a->id < b->id; });

    std::vector<MetaViolation> out;
    for (const MetaConstraint& m : base.metas()) {
        if (std::holds_alternative<ActivitySelector>(m.for_each)) {
            const ActivitySelector& sel = std::get<ActivitySelector>(m.for_each);
            if (!resources.resources.count(sel.resource))
                throw ModelError("meta '" + m.id + "' selects undeclared resource '" +
                                 sel.resource + "'");
            if (m.require.kind != MetaRequirement::Kind::AttachedConstraint)
                throw ModelError("meta '" + m.id +
                                 "': activity selectors require a constraint attachment");
            const ProcessConstraint* required = base.find(m.require.constraint_id);
            for (const ProcessSchema* s : ordered) {
                std::vector<const Node*> acts = s->activities();
                std::sort(acts.begin(), acts.end(),
                          [](const Node* x, const Node* y) { return x->id < y->id; });
                for (const Node* n : acts) {
                    if (std::find(n->resources.begin(), n->resources.end(), sel.resource) ==
                        n->resources.end())
                        continue;
                    bool attached = false;
                    if (required && required->linkage.context.matches_process(s->id))
                        attached = required->linkage.pattern.referenced_labels().count(n->label);
                    if (!attached)
                        out.push_back(MetaViolation{
                            m.id, s->id + "/" + n->id,
                            "activity '" + n->label + "' uses resource '" + sel.resource +
                                "' without constraint '" + m.require.constraint_id + "'"});
                }
            }
        } else {
            const ConstraintSelector& sel = std::get<ConstraintSelector>(m.for_each);
            if (m.require.kind != MetaRequirement::Kind::Predicate)
                throw ModelError("meta '" + m.id +
                                 "': constraint selectors require a property predicate");
            for (const auto& [id, c] : base.constraints()) {
                if (sel.where && !sel.where->holds(c)) continue;
                if (!m.require.predicate.holds(c))
                    out.push_back(MetaViolation{m.id, id,
                                                "constraint '" + id + "' fails requirement '" +
                                                    m.require.predicate.to_string() + "'"});
            }
        }
    }
    return out;
}

ConstraintBase filter_enabled(const ConstraintBase& base) {
    if (!base.identification_current())
        throw StaleIdentification("constraint base version " + std::to_string(base.version()) +
                                  " exceeds identification version " +
                                  std::to_string(base.identification_version()));
    ConstraintBase out;
    std::vector<IdentificationResult> kept;
    for (const auto& [id, c] : base.constraints()) {
        if (base.status_of(id) != IdStatus::Enabled) continue;
        out.add_constraint(c);
        kept.push_back(base.identification().at(id));
    }
    for (const MetaConstraint& m : base.metas()) out.add_meta(m);
    out.set_identification(kept);
    return out;
}

}  // namespace iupc
