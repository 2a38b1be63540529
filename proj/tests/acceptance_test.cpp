// Acceptance suite: every criterion prints one PASS/FAIL line and the binary
// exits nonzero if any criterion fails or overruns its time budget.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "iupc/base.hpp"
#include "iupc/dsl.hpp"
#include "iupc/identifier.hpp"
#include "iupc/model_io.hpp"
#include "iupc/monitor.hpp"
#include "iupc/properties.hpp"
#include "iupc/verifier.hpp"
#include "support/generators.hpp"
#include "support/helpers.hpp"

using namespace iupc;

namespace {

struct CheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw CheckFailed(message);
}

ProcessConstraint fixture(const std::string& id) {
    return parse_constraint(testing::read_fixture("base/constraints/" + id + ".iupc"));
}

std::vector<ProcessSchema> all_schemas() {
    std::vector<ProcessSchema> out;
    for (const std::string& name : {"treatment", "invasive_surgery", "lab"})
        out.push_back(parse_process_schema(testing::read_fixture("schemas/" + name + ".json")));
    return out;
}

ProcessSchema with_activity_added(const ProcessSchema& s, const std::string& label) {
    ProcessSchema out = s;
    std::string node_id = "added_" + std::to_string(out.nodes.size());
    out.nodes.push_back(Node{node_id, NodeKind::Activity, label, {}});
    std::string end_id = out.end_node().id;
    for (ControlEdge& e : out.control_edges) {
        if (e.to == end_id) {
            e.to = node_id;
            break;
        }
    }
    out.control_edges.push_back(ControlEdge{node_id, end_id, {}});
    out.validate();
    return out;
}

// --- criterion 1: worked-example fidelity ------------------------------------

void criterion_worked_examples() {
    ProcessConstraint c6 = fixture("C6");
    require(c6.compact_form() == "((Invasive Surgery, ALL), SP_C6, ∅)",
            "C6 compact form mismatch: " + c6.compact_form());
    require(c6.condition.empty(), "C6 must carry an empty condition");
    require(c6.behavior.empty(), "C6 must carry an empty behavior");
    Linkage expected_linkage;
    expected_linkage.context.processes = {"Invasive Surgery"};
    expected_linkage.context.all_instances = true;
    expected_linkage.pattern.bindings = {PatternBinding{"s", "conduct surgery", true},
                                         PatternBinding{"e", "examine patient", false}};
    expected_linkage.pattern.relations = {Relation{Relation::Kind::EventuallyFollows, "e", "s"}};
    require(c6.linkage == expected_linkage, "C6 linkage differs from the expected structure");

    ProcessConstraint c3 = fixture("C3");
    require(c3.condition.data.has_value() &&
                *c3.condition.data == DataExpr::same_value(FieldRef{"a1", "patient"},
                                                           FieldRef{"a2", "patient"}),
            "C3 same-patient atom missing");
    require(c3.condition.time.atoms ==
                std::vector<TimeAtom>{
                    TimeAtom{TimeAtom::Kind::MinBetween, "a1", "a2", Duration::hours(4)}},
            "C3 min_time_between(a1, a2, 4h) atom missing");

    ProcessConstraint c11 = fixture("C11");
    require(c11.behavior.kind == Behavior::Kind::Attribute && c11.behavior.key == "ROLE" &&
                c11.behavior.value == AttributeValue{Value{std::string("Doctor")}},
            "C11 must attribute ROLE := Doctor");
    require(c11.compact_form() == "((Invasive Surgery, ALL), SP_C11, ∅)",
            "C11 compact form mismatch: " + c11.compact_form());

    // parse(serialize(c)) is structurally identical for all three
    for (const ProcessConstraint& c : {c6, c3, c11})
        require(parse_constraint(serialize_constraint(c)).structurally_equal(c),
                "round trip broke structural equality for " + c.id);
}

// --- criterion 2: identification narrative -----------------------------------

void criterion_identification() {
    RuleDocument doc = parse_rule_document(testing::read_fixture("rules/fig1.iupc"));
    require(doc.constraints.size() + doc.metas.size() == 16,
            "fig1 fixture must hold 16 constraints");
    DomainRuleSet rules = DomainRuleSet::from_document(doc);
    std::vector<ProcessSchema> schemas = all_schemas();
    ActivityRepository repo = parse_activity_repository(testing::read_fixture("repo.json"));

    auto status_of = [](const std::vector<IdentificationResult>& results, const std::string& id) {
        for (const IdentificationResult& r : results)
            if (r.rule_id == id) return r.status;
        throw CheckFailed("no identification result for " + id);
    };

    auto before = identify(rules, schemas, repo);
    require(status_of(before, "C1") == IdStatus::Idle, "C1 must start idle");
    require(status_of(before, "C3") == IdStatus::Enabled, "C3 must be enabled");

    std::vector<ProcessSchema> changed = schemas;
    changed[0] = with_activity_added(changed[0], "administer Aspirin");
    RecomputeResult rec =
        recompute_on_change(before, rules, changed, repo, "administer Aspirin", "Treatment");
    require(status_of(rec.results, "C1") == IdStatus::Enabled,
            "C1 must become enabled after adding administer Aspirin");
    bool saw_transition = false;
    for (const StatusTransition& t : rec.transitions)
        if (t.rule_id == "C1" && t.from == IdStatus::Idle && t.to == IdStatus::Enabled)
            saw_transition = true;
    require(saw_transition, "idle-to-enabled transition for C1 must be reported");

    // 200 random single-label change sequences against full re-identification
    std::mt19937 rng(41);
    std::vector<std::string> candidate_labels;
    for (const ProcessConstraint& c : rules.constraints)
        for (const std::string& l : c.linkage.pattern.referenced_labels())
            candidate_labels.push_back(l);
    candidate_labels.push_back("unrelated activity");

    int agreements = 0, sequences = 0;
    while (sequences < 200) {
        std::vector<ProcessSchema> rolling = schemas;
        ActivityRepository rolling_repo = repo;
        auto prev = identify(rules, rolling, rolling_repo);
        int changes = 1 + static_cast<int>(rng() % 3);
        bool agreed = true;
        bool applied_any = false;
        for (int k = 0; k < changes; ++k) {
            std::size_t which = rng() % rolling.size();
            const std::string& label = candidate_labels[rng() % candidate_labels.size()];
            if (rolling[which].activity_labels().count(label)) continue;
            rolling[which] = with_activity_added(rolling[which], label);
            rolling_repo.labels.insert(label);
            RecomputeResult step = recompute_on_change(prev, rules, rolling, rolling_repo, label,
                                                       rolling[which].id);
            if (step.results != identify(rules, rolling, rolling_repo)) agreed = false;
            prev = step.results;
            applied_any = true;
        }
        if (!applied_any) continue;
        ++sequences;
        if (agreed) ++agreements;
    }
    require(agreements == 200, "recompute agreed on " + std::to_string(agreements) + "/200");
}

// --- criterion 3: data-gap reproduction --------------------------------------

void criterion_data_gap() {
    ProcessConstraint c9 = fixture("C9");
    ProcessSchema treatment = parse_process_schema(testing::read_fixture("schemas/treatment.json"));

    Verdict v = analyze_data_coverage(c9, treatment);
    require(v.status == VerdictStatus::PossiblyViolated, "expected possibly-violated");
    require(v.monitor_required, "gap verdict must require monitoring");
    require(v.interval_witnesses.size() == 1, "expected exactly one interval witness");
    require(v.interval_witnesses[0].element == "age" && v.interval_witnesses[0].lo == 62 &&
                v.interval_witnesses[0].hi == 64,
            "witness interval must be exactly [62, 64]");

    // inject traces across the whole declared age domain; violations exactly
    // inside the witness interval (the criterion's 61..65 boundary included)
    for (std::int64_t age = 0; age <= 120; ++age) {
        std::vector<TraceEvent> events;
        Timestamp t = parse_iso8601("2024-07-01T08:00:00Z");
        auto add = [&](const std::string& label, const std::string& occ,
                       std::map<std::string, Value> data) {
            Event e;
            e.kind = EventKind::Start;
            e.activity_label = label;
            e.occurrence_id = occ;
            e.timestamp = t;
            e.data = std::move(data);
            events.push_back(TraceEvent{"gap", "Treatment", e});
            e.kind = EventKind::Complete;
            e.data.clear();
            e.timestamp = t + 60'000;
            events.push_back(TraceEvent{"gap", "Treatment", e});
            t += 120'000;
        };
        add("patient admission", "o-adm", {{"age", age}, {"patient", std::string("p")}});
        add("blood test", "o-bt", {});
        if (age >= 65) add("lab test", "o-lt", {});  // the schema guard routes here
        add("sonography", "o-son", {});

        MonitorSession session({c9}, {treatment}, ResourceModel{});
        ReplayResult result = replay(session, events);
        bool violated = !result.violations.empty();
        bool expected = age >= 62 && age <= 64;
        require(violated == expected,
                "age " + std::to_string(age) + (expected ? " must" : " must not") + " violate");
    }
}

// --- criterion 4: oracle equivalence -----------------------------------------

void criterion_oracle_equivalence() {
    std::mt19937 rng(43);
    int agreements = 0;
    const int total = 1000;
    for (int round = 0; round < total; ++round) {
        testing::GeneratedSchema g = testing::random_schema(rng);
        auto labels = g.schema.activity_labels();
        std::vector<std::string> pool(labels.begin(), labels.end());
        StructuralPattern p = testing::random_pattern(rng, pool, pool);

        ProcessConstraint c;
        c.id = "R";
        c.linkage.context.all_processes = true;
        c.linkage.context.all_instances = true;
        c.linkage.pattern = p;
        c.properties = derive_properties(c);

        Verdict v = check_design_time(c, g.schema);
        int actual = v.status == VerdictStatus::Satisfied    ? 0
                     : v.status == VerdictStatus::Violated   ? 1
                                                             : 2;
        int expected =
            testing::naive_design_verdict(p, g.schema, g.root, testing::block_paths(g));
        if (actual == expected) ++agreements;
    }
    require(agreements == total,
            "verdicts agreed on " + std::to_string(agreements) + "/" + std::to_string(total));
}

// --- criterion 5: design/run-time agreement ----------------------------------

void criterion_design_runtime_agreement() {
    std::mt19937 rng(47);
    int satisfied_schemas = 0;
    int clean_replays = 0;
    int wanted_replays = 0;
    int rounds = 0;
    while (satisfied_schemas < 100 && ++rounds < 5000) {
        testing::GeneratedSchema g = testing::random_schema(rng);
        auto labels = g.schema.activity_labels();
        std::vector<std::string> pool(labels.begin(), labels.end());
        StructuralPattern p = testing::random_pattern(rng, pool, pool);

        ProcessConstraint c;
        c.id = "S";
        c.linkage.context.all_processes = true;
        c.linkage.context.all_instances = true;
        c.linkage.pattern = p;
        c.properties = derive_properties(c);

        if (check_design_time(c, g.schema).status != VerdictStatus::Satisfied) continue;
        ++satisfied_schemas;

        auto paths = enumerate_paths(g.schema);
        for (int k = 0; k < 10; ++k) {
            const ExecutionPath& path = paths[rng() % paths.size()];
            Trace t = testing::linearize(g.schema, path, "i", 0, 60'000);
            MonitorSession session({c}, {g.schema}, ResourceModel{});
            ReplayResult r = replay(session, merge_traces({t}));
            ++wanted_replays;
            if (r.violations.empty()) ++clean_replays;
        }
    }
    require(satisfied_schemas == 100, "found only " + std::to_string(satisfied_schemas) +
                                          " satisfied schema/constraint pairs");
    require(clean_replays == wanted_replays,
            std::to_string(wanted_replays - clean_replays) + " replays produced violations");
}

// --- criterion 6: determinism and time translation ----------------------------

void criterion_determinism() {
    std::mt19937 rng(53);
    for (int round = 0; round < 50; ++round) {
        testing::GeneratedSchema g = testing::random_schema(rng);
        auto labels = g.schema.activity_labels();
        std::vector<std::string> pool(labels.begin(), labels.end());
        StructuralPattern p = testing::random_pattern(rng, pool, pool);

        ProcessConstraint c;
        c.id = "D";
        c.linkage.context.all_processes = true;
        c.linkage.context.all_instances = true;
        c.linkage.pattern = p;
        if (rng() % 2 == 0 && p.bindings.size() >= 2) {
            // add a temporal obligation between the first two pattern vars
            c.condition.time.atoms.push_back(TimeAtom{TimeAtom::Kind::MinBetween,
                                                      p.bindings[0].var, p.bindings[1].var,
                                                      Duration::minutes(90)});
        }
        c.properties = derive_properties(c);

        auto paths = enumerate_paths(g.schema);
        const ExecutionPath& path = paths[rng() % paths.size()];
        Trace t = testing::linearize(g.schema, path, "i", parse_iso8601("2024-07-02T08:00:00Z"),
                                     static_cast<Timestamp>(60'000 + rng() % 600'000));

        auto run = [&](Timestamp shift) {
            Trace shifted = t;
            for (Event& e : shifted.events) e.timestamp += shift;
            MonitorSession session({c}, {g.schema}, ResourceModel{});
            ReplayResult r = replay(session, merge_traces({shifted}));
            std::ostringstream out;
            for (const Action& a : r.actions)
                out << action_kind_text(a.kind) << " " << a.constraint_id << " "
                    << a.occurrence_id << "\n";
            for (const Violation& v : r.violations) {
                out << v.constraint_id << " " << violation_reason_text(v.reason) << " "
                    << (v.timestamp - shift);
                for (const auto& [var, occ] : v.binding) out << " " << var << "=" << occ;
                out << "\n";
            }
            return out.str();
        };

        std::string baseline = run(0);
        require(run(0) == baseline, "identical streams must produce identical outputs");
        require(run(Duration::days(1).ms) == baseline,
                "a +24h shift must leave all verdicts unchanged");
    }
}

// --- criterion 7: base hygiene -------------------------------------------------

void criterion_base_hygiene() {
    ResourceModel resources = parse_resource_model(testing::read_fixture("resources.json"));
    std::vector<ProcessSchema> schemas = all_schemas();

    auto conflicts_of = [&](const std::string& dir) {
        return check_consistency(load_base(testing::fixture_dir() / dir));
    };
    auto contradiction = conflicts_of("base_contradiction");
    require(contradiction.size() == 1 &&
                contradiction[0].kind == Conflict::Kind::Contradiction,
            "contradiction fixture must produce exactly one contradiction");
    auto cycle = conflicts_of("base_cycle");
    require(cycle.size() == 1 && cycle[0].kind == Conflict::Kind::OrderingCycle,
            "cycle fixture must produce exactly one ordering cycle");
    auto dup = conflicts_of("base_dup");
    require(dup.size() == 1 && dup[0].kind == Conflict::Kind::Duplicate,
            "duplicate fixture must produce exactly one duplicate");

    auto meta = evaluate_meta(load_base(testing::fixture_dir() / "base_meta"), schemas, resources);
    require(meta.size() == 1 && meta[0].meta_id == "M1",
            "centrifuge meta fixture must produce exactly one meta violation");

    ConstraintBase clean = load_base(testing::fixture_dir() / "base");
    require(check_consistency(clean).empty(), "clean base must produce zero conflicts");
    require(evaluate_meta(clean, schemas, resources).empty(),
            "clean base must produce zero meta violations");
}

// --- criterion 8: effort reduction ---------------------------------------------

void criterion_effort_reduction() {
    ProcessSchema treatment = parse_process_schema(testing::read_fixture("schemas/treatment.json"));
    ConstraintBase base;
    ActivityRepository repo;
    for (int i = 0; i < 100; ++i) {
        std::ostringstream text;
        std::string id = (i < 10 ? "E" : "I") + std::to_string(i);
        if (i < 10) {
            text << "constraint " << id << " { context process 'Treatment' all; "
                 << "on a is 'blood test'; require b is 'sonography' and "
                 << "a eventually-precedes b; }";
        } else {
            std::string label = "archived activity " + std::to_string(i);
            repo.labels.insert(label);
            text << "constraint " << id << " { context any process all; on a is '" << label
                 << "'; }";
        }
        base.add_constraint(parse_constraint(text.str()));
    }
    DomainRuleSet rules;
    for (const auto& [id, c] : base.constraints()) {
        (void)id;
        rules.constraints.push_back(c);
    }
    base.set_identification(identify(rules, {treatment}, repo));

    VerificationReport report = verify_all(base, {treatment});
    require(report.checked == 10,
            "expected exactly 10 design-time checks, got " + std::to_string(report.checked));
    require(report.skipped == 90,
            "expected exactly 90 skipped constraints, got " + std::to_string(report.skipped));
    int skipped_entries = 0;
    for (const VerificationEntry& e : report.entries)
        if (!e.skipped_reason.empty()) ++skipped_entries;
    require(skipped_entries == 90, "skip reasons must be reported for all 90");
}

struct Criterion {
    int number;
    std::string name;
    double budget_seconds;
    std::function<void()> run;
};

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "worked-example fidelity (C6, C3, C11 compact forms)", 1.0,
         criterion_worked_examples},
        {2, "identification narrative and incremental recompute", 5.0, criterion_identification},
        {3, "data-gap reproduction (guard 65 vs constraint 62)", 1.0, criterion_data_gap},
        {4, "oracle equivalence on 1000 random schemas", 60.0, criterion_oracle_equivalence},
        {5, "design/run-time agreement on satisfied constraints", 30.0,
         criterion_design_runtime_agreement},
        {6, "replay determinism and time-translation invariance", 10.0, criterion_determinism},
        {7, "base hygiene conflicts and meta violations", 1.0, criterion_base_hygiene},
        {8, "effort reduction: 10 checks, 90 skips", 5.0, criterion_effort_reduction},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string failure;
        try {
            c.run();
        } catch (const std::exception& e) {
            failure = e.what();
        }
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (failure.empty() && seconds > c.budget_seconds) {
            std::ostringstream msg;
            msg << "exceeded time budget (" << seconds << "s > " << c.budget_seconds << "s)";
            failure = msg.str();
        }
        if (failure.empty()) {
            std::printf("criterion %d: PASS (%.2fs) - %s\n", c.number, seconds, c.name.c_str());
        } else {
            std::printf("criterion %d: FAIL (%.2fs) - %s: %s\n", c.number, seconds, c.name.c_str(),
                        failure.c_str());
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}
