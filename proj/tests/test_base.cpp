#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "iupc/base.hpp"
#include "iupc/dsl.hpp"
#include "iupc/errors.hpp"
#include "iupc/model_io.hpp"
#include "support/helpers.hpp"

using namespace iupc;

namespace {

ProcessConstraint fixture(const std::string& id) {
    return parse_constraint(testing::read_fixture("base/constraints/" + id + ".iupc"));
}

std::vector<ProcessSchema> all_schemas() {
    std::vector<ProcessSchema> out;
    for (const std::string& name : {"treatment", "invasive_surgery", "lab"})
        out.push_back(parse_process_schema(testing::read_fixture("schemas/" + name + ".json")));
    return out;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("iupc_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

ConstraintBase identified(ConstraintBase base, const std::vector<ProcessSchema>& schemas) {
    DomainRuleSet rules;
    for (const auto& [id, c] : base.constraints()) {
        (void)id;
        rules.constraints.push_back(c);
    }
    base.set_identification(identify(
        rules, schemas, parse_activity_repository(testing::read_fixture("repo.json"))));
    return base;
}

}  // namespace

TEST_CASE("save-then-load round trips the base") {
    TempDir dir;
    ConstraintBase base;
    base.add_constraint(fixture("C6"));
    base.add_constraint(fixture("C3"));
    base.add_constraint(fixture("C11"));
    base.add_meta(parse_meta_constraint(testing::read_fixture("base/constraints/C5.iupc")));
    base = identified(std::move(base), all_schemas());

    save_base(base, dir.path);
    ConstraintBase loaded = load_base(dir.path);
    CHECK(loaded.version() == base.version());
    CHECK(loaded.identification_version() == base.identification_version());
    REQUIRE(loaded.constraints().size() == 3);
    for (const auto& [id, c] : base.constraints())
        CHECK(loaded.find(id)->structurally_equal(c));
    CHECK(loaded.metas() == base.metas());
    CHECK(loaded.identification().size() == base.identification().size());
    CHECK(loaded.status_of("C3") == IdStatus::Enabled);

    // empty base round trip
    TempDir empty_dir;
    save_base(ConstraintBase{}, empty_dir.path);
    ConstraintBase empty = load_base(empty_dir.path);
    CHECK(empty.constraints().empty());
    CHECK(empty.metas().empty());
}

TEST_CASE("corrupted index raises SyntaxError; stale save raises VersionConflict") {
    TempDir dir;
    {
        std::ofstream out(dir.path / "index.json");
        out << "{ not json";
    }
    CHECK_THROWS_AS(load_base(dir.path), SyntaxError);
    CHECK_THROWS_AS(load_base(dir.path / "missing"), SyntaxError);

    TempDir dir2;
    ConstraintBase newer;
    newer.add_constraint(fixture("C6"));
    newer.add_constraint(fixture("C3"));
    save_base(newer, dir2.path);  // version 2 on disk
    ConstraintBase older;
    older.add_constraint(fixture("C6"));  // version 1
    CHECK_THROWS_AS(save_base(older, dir2.path), VersionConflict);
}

TEST_CASE("version counts every mutation") {
    ConstraintBase base;
    CHECK(base.version() == 0);
    base.add_constraint(fixture("C6"));
    CHECK(base.version() == 1);
    base.add_constraint(fixture("C3"));
    CHECK(base.version() == 2);
    base.remove_constraint("C3");
    CHECK(base.version() == 3);
    base.add_meta(parse_meta_constraint("meta M { for each constraint require has trigger; }"));
    CHECK(base.version() == 4);
    std::uint64_t before = base.version();
    base = identified(std::move(base), all_schemas());
    CHECK(base.version() == before + 1);
    CHECK(base.identification_current());
}

TEST_CASE("consistency checking finds the three conflict kinds exactly once each") {
    for (const auto& [dir, kind] :
         std::vector<std::pair<std::string, Conflict::Kind>>{
             {"base_contradiction", Conflict::Kind::Contradiction},
             {"base_cycle", Conflict::Kind::OrderingCycle},
             {"base_dup", Conflict::Kind::Duplicate}}) {
        CAPTURE(dir);
        ConstraintBase base = load_base(testing::fixture_dir() / dir);
        auto conflicts = check_consistency(base);
        REQUIRE(conflicts.size() == 1);
        CHECK(conflicts[0].kind == kind);
    }

    // the full rule set is conflict-free
    CHECK(check_consistency(load_base(testing::fixture_dir() / "base")).empty());
}

TEST_CASE("conflicts require overlapping contexts") {
    ConstraintBase base;
    base.add_constraint(parse_constraint(
        "constraint A { context process 'P1' all; on x is 'adm'; require y is 'blood test' and "
        "x eventually-precedes y; }"));
    base.add_constraint(parse_constraint(
        "constraint B { context process 'P2' all; on x is 'adm'; absent 'blood test'; }"));
    CHECK(check_consistency(base).empty());

    ConstraintBase overlapping;
    overlapping.add_constraint(parse_constraint(
        "constraint A { context process 'P1' all; on x is 'adm'; require y is 'blood test' and "
        "x eventually-precedes y; }"));
    overlapping.add_constraint(parse_constraint(
        "constraint B { context any process all; on x is 'adm'; absent 'blood test'; }"));
    CHECK(check_consistency(overlapping).size() == 1);
}

TEST_CASE("meta evaluation over activities and over constraints") {
    ResourceModel resources = parse_resource_model(testing::read_fixture("resources.json"));
    std::vector<ProcessSchema> schemas = all_schemas();

    // centrifuge activity with C10 attached: clean
    ConstraintBase base = load_base(testing::fixture_dir() / "base");
    CHECK(evaluate_meta(base, schemas, resources).empty());

    // without C10: one violation naming the offending activity
    ConstraintBase missing = load_base(testing::fixture_dir() / "base_meta");
    auto violations = evaluate_meta(missing, schemas, resources);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].meta_id == "M1");
    CHECK(violations[0].subject == "Lab/centrifuge");

    // predicate meta over constraints
    ConstraintBase preds;
    preds.add_constraint(fixture("C11"));  // behavioral, no trigger
    preds.add_constraint(fixture("C10"));  // behavioral with trigger
    preds.add_meta(parse_meta_constraint(
        "meta M2 { for each constraint where usage == behavioral require has trigger; }"));
    auto pred_violations = evaluate_meta(preds, schemas, resources);
    REQUIRE(pred_violations.size() == 1);
    CHECK(pred_violations[0].subject == "C11");

    // unresolvable resource reference is an error
    ConstraintBase bad;
    bad.add_meta(parse_meta_constraint(
        "meta M3 { for each activity uses-resource 'sequencer' require constraint C10; }"));
    CHECK_THROWS_AS(evaluate_meta(bad, schemas, resources), ModelError);
}

TEST_CASE("filter_enabled returns exactly the enabled sub-base") {
    ConstraintBase base = identified(load_base(testing::fixture_dir() / "base"), all_schemas());
    ConstraintBase enabled = filter_enabled(base);

    std::set<std::string> expected;
    for (const auto& [id, r] : base.identification())
        if (r.status == IdStatus::Enabled) expected.insert(id);
    std::set<std::string> got;
    for (const auto& [id, c] : enabled.constraints()) {
        (void)c;
        got.insert(id);
    }
    CHECK(got == expected);
    CHECK(got.count("C1") == 0);  // idle stays behind
    CHECK(got.count("C3") == 1);

    // oracle equivalence: identify-then-select
    for (const std::string& id : got) CHECK(base.status_of(id) == IdStatus::Enabled);

    // all idle: empty sub-base
    ConstraintBase idle;
    idle.add_constraint(fixture("C1"));
    idle = identified(std::move(idle), all_schemas());
    CHECK(filter_enabled(idle).constraints().empty());

    // a change that enables C1 flows into the filter after re-identification
    ConstraintBase pair;
    pair.add_constraint(fixture("C1"));
    pair.add_constraint(fixture("C3"));
    std::vector<ProcessSchema> schemas = all_schemas();
    ProcessSchema& treatment = schemas[0];
    std::string end_id = treatment.end_node().id;
    treatment.nodes.push_back(Node{"aspirin", NodeKind::Activity, "administer Aspirin", {}});
    for (ControlEdge& e : treatment.control_edges)
        if (e.to == end_id) {
            e.to = "aspirin";
            break;
        }
    treatment.control_edges.push_back(ControlEdge{"aspirin", end_id, {}});
    pair = identified(std::move(pair), schemas);
    ConstraintBase enabled_pair = filter_enabled(pair);
    CHECK(enabled_pair.constraints().size() == 2);
    CHECK(enabled_pair.find("C1") != nullptr);

    // stale identification is refused
    base.add_constraint(fixture("C6"));
    CHECK_THROWS_AS(filter_enabled(base), StaleIdentification);
}
