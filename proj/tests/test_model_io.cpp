#include <doctest.h>

#include <random>

#include "iupc/errors.hpp"
#include "iupc/model_io.hpp"
#include "support/generators.hpp"
#include "support/helpers.hpp"

using namespace iupc;

namespace {

std::string linear_schema(const std::string& id, const std::vector<std::string>& labels) {
    std::string nodes = R"({"id": "start", "kind": "start"})";
    std::string edges;
    std::string prev = "start";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        std::string node_id = "a" + std::to_string(i);
        nodes += ", {\"id\": \"" + node_id + "\", \"kind\": \"activity\", \"label\": \"" +
                 labels[i] + "\"}";
        edges += (edges.empty() ? "" : ", ");
        edges += "{\"from\": \"" + prev + "\", \"to\": \"" + node_id + "\"}";
        prev = node_id;
    }
    nodes += R"(, {"id": "end", "kind": "end"})";
    edges += ", {\"from\": \"" + prev + "\", \"to\": \"end\"}";
    return "{\"id\": \"" + id + "\", \"nodes\": [" + nodes + "], \"control_edges\": [" + edges +
           "]}";
}

}  // namespace

TEST_CASE("three-activity sequence parses to 5 nodes and 4 edges") {
    ProcessSchema s = parse_process_schema(linear_schema("Seq", {"a", "b", "c"}));
    CHECK(s.nodes.size() == 5);
    CHECK(s.control_edges.size() == 4);
    CHECK(s.activity_labels() == std::set<std::string>{"a", "b", "c"});
}

TEST_CASE("guarded xor split carries guards and data element") {
    ProcessSchema s = parse_process_schema(testing::read_fixture("schemas/treatment.json"));
    int guards = 0;
    for (const ControlEdge& e : s.control_edges)
        if (e.guard) ++guards;
    CHECK(guards == 2);
    REQUIRE(s.data_element("age") != nullptr);
    CHECK(s.data_element("age")->type == DataType::Integer);
}

TEST_CASE("xor-split edge without a guard is a model error naming the edge") {
    std::string text = R"({
      "id": "Bad",
      "nodes": [
        {"id": "start", "kind": "start"},
        {"id": "g", "kind": "xor-split"},
        {"id": "a", "kind": "activity", "label": "a"},
        {"id": "b", "kind": "activity", "label": "b"},
        {"id": "j", "kind": "xor-join"},
        {"id": "end", "kind": "end"}
      ],
      "control_edges": [
        {"from": "start", "to": "g"},
        {"from": "g", "to": "a", "guard": "x == 1"},
        {"from": "g", "to": "b"},
        {"from": "a", "to": "j"},
        {"from": "b", "to": "j"},
        {"from": "j", "to": "end"}
      ],
      "data_elements": [{"name": "x", "type": "integer"}]
    })";
    CHECK_THROWS_WITH_AS(parse_process_schema(text),
                         doctest::Contains("'g' -> 'b'"), ModelError);
}

TEST_CASE("schema invariant breaches are rejected") {
    CHECK_THROWS_AS(parse_process_schema(R"({"id": "X", "nodes": [], "control_edges": []})"),
                    ModelError);
    CHECK_THROWS_AS(parse_process_schema("not json"), SyntaxError);
    // nodes off every start-to-end path are rejected
    std::string island = R"({
      "id": "Island",
      "nodes": [
        {"id": "start", "kind": "start"},
        {"id": "a", "kind": "activity", "label": "a"},
        {"id": "end", "kind": "end"},
        {"id": "ghost1", "kind": "activity", "label": "g1"},
        {"id": "ghost2", "kind": "activity", "label": "g2"}
      ],
      "control_edges": [
        {"from": "start", "to": "a"},
        {"from": "a", "to": "end"},
        {"from": "ghost1", "to": "ghost2"},
        {"from": "ghost2", "to": "ghost1"}
      ]
    })";
    CHECK_THROWS_WITH_AS(parse_process_schema(island), doctest::Contains("ghost"), ModelError);

    // guards may only reference declared data elements
    std::string bad_guard = R"({
      "id": "BadGuard",
      "nodes": [
        {"id": "start", "kind": "start"},
        {"id": "g", "kind": "xor-split"},
        {"id": "a", "kind": "activity", "label": "a"},
        {"id": "b", "kind": "activity", "label": "b"},
        {"id": "j", "kind": "xor-join"},
        {"id": "end", "kind": "end"}
      ],
      "control_edges": [
        {"from": "start", "to": "g"},
        {"from": "g", "to": "a", "guard": "mystery >= 1"},
        {"from": "g", "to": "b", "guard": "mystery < 1"},
        {"from": "a", "to": "j"},
        {"from": "b", "to": "j"},
        {"from": "j", "to": "end"}
      ]
    })";
    CHECK_THROWS_WITH_AS(parse_process_schema(bad_guard), doctest::Contains("mystery"),
                         ModelError);
}

TEST_CASE("trace parsing groups by instance and enforces order") {
    std::string two = R"({"instance_id": "i1", "process_type": "P", "kind": "start", "activity_label": "blood test", "occurrence_id": "o1", "timestamp": "2024-05-01T10:00:00Z"}
{"instance_id": "i1", "process_type": "P", "kind": "complete", "activity_label": "blood test", "occurrence_id": "o1", "timestamp": "2024-05-01T10:20:00Z"})";
    std::vector<Trace> traces = parse_trace(two);
    REQUIRE(traces.size() == 1);
    CHECK(traces[0].events.size() == 2);

    std::string interleaved = R"({"instance_id": "i2", "process_type": "P", "kind": "start", "activity_label": "a", "occurrence_id": "o1", "timestamp": "2024-05-01T10:00:00Z"}
{"instance_id": "i1", "process_type": "P", "kind": "start", "activity_label": "a", "occurrence_id": "o2", "timestamp": "2024-05-01T10:01:00Z"}
{"instance_id": "i2", "process_type": "P", "kind": "complete", "activity_label": "a", "occurrence_id": "o1", "timestamp": "2024-05-01T10:02:00Z"}
{"instance_id": "i1", "process_type": "P", "kind": "complete", "activity_label": "a", "occurrence_id": "o2", "timestamp": "2024-05-01T10:03:00Z"})";
    std::vector<Trace> both = parse_trace(interleaved);
    REQUIRE(both.size() == 2);
    CHECK(both[0].instance_id == "i1");
    CHECK(both[1].instance_id == "i2");

    std::string backwards = R"({"instance_id": "i1", "process_type": "P", "kind": "complete", "activity_label": "a", "occurrence_id": "o1", "timestamp": "2024-05-01T10:00:00Z"})";
    CHECK_THROWS_AS(parse_trace(backwards), OrderError);
}

TEST_CASE("resource model validation") {
    ResourceModel m = parse_resource_model(testing::read_fixture("resources.json"));
    CHECK(m.actor_has_role("alice", "Doctor") == Tri::Yes);
    CHECK(m.actor_has_role("bob", "Doctor") == Tri::No);
    CHECK(m.actor_has_role("stranger", "Doctor") == Tri::Maybe);

    CHECK_THROWS_AS(parse_resource_model(
                        R"({"roles": ["Doctor"], "actors": [], "role_assignments": {"ghost": ["Doctor"]}})"),
                    ModelError);
    // empty model is valid; every predicate evaluates to unknown
    ResourceModel empty = parse_resource_model("{}");
    CHECK(empty.actor_has_role("anyone", "Doctor") == Tri::Maybe);
}

TEST_CASE("parse-serialize-parse is identity on models") {
    std::mt19937 rng(7);
    for (int round = 0; round < 25; ++round) {
        testing::GeneratedSchema g = testing::random_schema(rng);
        ProcessSchema reparsed = parse_process_schema(serialize_process_schema(g.schema));
        CHECK(reparsed == g.schema);
        CHECK(serialize_process_schema(reparsed) == serialize_process_schema(g.schema));
    }

    ProcessSchema treatment = parse_process_schema(testing::read_fixture("schemas/treatment.json"));
    CHECK(parse_process_schema(serialize_process_schema(treatment)) == treatment);

    ResourceModel m = parse_resource_model(testing::read_fixture("resources.json"));
    CHECK(parse_resource_model(serialize_resource_model(m)) == m);

    ActivityRepository repo = parse_activity_repository(testing::read_fixture("repo.json"));
    CHECK(parse_activity_repository(serialize_activity_repository(repo)) == repo);

    std::vector<Trace> traces = parse_trace(testing::read_fixture("traces/c3_violation.jsonl"));
    CHECK(parse_trace(serialize_traces(traces)) == traces);
}
