// iupc: batch front end for constraint identification, design-time checking,
// trace replay, base linting, and constraint classification.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "iupc/base.hpp"
#include "iupc/dsl.hpp"
#include "iupc/errors.hpp"
#include "iupc/identifier.hpp"
#include "iupc/model_io.hpp"
#include "iupc/monitor.hpp"
#include "iupc/properties.hpp"
#include "iupc/verifier.hpp"

namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw iupc::SyntaxError("cannot read file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<iupc::ProcessSchema> load_schemas(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw iupc::SyntaxError("schema directory '" + dir.string() + "' does not exist");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<iupc::ProcessSchema> schemas;
    for (const auto& f : files) schemas.push_back(iupc::parse_process_schema(read_file(f)));
    return schemas;
}

iupc::DomainRuleSet rules_of_base(const iupc::ConstraintBase& base) {
    iupc::DomainRuleSet rules;
    for (const auto& [id, c] : base.constraints()) {
        (void)id;
        rules.constraints.push_back(c);
    }
    return rules;
}

Json identification_to_json(const std::vector<iupc::IdentificationResult>& results) {
    Json out;
    out["results"] = Json::array();
    for (const iupc::IdentificationResult& r : results) {
        Json rj;
        rj["rule"] = r.rule_id;
        rj["status"] = iupc::id_status_text(r.status);
        if (!r.enabled_in.empty()) {
            rj["enabled_in"] = Json::array();
            for (const iupc::EnabledEvidence& ev : r.enabled_in)
                rj["enabled_in"].push_back(
                    Json{{"schema", ev.schema_id}, {"anchor_labels", ev.anchor_labels}});
        }
        if (!r.repository_labels.empty()) rj["repository_labels"] = r.repository_labels;
        out["results"].push_back(std::move(rj));
    }
    return out;
}

int default_loop_bound() {
    if (const char* env = std::getenv("IUPC_LOOP_BOUND")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 2;
}

int cmd_identify(const std::string& rules_file, const std::string& schemas_dir,
                 const std::string& repo_file, const std::string& format) {
    iupc::RuleDocument doc = iupc::parse_rule_document(read_file(rules_file));
    iupc::DomainRuleSet rules = iupc::DomainRuleSet::from_document(doc);
    std::vector<iupc::ProcessSchema> schemas = load_schemas(schemas_dir);
    iupc::ActivityRepository repo = iupc::parse_activity_repository(read_file(repo_file));
    std::vector<iupc::IdentificationResult> results = iupc::identify(rules, schemas, repo);
    if (format == "text") {
        for (const iupc::IdentificationResult& r : results) {
            std::cout << r.rule_id << ": " << iupc::id_status_text(r.status);
            for (const iupc::EnabledEvidence& ev : r.enabled_in) {
                std::cout << " [" << ev.schema_id << ":";
                for (const std::string& l : ev.anchor_labels) std::cout << " '" << l << "'";
                std::cout << "]";
            }
            std::cout << "\n";
        }
    } else {
        std::cout << identification_to_json(results).dump(2) << "\n";
    }
    return 0;
}

int cmd_check(const std::string& base_dir, const std::string& schemas_dir, int loop_bound,
              const std::string& format, const std::string& repo_file) {
    iupc::ConstraintBase base = iupc::load_base(base_dir);
    std::vector<iupc::ProcessSchema> schemas = load_schemas(schemas_dir);
    iupc::ActivityRepository repo;
    if (!repo_file.empty()) repo = iupc::parse_activity_repository(read_file(repo_file));
    base.set_identification(iupc::identify(rules_of_base(base), schemas, repo));
    iupc::PathOptions options;
    options.loop_bound = loop_bound;
    iupc::VerificationReport report = iupc::verify_all(base, schemas, options);
    std::cout << (format == "text" ? iupc::report_to_text(report)
                                   : iupc::report_to_json(report));
    return report.all_satisfied() ? 0 : 1;
}

int cmd_replay(const std::string& base_dir, const std::string& trace_file,
               const std::string& resource_file, const std::string& schemas_dir) {
    iupc::ConstraintBase base = iupc::load_base(base_dir);
    std::vector<iupc::ProcessSchema> schemas;
    if (!schemas_dir.empty()) {
        schemas = load_schemas(schemas_dir);
        base.set_identification(iupc::identify(rules_of_base(base), schemas, {}));
    } else if (!base.identification_current()) {
        throw iupc::StaleIdentification(
            "base carries no current identification; pass --schemas to identify");
    }
    iupc::ResourceModel resources = iupc::parse_resource_model(read_file(resource_file));
    std::vector<iupc::Trace> traces = iupc::parse_trace(read_file(trace_file));
    iupc::MonitorSession session = iupc::open_session(base, schemas, resources);
    iupc::ReplayResult result = iupc::replay(session, iupc::merge_traces(traces));
    for (const iupc::Violation& v : result.violations)
        std::cout << iupc::violation_to_json_line(v) << "\n";
    return result.violations.empty() ? 0 : 1;
}

int cmd_lint(const std::string& base_dir, const std::string& schemas_dir,
             const std::string& resource_file, const std::string& format) {
    iupc::ConstraintBase base = iupc::load_base(base_dir);
    std::vector<iupc::ProcessSchema> schemas = load_schemas(schemas_dir);
    iupc::ResourceModel resources = iupc::parse_resource_model(read_file(resource_file));
    std::vector<iupc::Conflict> conflicts = iupc::check_consistency(base);
    std::vector<iupc::MetaViolation> meta = iupc::evaluate_meta(base, schemas, resources);
    if (format == "text") {
        for (const iupc::Conflict& c : conflicts)
            std::cout << iupc::conflict_kind_text(c.kind) << ": " << c.first_id << " vs "
                      << c.second_id << " (" << c.detail << ")\n";
        for (const iupc::MetaViolation& v : meta)
            std::cout << "meta " << v.meta_id << ": " << v.subject << " (" << v.detail << ")\n";
    } else {
        Json out;
        out["conflicts"] = Json::array();
        for (const iupc::Conflict& c : conflicts)
            out["conflicts"].push_back(Json{{"kind", iupc::conflict_kind_text(c.kind)},
                                            {"first", c.first_id},
                                            {"second", c.second_id},
                                            {"detail", c.detail}});
        out["meta_violations"] = Json::array();
        for (const iupc::MetaViolation& v : meta)
            out["meta_violations"].push_back(
                Json{{"meta", v.meta_id}, {"subject", v.subject}, {"detail", v.detail}});
        std::cout << out.dump(2) << "\n";
    }
    return conflicts.empty() && meta.empty() ? 0 : 1;
}

int cmd_classify(const std::string& base_dir) {
    iupc::ConstraintBase base = iupc::load_base(base_dir);
    for (const auto& [id, c] : base.constraints()) {
        std::cout << id << ": " << iupc::classify_type(c) << " (usage "
                  << iupc::usage_text(c.properties.usage) << "; application";
        for (iupc::Application a : c.properties.application)
            std::cout << " " << iupc::application_text(a);
        std::cout << "; scope";
        for (iupc::Scope s : c.properties.scope) std::cout << " " << iupc::scope_text(s);
        std::cout << "; origin " << iupc::origin_text(c.properties.origin) << ")\n";
    }
    for (const iupc::MetaConstraint& m : base.metas()) std::cout << m.id << ": meta\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"process-constraint engine"};
    app.require_subcommand(1);

    std::string rules_file, schemas_dir, repo_file, base_dir, trace_file, resource_file;
    std::string format = "json";
    int loop_bound = default_loop_bound();

    CLI::App* identify = app.add_subcommand("identify", "separate process constraints from rules");
    identify->add_option("rules", rules_file, "rules document (.iupc)")->required();
    identify->add_option("schemas", schemas_dir, "directory of schema JSON files")->required();
    identify->add_option("repo", repo_file, "activity repository JSON file")->required();
    identify->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

    CLI::App* check = app.add_subcommand("check", "design-time compliance checking");
    check->add_option("base", base_dir, "constraint base directory")->required();
    check->add_option("schemas", schemas_dir, "directory of schema JSON files")->required();
    check->add_option("--loop-bound", loop_bound)->check(CLI::PositiveNumber);
    check->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
    check->add_option("--repo", repo_file, "activity repository JSON file");

    CLI::App* replay = app.add_subcommand("replay", "replay a trace against the base");
    replay->add_option("base", base_dir, "constraint base directory")->required();
    replay->add_option("trace", trace_file, "trace file (JSON lines)")->required();
    replay->add_option("resources", resource_file, "resource model JSON file")->required();
    replay->add_option("--schemas", schemas_dir, "directory of schema JSON files");

    CLI::App* lint = app.add_subcommand("lint", "consistency and meta-constraint checks");
    lint->add_option("base", base_dir, "constraint base directory")->required();
    lint->add_option("schemas", schemas_dir, "directory of schema JSON files")->required();
    lint->add_option("resources", resource_file, "resource model JSON file")->required();
    lint->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

    CLI::App* classify = app.add_subcommand("classify", "print the type of each constraint");
    classify->add_option("base", base_dir, "constraint base directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (identify->parsed())
            return cmd_identify(rules_file, schemas_dir, repo_file, format);
        if (check->parsed())
            return cmd_check(base_dir, schemas_dir, loop_bound, format, repo_file);
        if (replay->parsed()) return cmd_replay(base_dir, trace_file, resource_file, schemas_dir);
        if (lint->parsed()) return cmd_lint(base_dir, schemas_dir, resource_file, format);
        if (classify->parsed()) return cmd_classify(base_dir);
    } catch (const iupc::SyntaxError& e) {
        std::cerr << "error: " << e.what();
        if (e.line() > 0) std::cerr << " (line " << e.line() << ", column " << e.column() << ")";
        std::cerr << "\n";
        return 2;
    } catch (const iupc::Error& e) {
        std::cerr << "error [" << e.kind() << "]: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
