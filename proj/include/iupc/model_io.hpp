#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "iupc/model.hpp"

namespace iupc {

// JSON document formats. Field names mirror the model types (snake_case).
// Parsers validate invariants and throw SyntaxError / ModelError / OrderError.

ProcessSchema parse_process_schema(std::string_view text);
std::string serialize_process_schema(const ProcessSchema& schema);

ActivityRepository parse_activity_repository(std::string_view text);
std::string serialize_activity_repository(const ActivityRepository& repo);

ResourceModel parse_resource_model(std::string_view text);
std::string serialize_resource_model(const ResourceModel& model);

// Trace files are JSON lines, one event per line, each carrying its
// instance_id and process_type; events are grouped per instance and ordered
// by timestamp (stable for ties).
std::vector<Trace> parse_trace(std::string_view text);
std::string serialize_traces(const std::vector<Trace>& traces);

}  // namespace iupc
