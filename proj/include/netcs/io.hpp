#pragma once

#include "netcs/design.hpp"
#include "netcs/experiment.hpp"
#include "netcs/network_model.hpp"
#include "netcs/recovery.hpp"
#include "netcs/structure_inference.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

// Serialised state indices are 1-based; in memory they are 0-based.

namespace netcs {

using Json = nlohmann::json;

Json network_to_json(const Network& net);
Network network_from_json(const Json& j);

Json plans_to_json(const std::vector<ExperimentPlan>& plans);
std::vector<ExperimentPlan> plans_from_json(const Json& j);

/// Comma separated, 17 significant digits, LF endings.
std::string matrix_to_csv(const Matrix& a);
Matrix matrix_from_csv(const std::string& text);

/// Writes Y.csv, U.csv and plans.json into `dir`.
void save_dataset(const DataSet& data, const std::filesystem::path& dir);
DataSet load_dataset(const std::filesystem::path& dir);

Json to_json(const UniquenessReport& report, const std::vector<int>& col_map = {});
Json to_json(const RecoveryResult& result);
Json to_json(const RowReport& report);
Json to_json(const StructurePattern& pattern);
StructurePattern pattern_from_json(const Json& j);

/// One JSON object per round, newline terminated.
std::string history_jsonl(const DesignState& state);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace netcs
