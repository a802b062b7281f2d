// run.hpp: executes a configured experiment and writes its run directory.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "ionkick/config.hpp"

namespace ionkick {

inline constexpr const char* tool_version = "1.0.0";

struct FileEntry {
  std::string name;  // relative to the run directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  nlohmann::json config;
  std::string tool_version;
  std::string started;   // UTC, ISO 8601
  std::string finished;
  std::vector<FileEntry> files;
};

// Output file name of a 2D snapshot: position_<backend>_nut_<nu t, 6 decimals>.csv
std::string snapshot_file_name(Backend backend, double nu_t);

// Runs every requested backend, writes grids, scans, reports, the backend
// comparison (backend "both") and manifest.json into config.output.directory.
RunManifest run_experiment(const ExperimentConfig& config);
nlohmann::json manifest_json(const RunManifest& manifest);

}  // namespace ionkick
