#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace cslx {

inline constexpr const char* kToolVersion = "0.1.0";

// Provenance block embedded in every emitted report: the subcommand, its
// inputs and the fully resolved configuration. Outputs are a pure function
// of the manifest, so identical manifests give identical reports. The
// timestamp honors SOURCE_DATE_EPOCH for reproducible runs.
struct RunManifest {
  std::string subcommand;
  std::vector<std::string> inputs;
  nlohmann::json config;
  std::string tool_version = kToolVersion;
  std::string timestamp;  // ISO 8601 UTC
};

RunManifest make_manifest(std::string subcommand, std::vector<std::string> inputs,
                          nlohmann::json config);

nlohmann::json to_json(const RunManifest& m);

}  // namespace cslx
