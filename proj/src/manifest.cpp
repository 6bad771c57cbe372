#include "cslx/manifest.hpp"

#include <cstdlib>
#include <ctime>

namespace cslx {

namespace {

std::string iso8601_utc_now() {
  std::time_t t = std::time(nullptr);
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long parsed = std::strtoll(env, &end, 10);
    if (end && *end == '\0') t = static_cast<std::time_t>(parsed);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunManifest make_manifest(std::string subcommand, std::vector<std::string> inputs,
                          nlohmann::json config) {
  RunManifest m;
  m.subcommand = std::move(subcommand);
  m.inputs = std::move(inputs);
  m.config = std::move(config);
  m.timestamp = iso8601_utc_now();
  return m;
}

nlohmann::json to_json(const RunManifest& m) {
  return nlohmann::json{{"subcommand", m.subcommand},
                        {"inputs", m.inputs},
                        {"config", m.config},
                        {"tool_version", m.tool_version},
                        {"timestamp", m.timestamp}};
}

}  // namespace cslx
