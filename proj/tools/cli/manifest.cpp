#include "cli/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>

#include "symm/io.hpp"

namespace symm::cli {

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string RunManifest::config_hash() const {
  std::string canonical;
  for (const auto& [key, value] : config) canonical += key + "=" + value + "\n";
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(canonical)));
  return buf;
}

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["inputs"] = inputs;
  j["config"] = config;
  j["config_hash"] = config_hash();
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
  j["version"] = tool_version();
  j["timestamp"] = timestamp;
  return j;
}

std::string utc_timestamp() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (end != epoch && *end == '\0') t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string tool_version() { return SYMM_VERSION; }

void write_sidecar(const RunManifest& manifest, const std::filesystem::path& path) {
  std::filesystem::path sidecar = path;
  sidecar += ".manifest.json";
  write_file(sidecar, manifest.to_json().dump(2) + "\n");
}

}  // namespace symm::cli
