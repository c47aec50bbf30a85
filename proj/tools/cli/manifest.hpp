#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cli/json.hpp"

namespace symm::cli {

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Provenance of one command run. Everything except `timestamp` feeds the
/// determinism contract: same manifest and same inputs, same numbers.
struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  std::map<std::string, std::string> config;  // sorted keys keep the hash stable
  std::optional<std::uint64_t> seed;
  std::string timestamp;

  /// FNV-1a over "key=value\n" lines of `config`, as 16 hex digits.
  std::string config_hash() const;
  nlohmann::ordered_json to_json() const;
};

/// UTC ISO-8601 time; honors SOURCE_DATE_EPOCH for reproducible runs.
std::string utc_timestamp();

std::string tool_version();

/// Writes `<path>.manifest.json`.
void write_sidecar(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace symm::cli
