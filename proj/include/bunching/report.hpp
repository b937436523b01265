// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bunching {

inline constexpr const char* kArtifactVersion = "1.0.0";

/// 12 significant digits, C locale, no trailing noise.
std::string format_significant(double value);

/// Comma-joined CSV line with an LF terminator.
std::string csv_line(const std::vector<std::string>& fields);

std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Reproduction manifest for one CLI invocation: re-running the recorded
/// command with the recorded parameters regenerates each output file with the
/// recorded content hash.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  std::string version = kArtifactVersion;
  std::vector<std::string> outputs;
  std::map<std::string, std::string> checksums;
};

std::string manifest_to_json(const RunManifest& manifest);

}  // namespace bunching
