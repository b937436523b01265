// SPDX-License-Identifier: Apache-2.0
#include "bunching/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bunching {

std::string format_significant(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) line += ',';
    line += fields[i];
  }
  line += '\n';
  return line;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string fnv1a64_hex(std::string_view data) {
  char buffer[24];
  std::snprintf(buffer, sizeof(buffer), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(data)));
  return buffer;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string manifest_to_json(const RunManifest& manifest) {
  nlohmann::json doc;
  doc["command"] = manifest.command;
  doc["parameters"] = manifest.parameters;
  doc["seed"] = manifest.seed;
  doc["version"] = manifest.version;
  doc["outputs"] = manifest.outputs;
  doc["checksums"] = manifest.checksums;
  return doc.dump(2) + "\n";
}

}  // namespace bunching
