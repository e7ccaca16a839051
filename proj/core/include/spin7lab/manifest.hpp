#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace spin7lab::report {

inline constexpr std::string_view artifact_version = "spin7lab 0.1.0";

/// FNV-1a 64-bit checksum of the exact bytes emitted.
std::uint64_t fnv1a64(std::string_view bytes);

struct ManifestEntry {
  std::string filename;
  std::size_t row_count;
  std::uint64_t checksum;
};

/// One plain-text manifest per run: the command, the fully resolved
/// configuration, and a checksummed list of output files.
struct RunManifest {
  std::string command;
  std::vector<std::string> config_echo;  // "key = value" lines
  std::vector<std::string> notes;
  std::vector<ManifestEntry> outputs;

  [[nodiscard]] std::string to_string() const;
};

/// Single-writer file emission: write to a temporary sibling, then rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace spin7lab::report
