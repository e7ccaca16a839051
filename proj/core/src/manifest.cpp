#include "spin7lab/manifest.hpp"

#include <fstream>
#include <stdexcept>

namespace spin7lab::report {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

namespace {

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace

std::string RunManifest::to_string() const {
  std::string out;
  out += "artifact: ";
  out += artifact_version;
  out += '\n';
  out += "command: " + command + '\n';
  out += "config:\n";
  for (const auto& line : config_echo) out += "  " + line + '\n';
  if (!notes.empty()) {
    out += "notes:\n";
    for (const auto& n : notes) out += "  " + n + '\n';
  }
  out += "outputs:\n";
  for (const auto& e : outputs) {
    out += "  " + e.filename + "  rows=" + std::to_string(e.row_count) +
           "  fnv1a64=" + hex64(e.checksum) + '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace spin7lab::report
