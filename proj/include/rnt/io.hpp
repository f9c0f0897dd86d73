#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace rnt::io {

// Throws MissingArtifact if `path` does not exist.
void require_file(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Hex FNV-1a 64 of the file bytes; identifies inputs in manifests.
std::string file_digest(const std::filesystem::path& path);

// Shortest round-trip decimal form of a double, for stable text outputs.
std::string format_double(double value);

}  // namespace rnt::io
