#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace nanodesign {

void append_le_f64(std::string& buffer, double value);
void append_le_u32(std::string& buffer, std::uint32_t value);
double read_le_f64(const unsigned char* bytes);
std::uint32_t read_le_u32(const unsigned char* bytes);

std::uint32_t crc32(std::span<const unsigned char> bytes);
std::uint32_t crc32(const std::string& bytes);

/// Writes through a sibling temporary file and renames it into place, so a
/// failed writer never leaves a partial file at `path`.
void write_file_atomically(const std::filesystem::path& path,
                           const std::function<void(std::ostream&)>& writer);

std::string read_file(const std::filesystem::path& path);

}  // namespace nanodesign
