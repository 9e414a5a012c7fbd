#include "nanodesign/binary_io.hpp"

#include <bit>
#include <fstream>
#include <sstream>
#include <zlib.h>

#include "nanodesign/errors.hpp"

namespace nanodesign {

void append_le_f64(std::string& buffer, double value) {
    const auto bits = std::bit_cast<std::uint64_t>(value);
    for (int i = 0; i < 8; ++i) buffer.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

void append_le_u32(std::string& buffer, std::uint32_t value) {
    for (int i = 0; i < 4; ++i) buffer.push_back(static_cast<char>((value >> (8 * i)) & 0xffu));
}

double read_le_f64(const unsigned char* bytes) {
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | bytes[i];
    return std::bit_cast<double>(bits);
}

std::uint32_t read_le_u32(const unsigned char* bytes) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes[i];
    return v;
}

std::uint32_t crc32(std::span<const unsigned char> bytes) {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    std::size_t offset = 0;
    while (offset < bytes.size()) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - offset, 1u << 30));
        crc = ::crc32(crc, bytes.data() + offset, chunk);
        offset += chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

std::uint32_t crc32(const std::string& bytes) {
    return crc32(std::span(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()));
}

void write_file_atomically(const std::filesystem::path& path,
                           const std::function<void(std::ostream&)>& writer) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    try {
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw FormatError(FormatError::Kind::Io, "cannot open " + tmp.string());
            writer(out);
            out.flush();
            if (!out) throw FormatError(FormatError::Kind::Io, "write failed: " + tmp.string());
        }
        std::filesystem::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw;
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(FormatError::Kind::Io, "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

}  // namespace nanodesign
