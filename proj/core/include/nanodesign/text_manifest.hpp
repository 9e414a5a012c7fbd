#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace nanodesign {

/// Ordered `key: value` block used as the human-readable header of the
/// dataset and model files, and as the CLI config format.
class TextManifest {
public:
    void set(const std::string& key, std::string value);
    void set(const std::string& key, double value);
    void set(const std::string& key, std::int64_t value);
    void set(const std::string& key, std::uint64_t value);
    void set(const std::string& key, int value) { set(key, static_cast<std::int64_t>(value)); }
    void set(const std::string& key, const char* value) { set(key, std::string(value)); }

    bool contains(const std::string& key) const;
    /// FormatError(Header) when absent or unparsable.
    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;
    std::uint64_t get_uint(const std::string& key) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    /// Writes `key: value` lines.
    void write(std::ostream& out) const;
    /// Reads lines until `terminator` (exclusive) or end of stream when empty.
    /// Blank lines and `#` comments are skipped.
    static TextManifest read(std::istream& in, const std::string& terminator = "");

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);
double parse_double(const std::string& text);

}  // namespace nanodesign
