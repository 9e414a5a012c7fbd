#include "nanodesign/text_manifest.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "nanodesign/errors.hpp"

namespace nanodesign {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

FormatError header_error(const std::string& what) {
    return FormatError(FormatError::Kind::Header, what);
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw ArgumentError("cannot format double");
    return std::string(buf, end);
}

double parse_double(const std::string& text) {
    const std::string t = trim(text);
    if (t == "inf") return INFINITY;
    double value = 0.0;
    auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || end != t.data() + t.size()) {
        throw header_error("not a number: '" + text + "'");
    }
    return value;
}

void TextManifest::set(const std::string& key, std::string value) {
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    entries_.emplace_back(key, std::move(value));
}

void TextManifest::set(const std::string& key, double value) { set(key, format_double(value)); }
void TextManifest::set(const std::string& key, std::int64_t value) {
    set(key, std::to_string(value));
}
void TextManifest::set(const std::string& key, std::uint64_t value) {
    set(key, std::to_string(value));
}

bool TextManifest::contains(const std::string& key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return true;
    }
    return false;
}

const std::string& TextManifest::get(const std::string& key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return v;
    }
    throw header_error("missing header key '" + key + "'");
}

double TextManifest::get_double(const std::string& key) const { return parse_double(get(key)); }

std::int64_t TextManifest::get_int(const std::string& key) const {
    const std::string& v = get(key);
    std::int64_t out = 0;
    auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || end != v.data() + v.size()) {
        throw header_error("key '" + key + "' is not an integer: '" + v + "'");
    }
    return out;
}

std::uint64_t TextManifest::get_uint(const std::string& key) const {
    const std::string& v = get(key);
    std::uint64_t out = 0;
    auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || end != v.data() + v.size()) {
        throw header_error("key '" + key + "' is not an unsigned integer: '" + v + "'");
    }
    return out;
}

void TextManifest::write(std::ostream& out) const {
    for (const auto& [k, v] : entries_) out << k << ": " << v << '\n';
}

TextManifest TextManifest::read(std::istream& in, const std::string& terminator) {
    TextManifest m;
    std::string line;
    bool terminated = terminator.empty();
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (!terminator.empty() && t == terminator) {
            terminated = true;
            break;
        }
        if (t.empty() || t.front() == '#') continue;
        const auto colon = t.find(':');
        if (colon == std::string::npos) throw header_error("malformed header line: '" + t + "'");
        m.set(trim(t.substr(0, colon)), trim(t.substr(colon + 1)));
    }
    if (!terminated) throw FormatError(FormatError::Kind::Length, "header not terminated");
    return m;
}

}  // namespace nanodesign
