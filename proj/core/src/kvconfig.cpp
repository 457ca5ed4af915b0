#include "wedge/kvconfig.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wedge/errors.hpp"

namespace wedge {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) { return {}; }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
    KeyValueConfig config;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) { eol = text.size(); }
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) { line = line.substr(0, hash); }

        std::size_t cursor = 0;
        while (cursor < line.size()) {
            const auto start = line.find_first_not_of(" \t\r", cursor);
            if (start == std::string_view::npos) { break; }
            auto stop = line.find_first_of(" \t\r", start);
            if (stop == std::string_view::npos) { stop = line.size(); }
            const std::string_view token = line.substr(start, stop - start);
            cursor = stop;

            const auto eq = token.find('=');
            if (eq == std::string_view::npos || eq == 0) {
                throw ValidationError("malformed key-value token '" + std::string(token) + "'");
            }
            const std::string key(trim(token.substr(0, eq)));
            const std::string value(trim(token.substr(eq + 1)));
            if (config.entries_.count(key) != 0) { throw ValidationError("duplicate key '" + key + "'"); }
            config.entries_[key] = value;
        }
    }
    return config;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) { throw ValidationError("cannot open file '" + path + "'"); }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

const std::string& KeyValueConfig::get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) { throw ValidationError("missing key '" + key + "'"); }
    return it->second;
}

std::optional<std::string> KeyValueConfig::find(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) { return std::nullopt; }
    return it->second;
}

double KeyValueConfig::get_double(const std::string& key) const { return parse_double(get(key)); }

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long long KeyValueConfig::get_int(const std::string& key) const {
    const std::string& text = get(key);
    char* end = nullptr;
    errno = 0;
    const long long value = std::strtoll(text.c_str(), &end, 10);
    if (errno != 0 || end == text.c_str() || *end != '\0') {
        throw ValidationError("key '" + key + "': not an integer: '" + text + "'");
    }
    return value;
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::vector<double> KeyValueConfig::get_list(const std::string& key) const { return parse_double_list(get(key)); }

void KeyValueConfig::set(const std::string& key, std::string value) { entries_[key] = std::move(value); }

void KeyValueConfig::set(const std::string& key, double value) { entries_[key] = format_double(value); }

void KeyValueConfig::set_list(const std::string& key, const std::vector<double>& values) {
    std::string joined;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i != 0) { joined += ','; }
        joined += format_double(values[i]);
    }
    entries_[key] = joined;
}

std::string KeyValueConfig::serialize() const {
    std::string out;
    for (const auto& [key, value] : entries_) {
        out += key;
        out += '=';
        out += value;
        out += '\n';
    }
    return out;
}

std::string format_double(double value) {
    if (std::isinf(value)) { return value > 0 ? "inf" : "-inf"; }
    if (std::isnan(value)) { return "nan"; }
    char buffer[64];
    // Shortest representation that round-trips.
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
        if (std::strtod(buffer, nullptr) == value) { break; }
    }
    return buffer;
}

double parse_double(std::string_view text) {
    const std::string owned(trim(text));
    if (owned == "inf" || owned == "+inf") { return INFINITY; }
    if (owned == "-inf") { return -INFINITY; }
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(owned.c_str(), &end);
    if (owned.empty() || errno == ERANGE || end != owned.c_str() + owned.size() || std::isnan(value)) {
        throw ValidationError("not a decimal number: '" + owned + "'");
    }
    return value;
}

std::vector<double> parse_double_list(std::string_view text) {
    std::vector<double> values;
    if (trim(text).empty()) { return values; }
    std::size_t pos = 0;
    while (true) {
        const auto comma = text.find(',', pos);
        values.push_back(parse_double(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) { break; }
        pos = comma + 1;
    }
    return values;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const char c : data) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string hex64(std::uint64_t value) {
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(value));
    return buffer;
}

}  // namespace wedge
