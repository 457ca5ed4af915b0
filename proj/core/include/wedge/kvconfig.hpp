#pragma once

// Plain-text key-value configuration: whitespace or newline separated
// `key=value` tokens, `#` starts a comment that runs to end of line.
// Values are stored verbatim; lists are comma separated.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wedge {

class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig parse(std::string_view text);
    static KeyValueConfig load(const std::string& path);

    [[nodiscard]] bool has(const std::string& key) const { return entries_.count(key) != 0; }
    [[nodiscard]] const std::string& get(const std::string& key) const;
    [[nodiscard]] std::optional<std::string> find(const std::string& key) const;

    [[nodiscard]] double get_double(const std::string& key) const;
    [[nodiscard]] double get_double(const std::string& key, double fallback) const;
    [[nodiscard]] long long get_int(const std::string& key) const;
    [[nodiscard]] long long get_int(const std::string& key, long long fallback) const;
    [[nodiscard]] std::vector<double> get_list(const std::string& key) const;

    void set(const std::string& key, std::string value);
    void set(const std::string& key, double value);
    void set_list(const std::string& key, const std::vector<double>& values);

    [[nodiscard]] const std::map<std::string, std::string>& entries() const { return entries_; }

    /// One `key=value` per line, keys sorted. Canonical, so it hashes stably.
    [[nodiscard]] std::string serialize() const;

private:
    std::map<std::string, std::string> entries_;
};

/// Round-trippable decimal text for a double ("inf"/"-inf" for infinities).
std::string format_double(double value);
double parse_double(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);

/// 64-bit FNV-1a, used to tag outputs with a config hash.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

}  // namespace wedge
