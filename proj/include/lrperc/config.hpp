#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lrperc {

/// Flat `key = value` configuration. Blank lines and text after `#` are
/// ignored; later assignments override earlier ones. Typed getters throw
/// std::invalid_argument naming the offending field.
class Config {
public:
    static Config parse(std::string_view text, std::string_view origin = "config");
    static Config load(const std::string& path);

    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    void set_default(const std::string& key, std::string value) { values_.try_emplace(key, std::move(value)); }
    void erase(const std::string& key) { values_.erase(key); }
    bool has(const std::string& key) const { return values_.contains(key); }

    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;
    std::uint64_t get_uint(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;
    std::vector<std::int64_t> get_int_list(const std::string& key) const;
    std::vector<std::uint64_t> get_uint_list(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

    /// One `key = value` line per entry, keys sorted.
    std::string canonical() const;

private:
    std::map<std::string, std::string> values_;
};

/// Accepts "5,10,20" and inclusive ranges "lo:hi:step", e.g. "0.60:0.80:0.01".
std::vector<double> parse_double_list(std::string_view text, std::string_view field);

std::uint64_t fnv1a64(std::string_view text);

} // namespace lrperc
