#include "lrperc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lrperc {

namespace {

std::string_view trim(std::string_view s)
{
    const auto ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(std::string_view field, const std::string& why)
{
    throw std::invalid_argument("config field '" + std::string(field) + "': " + why);
}

double to_double(std::string_view token, std::string_view field)
{
    token = trim(token);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v))
        bad(field, "not a number: '" + std::string(token) + "'");
    return v;
}

std::int64_t to_int(std::string_view token, std::string_view field)
{
    token = trim(token);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
        bad(field, "not an integer: '" + std::string(token) + "'");
    return v;
}

std::uint64_t to_uint(std::string_view token, std::string_view field)
{
    token = trim(token);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
        bad(field, "not a nonnegative integer: '" + std::string(token) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? s.size() - start : pos - start));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

} // namespace

Config Config::parse(std::string_view text, std::string_view origin)
{
    Config cfg;
    std::size_t line_no = 0;
    for (auto raw : split(text, '\n')) {
        ++line_no;
        auto hash = raw.find('#');
        auto line = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument(std::string(origin) + ":" + std::to_string(line_no) +
                                        ": expected 'key = value', got '" + std::string(line) + "'");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument(std::string(origin) + ":" + std::to_string(line_no) + ": empty key");
        cfg.set(std::string(key), std::string(value));
    }
    return cfg;
}

Config Config::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

const std::string& Config::get(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end()) bad(key, "missing");
    return it->second;
}

double Config::get_double(const std::string& key) const { return to_double(get(key), key); }
std::int64_t Config::get_int(const std::string& key) const { return to_int(get(key), key); }
std::uint64_t Config::get_uint(const std::string& key) const { return to_uint(get(key), key); }

bool Config::get_bool(const std::string& key) const
{
    const auto& v = get(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad(key, "not a boolean: '" + v + "'");
}

std::vector<double> parse_double_list(std::string_view text, std::string_view field)
{
    std::vector<double> out;
    for (auto item : split(text, ',')) {
        item = trim(item);
        if (item.find(':') != std::string_view::npos) {
            auto parts = split(item, ':');
            if (parts.size() != 3) bad(field, "range must be lo:hi:step, got '" + std::string(item) + "'");
            const double lo = to_double(parts[0], field);
            const double hi = to_double(parts[1], field);
            const double step = to_double(parts[2], field);
            if (!(step > 0.0) || hi < lo) bad(field, "empty or malformed range '" + std::string(item) + "'");
            const auto count = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9));
            for (std::int64_t i = 0; i <= count; ++i) {
                // Round to the step's grid so 0.6 + 3*0.01 prints as 0.63.
                const double v = lo + static_cast<double>(i) * step;
                out.push_back(std::round(v * 1e9) / 1e9);
            }
        } else {
            out.push_back(to_double(item, field));
        }
    }
    return out;
}

std::vector<double> Config::get_double_list(const std::string& key) const { return parse_double_list(get(key), key); }

std::vector<std::int64_t> Config::get_int_list(const std::string& key) const
{
    std::vector<std::int64_t> out;
    for (auto item : split(get(key), ',')) out.push_back(to_int(item, key));
    return out;
}

std::vector<std::uint64_t> Config::get_uint_list(const std::string& key) const
{
    std::vector<std::uint64_t> out;
    for (auto item : split(get(key), ',')) out.push_back(to_uint(item, key));
    return out;
}

std::string Config::canonical() const
{
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
}

std::uint64_t fnv1a64(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace lrperc
