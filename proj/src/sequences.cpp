#include "lrperc/sequences.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace lrperc {

namespace {

constexpr std::uint64_t kCachedTerms = 1u << 20;

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

double parse_number(std::string_view token, std::string_view whole)
{
    double v = 0.0;
    auto first = token.data();
    auto last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (token.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw std::invalid_argument("sequence " + quoted(whole) + ": bad number " + quoted(token));
    }
    return v;
}

std::vector<std::string_view> split_commas(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(',', start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? s.size() - start : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

void check_term(double v, Domain domain, std::string_view what)
{
    bool ok = domain == Domain::probability ? (v >= 0.0 && v <= 1.0) : (v >= 0.0);
    if (!ok) {
        throw std::invalid_argument(std::string(what) + " out of range for " +
                                    (domain == Domain::probability ? "a probability" : "a rate"));
    }
}

std::string format_number(double v)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace

SequenceSpec SequenceSpec::harmonic(Domain domain) { return {SequenceKind::harmonic, domain}; }

SequenceSpec SequenceSpec::powerlaw(double exponent, double scale, Domain domain)
{
    if (!(exponent > 0.0) || !std::isfinite(exponent))
        throw std::invalid_argument("powerlaw exponent must be > 0");
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw std::invalid_argument("powerlaw scale must be > 0");
    SequenceSpec s{SequenceKind::powerlaw, domain};
    s.exponent_ = exponent;
    s.scale_ = scale;
    return s;
}

SequenceSpec SequenceSpec::constant(double value, Domain domain)
{
    check_term(value, domain, "constant value");
    SequenceSpec s{SequenceKind::constant, domain};
    s.value_ = value;
    return s;
}

SequenceSpec SequenceSpec::explicit_list(std::vector<double> values, Domain domain)
{
    if (values.empty()) throw std::invalid_argument("explicit list must not be empty");
    for (double v : values) check_term(v, domain, "list value");
    SequenceSpec s{SequenceKind::explicit_list, domain};
    s.values_ = std::move(values);
    return s;
}

SequenceSpec SequenceSpec::parse(std::string_view text, Domain domain)
{
    if (text == "harmonic") return harmonic(domain);

    auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw std::invalid_argument("sequence " + quoted(text) + ": unknown kind " + quoted(text));
    auto head = text.substr(0, colon);
    auto args = split_commas(text.substr(colon + 1));

    try {
        if (head == "powerlaw") {
            if (args.size() != 2)
                throw std::invalid_argument("sequence " + quoted(text) +
                                            ": powerlaw takes <alpha>,<c>, got " + quoted(text.substr(colon + 1)));
            return powerlaw(parse_number(args[0], text), parse_number(args[1], text), domain);
        }
        if (head == "const") {
            if (args.size() != 1)
                throw std::invalid_argument("sequence " + quoted(text) + ": const takes one value, got " +
                                            quoted(text.substr(colon + 1)));
            return constant(parse_number(args[0], text), domain);
        }
        if (head == "list") {
            std::vector<double> values;
            for (auto a : args) {
                double v = parse_number(a, text);
                try {
                    check_term(v, domain, "list value");
                } catch (const std::invalid_argument& e) {
                    throw std::invalid_argument("sequence " + quoted(text) + ": " + e.what() + " " + quoted(a));
                }
                values.push_back(v);
            }
            return explicit_list(std::move(values), domain);
        }
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        if (msg.rfind("sequence ", 0) == 0) throw;
        throw std::invalid_argument("sequence " + quoted(text) + ": " + msg);
    }
    throw std::invalid_argument("sequence " + quoted(text) + ": unknown kind " + quoted(head));
}

double SequenceSpec::eval(std::uint64_t i) const
{
    if (i == 0) throw std::invalid_argument("sequence index must be >= 1");
    double v = 0.0;
    switch (kind_) {
    case SequenceKind::harmonic:
        v = 1.0 / static_cast<double>(i);
        break;
    case SequenceKind::powerlaw:
        v = scale_ * std::pow(static_cast<double>(i), -exponent_);
        break;
    case SequenceKind::constant:
        v = value_;
        break;
    case SequenceKind::explicit_list:
        v = i <= values_.size() ? values_[i - 1] : 0.0;
        break;
    }
    return domain_ == Domain::probability ? std::min(1.0, v) : v;
}

std::string SequenceSpec::to_string() const
{
    switch (kind_) {
    case SequenceKind::harmonic:
        return "harmonic";
    case SequenceKind::powerlaw:
        return "powerlaw:" + format_number(exponent_) + "," + format_number(scale_);
    case SequenceKind::constant:
        return "const:" + format_number(value_);
    case SequenceKind::explicit_list: {
        std::string s = "list:";
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (i) s += ",";
            s += format_number(values_[i]);
        }
        return s;
    }
    }
    return {};
}

TruncatedSequence::TruncatedSequence(SequenceSpec base, std::uint64_t k)
    : base_(std::move(base)), k_(k)
{
    auto n = std::min(k_, kCachedTerms);
    cache_.reserve(n);
    for (std::uint64_t i = 1; i <= n; ++i) cache_.push_back(base_.eval(i));
}

TruncatedSequence truncate(const SequenceSpec& spec, std::uint64_t k) { return {spec, k}; }

double partial_sum(const SequenceSpec& spec, std::uint64_t n)
{
    if (n == 0) throw std::invalid_argument("partial_sum requires n >= 1");
    // Smallest terms first keeps rounding error down for decaying sequences.
    double sum = 0.0;
    for (std::uint64_t i = n; i >= 1; --i) sum += spec.eval(i);
    return sum;
}

} // namespace lrperc
