#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lrperc {

// Whether a sequence holds bond probabilities (terms clamped to [0,1]) or
// Poisson rates (nonnegative, unbounded). Rates drive the contact process.
enum class Domain { probability, rate };

enum class SequenceKind { harmonic, powerlaw, constant, explicit_list };

/// A range-indexed law (p_i), i >= 1.
///
/// Textual grammar (see `parse`):
///   harmonic            min(1, 1/i)
///   powerlaw:<a>,<c>    c * i^-a   (clamped to 1 in the probability domain)
///   const:<v>           v for every i
///   list:<v1>,<v2>,...  v_i for i <= length, 0 beyond
class SequenceSpec {
public:
    static SequenceSpec harmonic(Domain domain = Domain::probability);
    static SequenceSpec powerlaw(double exponent, double scale, Domain domain = Domain::probability);
    static SequenceSpec constant(double value, Domain domain = Domain::probability);
    static SequenceSpec explicit_list(std::vector<double> values, Domain domain = Domain::probability);

    /// Strict parse; throws std::invalid_argument naming the offending token.
    static SequenceSpec parse(std::string_view text, Domain domain = Domain::probability);

    /// Term at range i >= 1. Throws std::invalid_argument for i == 0.
    double eval(std::uint64_t i) const;

    SequenceKind kind() const { return kind_; }
    Domain domain() const { return domain_; }

    /// Canonical text form; parse(to_string()) gives back an equal value.
    std::string to_string() const;

    friend bool operator==(const SequenceSpec&, const SequenceSpec&) = default;

private:
    SequenceSpec(SequenceKind kind, Domain domain) : kind_(kind), domain_(domain) {}

    SequenceKind kind_;
    Domain domain_;
    double exponent_ = 0.0;
    double scale_ = 0.0;
    double value_ = 0.0;
    std::vector<double> values_;
};

// Range-k truncation: term(i) = base(i) for 1 <= i <= k, 0 otherwise.
// term(0) is pinned to 0 so that zero-displacement factors are neutral.
class TruncatedSequence {
public:
    TruncatedSequence(SequenceSpec base, std::uint64_t k);

    double term(std::uint64_t i) const
    {
        if (i == 0 || i > k_) return 0.0;
        return i <= cache_.size() ? cache_[i - 1] : base_.eval(i);
    }

    std::uint64_t k() const { return k_; }
    const SequenceSpec& base() const { return base_; }

    /// Same base, different range.
    TruncatedSequence retruncated(std::uint64_t k) const { return {base_, k}; }

private:
    SequenceSpec base_;
    std::uint64_t k_;
    std::vector<double> cache_;
};

TruncatedSequence truncate(const SequenceSpec& spec, std::uint64_t k);

/// Sum of eval(spec, i) for i = 1..n. Requires n >= 1.
double partial_sum(const SequenceSpec& spec, std::uint64_t n);

} // namespace lrperc
