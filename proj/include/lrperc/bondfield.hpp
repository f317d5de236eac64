#pragma once

#include "lrperc/counter_rng.hpp"
#include "lrperc/sequences.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace lrperc {

inline constexpr int kMaxDim = 4;

// Spatial coordinate in Z^d; entries at index >= d are kept at zero.
using Site = std::array<std::int64_t, kMaxDim>;

enum class GraphTag : std::uint8_t {
    g_oriented = 1,       // <(x,n),(x+i e_m,n+1)>
    gstar_horizontal = 2, // unoriented <(x,n),(x+i e_m,n)>
    gstar_vertical = 3,   // <(x,n),(x,n+1)>
    site = 4,             // site (m,n) of an oriented site-percolation cone
    contact_death = 5,    // death process D^x
    contact_arrow = 6,    // arrow process B^(x, x+i e_m)
};

/// Identity of one random variable in the infinite product space.
///
/// Encoded for hashing as the word sequence
///   tag, dim, x[0], ..., x[dim-1], n, axis, displacement
/// which is injective since dim fixes the length. Axes are 1-based; 0 marks
/// objects without an axis (vertical bonds, sites, deaths).
struct BondId {
    GraphTag tag = GraphTag::g_oriented;
    int dim = 1;
    Site x{};
    std::int64_t n = 0;
    int axis = 0;
    std::int64_t displacement = 0;

    static BondId oriented(const Site& tail, int dim, std::int64_t n, int axis, std::int64_t displacement);

    // Canonical form: tail is the lexicographically smaller endpoint and the
    // displacement is positive, so <u,v> and <v,u> coincide. u and v must
    // differ along exactly one axis.
    static BondId star_horizontal(const Site& u, const Site& v, int dim, std::int64_t n);
    static BondId star_vertical(const Site& x, int dim, std::int64_t n);
    static BondId cone_site(std::int64_t m, std::int64_t n);
    static BondId death(const Site& x, int dim);
    static BondId arrow(const Site& from, int dim, int axis, std::int64_t displacement);

    std::uint64_t range() const
    {
        return displacement < 0 ? static_cast<std::uint64_t>(-displacement)
                                : static_cast<std::uint64_t>(displacement);
    }

    std::uint64_t hash(std::uint64_t stream_key) const;

    friend bool operator==(const BondId&, const BondId&) = default;
};

struct BondIdHash {
    std::size_t operator()(const BondId& b) const { return static_cast<std::size_t>(b.hash(0)); }
};

/// Lazily evaluated Bernoulli configuration over every BondId.
///
/// Probabilities by tag:
///   g_oriented        axis_laws[min(axis, size) - 1].term(|i|)
///   gstar_horizontal  axis_laws[0].term(|i|)
///   gstar_vertical    vertical_probability
///   site              site_probability
/// A bond is open iff uniform(bond) < probability(bond). The uniform does not
/// depend on the laws, so fields that differ only in truncation are coupled.
class BondField {
public:
    BondField(std::uint64_t seed, std::vector<TruncatedSequence> axis_laws,
              double vertical_probability = 0.0, double site_probability = 0.0);

    /// Field for the two-sequence model on G: p on axis 1, q on axes >= 2.
    static BondField oriented(std::uint64_t seed, const SequenceSpec& p, const SequenceSpec& q, std::uint64_t k);
    /// Field for G*: horizontal law p truncated at k, vertical probability eps.
    static BondField star(std::uint64_t seed, const SequenceSpec& p, std::uint64_t k, double eps);
    /// Field for oriented site percolation with parameter gamma.
    static BondField sites(std::uint64_t seed, double gamma);

    double uniform(const BondId& bond) const { return rng::to_unit(bond.hash(key_)); }
    double probability(const BondId& bond) const;
    bool is_open(const BondId& bond) const { return uniform(bond) < probability(bond); }

    /// Independent stream, deterministic in (parent stream, replica).
    BondField derive_replica(std::uint64_t replica) const;

    /// Same stream with every axis law re-truncated at k.
    BondField retruncated(std::uint64_t k) const;

    std::uint64_t stream_key() const { return key_; }
    const std::vector<TruncatedSequence>& axis_laws() const { return laws_; }
    double vertical_probability() const { return vertical_; }
    double site_probability() const { return site_; }

private:
    std::uint64_t key_;
    std::vector<TruncatedSequence> laws_;
    double vertical_;
    double site_;
};

} // namespace lrperc
