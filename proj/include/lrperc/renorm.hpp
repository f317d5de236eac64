#pragma once

#include "lrperc/bondfield.hpp"
#include "lrperc/oriented.hpp"
#include "lrperc/stats.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace lrperc {

// Point (m, n) of the renormalised lattice Z^2_+.
struct RenormPoint {
    std::int64_t m = 0;
    std::int64_t n = 0;
    friend bool operator==(const RenormPoint&, const RenormPoint&) = default;
};

/// (m1,n1) < (m2,n2) iff n1 < n2, or n1 == n2 and m1 < m2.
constexpr bool prec(const RenormPoint& a, const RenormPoint& b)
{
    return a.n < b.n || (a.n == b.n && a.m < b.m);
}

struct PrecLess {
    constexpr bool operator()(const RenormPoint& a, const RenormPoint& b) const { return prec(a, b); }
};

using RenormSet = std::set<RenormPoint, PrecLess>;

/// {(m,n) in Z^2_+ \ X : (m,n-1) in X or (m-1,n-1) in X}
RenormSet exterior_boundary(const RenormSet& x);

struct BifurcationParams {
    std::uint64_t k = 0;
    std::int64_t beta = 1; // vertical displacement along e_2
    SequenceSpec p = SequenceSpec::constant(0.0);
    SequenceSpec q = SequenceSpec::constant(0.0);
};

/// Throws std::invalid_argument unless beta >= 1 and q_beta > 0.
void validate(const BifurcationParams& params);

/// Exact probability of a bifurcation event under the k-truncated measure.
double gamma_k(const BifurcationParams& params);

/// gamma_1, ..., gamma_kmax.
std::vector<double> gamma_sweep(const BifurcationParams& params, std::uint64_t kmax);

/// Smallest k <= kmax with gamma_k > threshold, if any.
std::optional<std::uint64_t> minimal_k_above(const BifurcationParams& params, double threshold, std::uint64_t kmax);

struct BifurcationRecord {
    bool occurred = false;
    std::int64_t a = 0;      // first leg along e_1
    std::int64_t a_next = 0; // second leg along e_1 (the other branch goes beta along e_2)
};

/// Scans legs in the order 1, -1, 2, -2, ..., k, -k; first leg outermost.
BifurcationRecord check_bifurcation(const BondField& field, const GVertex& origin, const BifurcationParams& params);

/// Fraction of replicas with a bifurcation at the origin. Replica r uses
/// BondField::oriented(seed, p, q, k).derive_replica(r).
EstimateWithCI estimate_bifurcation_frequency(const BifurcationParams& params, std::uint64_t seed,
                                              std::uint64_t trials, unsigned threads = 1, double z = kDefaultZ);

// A vertex ((a, m*beta), 2n) of G known to be reachable from the origin.
// Produced by the bifurcation at `parent`; legs reconstruct the two steps.
struct CertifiedSite {
    RenormPoint cell;
    std::int64_t a = 0;
    std::int32_t parent = -1;
    std::int64_t first_leg = 0;
    bool vertical_second = false; // second step beta*e_2, else second_leg*e_1
    std::int64_t second_leg = 0;
};

struct Examination {
    RenormPoint cell;
    bool red = false;
    std::int32_t site = -1; // certified site whose bifurcation made the cell red
    BifurcationRecord bifurcation;
    std::uint32_t candidates = 0; // certified sites available on the cell's line
};

struct RedState {
    RenormSet accepted; // A
    RenormSet rejected; // B
    std::optional<RenormPoint> current;
    std::uint64_t step = 0;
};

struct RedRun {
    RedState state;
    std::vector<Examination> trace;
    std::vector<CertifiedSite> certified;
    bool truncated = false; // max_steps hit with a nonempty frontier

    std::size_t cluster_size() const { return state.accepted.size(); }
};

GVertex certified_vertex(const CertifiedSite& site, std::int64_t beta);

/// Open path from (0,0) to the certified site, one vertex per generation.
std::vector<GVertex> certified_path(const RedRun& run, std::size_t site_index, std::int64_t beta);

/// The dynamic red cluster. Cells are examined in increasing order; a cell is
/// red when some certified site on its line carries a bifurcation, and each
/// such bifurcation certifies one site on each of the two child cells.
RedRun explore_red_cluster(const BondField& field, const BifurcationParams& params, std::uint64_t max_steps = 100000);

struct DominationReport {
    std::uint64_t runs = 0;
    std::uint64_t truncated_runs = 0;
    double gamma = 0.0;
    EstimateWithCI red_frequency; // pooled over every examination, z = 3
    bool violation = false;       // red_frequency.hi < gamma
    double mean_cluster_size = 0.0;
};

/// Run r explores field.derive_replica(r).
DominationReport domination_check(const BondField& field, const BifurcationParams& params, std::uint64_t samples,
                                  std::uint64_t max_steps = 100000, unsigned threads = 1);

// Oriented site percolation on the cone {0 <= m <= n}, children (m,n+1) and
// (m+1,n+1). Site (m,n) is open iff field.uniform(cone_site(m,n)) < gamma.
struct ConeCluster {
    std::vector<std::uint64_t> front_sizes; // generations 0..horizon
    std::vector<RenormPoint> reached;       // row by row, m increasing
    bool survived = false;
};

struct ConeOptions {
    bool origin_always_open = true;
    bool record_reached = true;
};

ConeCluster site_perc_cone(double gamma, std::int64_t horizon, const BondField& field, ConeOptions options = {});

/// Survival counts at each horizon (ascending) from one sweep per replica.
std::vector<EstimateWithCI> site_perc_survival(double gamma, std::span<const std::int64_t> horizons,
                                               std::uint64_t seed, std::uint64_t replicas, unsigned threads = 1,
                                               double z = kDefaultZ);

/// Given survival P at horizons T, 2T, 4T for ascending gammas, locates where
/// the ratio curves P(2T)/P(T) and P(4T)/P(2T) cross, by linear interpolation
/// of their difference. Returns nullopt when there is no sign change.
std::optional<double> ratio_crossing(std::span<const double> gammas, std::span<const double> p_t,
                                     std::span<const double> p_2t, std::span<const double> p_4t);

} // namespace lrperc
