#pragma once

#include "lrperc/bondfield.hpp"
#include "lrperc/stats.hpp"

#include <cstdint>
#include <vector>

namespace lrperc {

// The two-dimensional mixed lattice: oriented nearest-neighbour vertical
// bonds open with probability eps, unoriented horizontal bonds of range i
// open with probability p_i (truncated at k).
struct StarParams {
    double eps = 0.5;
    SequenceSpec p = SequenceSpec::constant(0.0);
    std::uint64_t k = 1;

    BondField field(std::uint64_t seed) const { return BondField::star(seed, p, k, eps); }
};

struct BlockParams {
    std::int64_t width = 1; // N
    double delta = 0.5;     // failure budget
};

/// staircase(0) = 0; staircase(m+1) - staircase(m) is e_1 for even m, -e_2 for odd m.
Site staircase(std::int64_t m);

/// Smallest N >= 1 with (1 - (1-eps)^N)^2 > 1 - delta/2.
std::int64_t choose_N(double eps, double delta);

BlockParams make_block(double eps, double delta);

/// Whether staircase(m) and staircase(m+1) at height n are joined by open
/// horizontal bonds of their common line, using only sites within distance
/// `window` of staircase(m).
bool check_h(const BondField& field, std::int64_t m, std::int64_t n, std::uint64_t k, std::int64_t window);

/// Horizontal bonds check_h may read for (m, n).
std::vector<BondId> h_bond_ids(std::int64_t m, std::int64_t n, std::uint64_t k, std::int64_t window);

/// Replica r checks H at (0,0) in params.field(seed).derive_replica(r).
EstimateWithCI estimate_h_prob(const StarParams& params, std::int64_t window, std::uint64_t seed,
                               std::uint64_t trials, unsigned threads = 1, double z = kDefaultZ);

/// Block indicator at (a, n); requires a + n even.
bool check_zeta(const BondField& field, std::int64_t a, std::int64_t n, const BlockParams& block,
                const StarParams& params, std::int64_t window);

/// Every bond check_zeta may read for (a, n).
std::vector<BondId> zeta_bond_ids(std::int64_t a, std::int64_t n, const BlockParams& block, std::uint64_t k,
                                  std::int64_t window);

/// Whether blocks with zeta = 1 chain from a_0 = 0 through steps a_{i+1} = a_i +- 1
/// for i = 0..horizon-1.
bool block_path_survives(const BondField& field, const BlockParams& block, const StarParams& params,
                         std::int64_t window, std::int64_t horizon);

/// Replica r uses params.field(seed).derive_replica(r).
EstimateWithCI block_path_survival(const StarParams& params, const BlockParams& block, std::int64_t window,
                                   std::int64_t horizon, std::uint64_t seed, std::uint64_t replicas,
                                   unsigned threads = 1, double z = kDefaultZ);

} // namespace lrperc
