#pragma once

#include "lrperc/bondfield.hpp"
#include "lrperc/stats.hpp"

#include <compare>
#include <cstdint>
#include <vector>

namespace lrperc {

// Vertex (x, n) of the oriented graph Z^d x Z_+.
struct GVertex {
    Site x{};
    std::int64_t n = 0;

    friend bool operator==(const GVertex&, const GVertex&) = default;
    friend auto operator<=>(const GVertex&, const GVertex&) = default;
};

struct GVertexHash {
    std::size_t operator()(const GVertex& v) const;
};

struct ExplorationParams {
    int dim = 2;
    std::uint64_t k = 0;      // bonds of range 1..k are enumerated
    std::int64_t horizon = 0; // generations simulated
    std::int64_t window = 0;  // sup-norm half-width of the absorbing box
};

struct ExplorationResult {
    bool survived = false;
    std::vector<std::uint64_t> front_sizes; // generations 0..horizon
    std::uint64_t total_visited = 0;
    std::vector<GVertex> cluster; // sorted; filled only when requested
};

bool inside_window(const Site& x, const ExplorationParams& params);

/// Open out-neighbours of v inside the window, ordered by axis then displacement.
std::vector<GVertex> out_neighbors(const BondField& field, const GVertex& v, const ExplorationParams& params);

/// Generation-by-generation sweep from (0,0).
ExplorationResult explore(const BondField& field, const ExplorationParams& params, bool record_cluster = false);

/// Same survival indicator as explore(), found depth-first; it stops at the
/// first vertex of generation `horizon` instead of materialising whole fronts.
bool reaches_horizon(const BondField& field, const ExplorationParams& params);

/// Fraction of replicas whose cluster reaches the horizon. Replica r uses
/// BondField::oriented(seed, p, q, k).derive_replica(r).
EstimateWithCI estimate_survival(const SequenceSpec& p, const SequenceSpec& q, const ExplorationParams& params,
                                 std::uint64_t seed, std::uint64_t replicas, unsigned threads = 1,
                                 double z = kDefaultZ);

} // namespace lrperc
