#include "lrperc/oriented.hpp"

#include "lrperc/counter_rng.hpp"
#include "lrperc/replicas.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace lrperc {

std::size_t GVertexHash::operator()(const GVertex& v) const
{
    rng::Hasher h(0);
    for (auto c : v.x) h.absorb_signed(c);
    return static_cast<std::size_t>(h.absorb_signed(v.n).finish());
}

namespace {

void validate(const ExplorationParams& params)
{
    if (params.dim < 1 || params.dim > kMaxDim)
        throw std::invalid_argument("dim must lie in [1, " + std::to_string(kMaxDim) + "]");
    if (params.horizon < 0) throw std::invalid_argument("horizon must be >= 0");
    if (params.window < 0) throw std::invalid_argument("window must be >= 0");
}

// Calls visit(w) for every open out-neighbour w of v inside the window.
template <class Visit>
void for_each_out_neighbor(const BondField& field, const GVertex& v, const ExplorationParams& params, Visit&& visit)
{
    const auto k = static_cast<std::int64_t>(params.k);
    for (int axis = 1; axis <= params.dim; ++axis) {
        const auto c = v.x[axis - 1];
        // Only displacements landing inside the window.
        const auto lo = std::max(-k, -params.window - c);
        const auto hi = std::min(k, params.window - c);
        for (auto i = lo; i <= hi; ++i) {
            if (i == 0) continue;
            if (!field.is_open(BondId::oriented(v.x, params.dim, v.n, axis, i))) continue;
            GVertex w{v.x, v.n + 1};
            w.x[axis - 1] += i;
            visit(w);
        }
    }
}

} // namespace

bool inside_window(const Site& x, const ExplorationParams& params)
{
    for (int j = 0; j < params.dim; ++j)
        if (x[j] < -params.window || x[j] > params.window) return false;
    return true;
}

std::vector<GVertex> out_neighbors(const BondField& field, const GVertex& v, const ExplorationParams& params)
{
    validate(params);
    std::vector<GVertex> out;
    for_each_out_neighbor(field, v, params, [&](const GVertex& w) { out.push_back(w); });
    return out;
}

ExplorationResult explore(const BondField& field, const ExplorationParams& params, bool record_cluster)
{
    validate(params);
    ExplorationResult result;
    result.front_sizes.assign(static_cast<std::size_t>(params.horizon) + 1, 0);

    std::vector<Site> front{Site{}};
    std::vector<Site> next;
    for (std::int64_t n = 0;; ++n) {
        result.front_sizes[static_cast<std::size_t>(n)] = front.size();
        result.total_visited += front.size();
        if (record_cluster)
            for (const auto& x : front) result.cluster.push_back({x, n});
        if (n == params.horizon || front.empty()) break;

        next.clear();
        for (const auto& x : front)
            for_each_out_neighbor(field, GVertex{x, n}, params, [&](const GVertex& w) { next.push_back(w.x); });
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        front.swap(next);
    }
    result.survived = result.front_sizes.back() > 0;
    if (record_cluster) std::sort(result.cluster.begin(), result.cluster.end());
    return result;
}

bool reaches_horizon(const BondField& field, const ExplorationParams& params)
{
    validate(params);
    if (params.horizon == 0) return true;

    std::unordered_set<GVertex, GVertexHash> seen;
    std::vector<GVertex> stack{GVertex{}};
    seen.insert(stack.back());
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        bool done = false;
        for_each_out_neighbor(field, v, params, [&](const GVertex& w) {
            if (done) return;
            if (w.n == params.horizon) {
                done = true;
                return;
            }
            if (seen.insert(w).second) stack.push_back(w);
        });
        if (done) return true;
    }
    return false;
}

EstimateWithCI estimate_survival(const SequenceSpec& p, const SequenceSpec& q, const ExplorationParams& params,
                                 std::uint64_t seed, std::uint64_t replicas, unsigned threads, double z)
{
    if (replicas == 0) throw std::invalid_argument("replicas must be >= 1");
    validate(params);
    const auto base = BondField::oriented(seed, p, q, params.k);
    auto hits = run_replicas(replicas, threads, [&](std::uint64_t r) -> std::uint8_t {
        return reaches_horizon(base.derive_replica(r), params) ? 1 : 0;
    });
    std::uint64_t successes = 0;
    for (auto h : hits) successes += h;
    return EstimateWithCI::from_counts(successes, replicas, z);
}

} // namespace lrperc
