#include "lrperc/starlat.hpp"

#include "lrperc/replicas.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lrperc {

namespace {

constexpr int kDim = 2;
constexpr std::int64_t kMaxBlockWidth = 1 << 20;

// Lattice line through staircase(m) and staircase(m+1): axis index and the
// offset of staircase(m+1) along it.
struct Line {
    Site origin;
    int axis; // 0 or 1
    std::int64_t target;
};

Line line_of(std::int64_t m)
{
    const bool even = m % 2 == 0;
    return {staircase(m), even ? 0 : 1, even ? 1 : -1};
}

Site on_line(const Line& line, std::int64_t t)
{
    Site s = line.origin;
    s[line.axis] += t;
    return s;
}

void check_window(std::int64_t window)
{
    if (window < 1) throw std::invalid_argument("window must be >= 1");
}

void check_params(const StarParams& params)
{
    if (!(params.eps > 0.0 && params.eps <= 1.0)) throw std::invalid_argument("eps must lie in (0,1]");
}

} // namespace

Site staircase(std::int64_t m)
{
    // ceil(m/2) steps along e_1 and floor(m/2) steps along -e_2, for any sign of m.
    const auto floor_half = (m >= 0) ? m / 2 : -((-m + 1) / 2);
    const auto ceil_half = m - floor_half;
    return Site{ceil_half, -floor_half, 0, 0};
}

std::int64_t choose_N(double eps, double delta)
{
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in (0,1]");
    if (!(delta > 0.0 && delta < 1.0 + 1e-12)) throw std::invalid_argument("delta must lie in (0,1]");
    const double bound = 1.0 - delta / 2.0;
    for (std::int64_t n = 1; n <= kMaxBlockWidth; ++n) {
        const double hit = 1.0 - std::pow(1.0 - eps, static_cast<double>(n));
        if (hit * hit > bound) return n;
    }
    throw std::invalid_argument("no block width satisfies the bound");
}

BlockParams make_block(double eps, double delta) { return {choose_N(eps, delta), delta}; }

bool check_h(const BondField& field, std::int64_t m, std::int64_t n, std::uint64_t k, std::int64_t window)
{
    check_window(window);
    const auto line = line_of(m);
    const auto reach = std::min<std::int64_t>(static_cast<std::int64_t>(k), 2 * window);
    const auto width = static_cast<std::size_t>(2 * window + 1);

    std::vector<std::uint8_t> seen(width, 0);
    std::vector<std::int64_t> stack{0};
    seen[static_cast<std::size_t>(window)] = 1;
    while (!stack.empty()) {
        const auto t = stack.back();
        stack.pop_back();
        const auto here = on_line(line, t);
        for (std::int64_t i = 1; i <= reach; ++i) {
            for (auto u : {t + i, t - i}) {
                if (u < -window || u > window) continue;
                auto& flag = seen[static_cast<std::size_t>(u + window)];
                if (flag) continue;
                if (!field.is_open(BondId::star_horizontal(here, on_line(line, u), kDim, n))) continue;
                if (u == line.target) return true;
                flag = 1;
                stack.push_back(u);
            }
        }
    }
    return false;
}

std::vector<BondId> h_bond_ids(std::int64_t m, std::int64_t n, std::uint64_t k, std::int64_t window)
{
    check_window(window);
    const auto line = line_of(m);
    const auto reach = std::min<std::int64_t>(static_cast<std::int64_t>(k), 2 * window);
    std::vector<BondId> ids;
    for (std::int64_t t = -window; t <= window; ++t)
        for (std::int64_t i = 1; i <= reach && t + i <= window; ++i)
            ids.push_back(BondId::star_horizontal(on_line(line, t), on_line(line, t + i), kDim, n));
    return ids;
}

EstimateWithCI estimate_h_prob(const StarParams& params, std::int64_t window, std::uint64_t seed,
                               std::uint64_t trials, unsigned threads, double z)
{
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    check_window(window);
    const auto base = params.field(seed);
    auto hits = run_replicas(trials, threads, [&](std::uint64_t r) -> std::uint8_t {
        return check_h(base.derive_replica(r), 0, 0, params.k, window) ? 1 : 0;
    });
    std::uint64_t s = 0;
    for (auto h : hits) s += h;
    return EstimateWithCI::from_counts(s, trials, z);
}

bool check_zeta(const BondField& field, std::int64_t a, std::int64_t n, const BlockParams& block,
                const StarParams& params, std::int64_t window)
{
    if ((a + n) % 2 != 0) throw std::invalid_argument("(a, n) must satisfy a + n even");
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    if (block.width < 1) throw std::invalid_argument("block width must be >= 1");
    const auto N = block.width;
    const auto first = a * N;

    for (int half = 0; half < 2; ++half) {
        bool up = false;
        for (auto m = first + half * N; m < first + (half + 1) * N && !up; ++m)
            up = field.is_open(BondId::star_vertical(staircase(m), kDim, n));
        if (!up) return false;
    }
    for (auto m = first; m < first + 2 * N; ++m)
        if (!check_h(field, m, n, params.k, window)) return false;
    return true;
}

std::vector<BondId> zeta_bond_ids(std::int64_t a, std::int64_t n, const BlockParams& block, std::uint64_t k,
                                  std::int64_t window)
{
    std::vector<BondId> ids;
    const auto first = a * block.width;
    for (auto m = first; m < first + 2 * block.width; ++m) {
        ids.push_back(BondId::star_vertical(staircase(m), kDim, n));
        auto h = h_bond_ids(m, n, k, window);
        ids.insert(ids.end(), h.begin(), h.end());
    }
    return ids;
}

bool block_path_survives(const BondField& field, const BlockParams& block, const StarParams& params,
                         std::int64_t window, std::int64_t horizon)
{
    if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
    std::vector<std::int64_t> front{0};
    std::vector<std::int64_t> next;
    for (std::int64_t i = 0; i < horizon; ++i) {
        next.clear();
        for (auto a : front) {
            if (!check_zeta(field, a, i, block, params, window)) continue;
            next.push_back(a - 1);
            next.push_back(a + 1);
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        front.swap(next);
        if (front.empty()) return false;
    }
    return true;
}

EstimateWithCI block_path_survival(const StarParams& params, const BlockParams& block, std::int64_t window,
                                   std::int64_t horizon, std::uint64_t seed, std::uint64_t replicas,
                                   unsigned threads, double z)
{
    if (replicas == 0) throw std::invalid_argument("replicas must be >= 1");
    check_params(params);
    check_window(window);
    const auto base = params.field(seed);
    auto hits = run_replicas(replicas, threads, [&](std::uint64_t r) -> std::uint8_t {
        return block_path_survives(base.derive_replica(r), block, params, window, horizon) ? 1 : 0;
    });
    std::uint64_t s = 0;
    for (auto h : hits) s += h;
    return EstimateWithCI::from_counts(s, replicas, z);
}

} // namespace lrperc
