#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance binary. Nothing here calls the library's algorithms; only the
// plain data types are reused.

#include "lrperc/bondfield.hpp"
#include "lrperc/contact.hpp"
#include "lrperc/oriented.hpp"
#include "lrperc/renorm.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

// 1 - prod over |a| <= k of [1 - p_|a| q_beta (1 - prod over |a'| <= k of (1 - p_|a'|))]
inline double gamma_direct(const std::vector<double>& p, double q_beta)
{
    double inner = 1.0;
    for (double v : p) inner *= (1.0 - v) * (1.0 - v);
    double miss = 1.0;
    for (double v : p) {
        const double f = 1.0 - v * q_beta * (1.0 - inner);
        miss *= f * f;
    }
    return 1.0 - miss;
}

// exp(-d) * (1 - prod_i (1 - exp(-2d)(1 - exp(-lambda_i d/2))(1 - exp(-lambda_b d/2)))^2)
inline double f_direct(const std::vector<double>& lambda, double lambda_b, double d)
{
    double miss = 1.0;
    for (double l : lambda) {
        const double f = 1.0 - std::exp(-2.0 * d) * (1.0 - std::exp(-l * d / 2.0)) * (1.0 - std::exp(-lambda_b * d / 2.0));
        miss *= f * f;
    }
    return std::exp(-d) * (1.0 - miss);
}

// Exact survival to row T on the cone {0 <= m <= n <= T}, origin always open,
// by enumerating every open/closed assignment of the cone sites.
struct ConeExhaustive {
    double probability = 0.0;
    std::uint64_t configurations = 0;
    std::uint64_t surviving = 0; // count among configurations, origin bit included
};

inline ConeExhaustive cone_exhaustive(double gamma, int T)
{
    std::vector<std::pair<int, int>> sites;
    for (int n = 0; n <= T; ++n)
        for (int m = 0; m <= n; ++m) sites.emplace_back(m, n);
    const auto count = sites.size();
    ConeExhaustive out;
    out.configurations = std::uint64_t{1} << count;
    for (std::uint64_t mask = 0; mask < out.configurations; ++mask) {
        double weight = 1.0;
        std::map<std::pair<int, int>, bool> open;
        for (std::size_t i = 0; i < count; ++i) {
            const bool o = (mask >> i) & 1;
            open[sites[i]] = o;
            weight *= o ? gamma : 1.0 - gamma;
        }
        open[{0, 0}] = true;
        std::set<std::pair<int, int>> reached{{0, 0}};
        for (int n = 1; n <= T; ++n)
            for (int m = 0; m <= n; ++m)
                if (open[{m, n}] && (reached.count({m, n - 1}) || reached.count({m - 1, n - 1})))
                    reached.insert({m, n});
        bool alive = false;
        for (int m = 0; m <= T; ++m) alive = alive || reached.count({m, T});
        if (alive) ++out.surviving;
        if (alive) out.probability += weight;
    }
    return out;
}

// Exact probability that 0 and +1 are joined by open bonds among positions
// -W..W of a line, bond of range i open with probability p[i-1] (i <= k).
inline double h_exhaustive(const std::vector<double>& p, std::uint64_t k, int W, std::uint64_t* configurations = nullptr)
{
    struct Bond {
        int a, b;
        double prob;
    };
    std::vector<Bond> bonds;
    for (int a = -W; a <= W; ++a)
        for (int b = a + 1; b <= W; ++b) {
            const auto r = static_cast<std::uint64_t>(b - a);
            if (r > k || r > p.size()) continue;
            bonds.push_back({a, b, p[r - 1]});
        }
    const auto total = std::uint64_t{1} << bonds.size();
    if (configurations) *configurations = total;
    double prob = 0.0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        std::vector<int> parent(static_cast<std::size_t>(2 * W + 1));
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
        double w = 1.0;
        for (std::size_t i = 0; i < bonds.size(); ++i) {
            const bool o = (mask >> i) & 1;
            w *= o ? bonds[i].prob : 1.0 - bonds[i].prob;
            if (o) parent[find(bonds[i].a + W)] = find(bonds[i].b + W);
        }
        if (find(W) == find(W + 1)) prob += w;
    }
    return prob;
}

// Path search over the marks of a timeline. At the start point deaths at the
// start time count and arrows there do not fire; after a jump only later marks
// of the new site matter. Marks at time t are applied.
inline bool connected_by_paths(const lrperc::Timeline& tl, const lrperc::Site& from, double s,
                               const lrperc::Site& to, double t, std::uint64_t k)
{
    std::function<bool(const lrperc::Site&, double, bool)> walk = [&](const lrperc::Site& x, double tau, bool start) {
        for (const auto& e : tl.events(tl.index_of(x))) {
            if (e.time > t) break;
            if (start ? e.time < tau : e.time <= tau) continue;
            if (e.target == lrperc::ContactEvent::kDeath) return false;
            if (start && e.time == tau) continue;
            const auto jump = static_cast<std::uint64_t>(std::abs(e.displacement));
            if (jump <= k && walk(tl.site_at(static_cast<std::size_t>(e.target)), e.time, false)) return true;
        }
        return x == to;
    };
    return walk(from, s, true);
}

// Replays a certified red-cluster site as bonds and checks each one.
inline bool path_is_open(const lrperc::BondField& field, const std::vector<lrperc::GVertex>& path)
{
    if (path.empty() || path.front() != lrperc::GVertex{}) return false;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const auto& u = path[i];
        const auto& v = path[i + 1];
        if (v.n != u.n + 1) return false;
        int axis = 0;
        std::int64_t disp = 0;
        for (int j = 0; j < 2; ++j) {
            if (v.x[j] == u.x[j]) continue;
            if (axis != 0) return false;
            axis = j + 1;
            disp = v.x[j] - u.x[j];
        }
        if (axis == 0) return false;
        if (!field.is_open(lrperc::BondId::oriented(u.x, 2, u.n, axis, disp))) return false;
    }
    return true;
}

} // namespace oracle
