#include "lrperc/renorm.hpp"

#include "lrperc/replicas.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace lrperc {

RenormSet exterior_boundary(const RenormSet& x)
{
    RenormSet out;
    for (const auto& p : x) {
        for (RenormPoint child : {RenormPoint{p.m, p.n + 1}, RenormPoint{p.m + 1, p.n + 1}}) {
            if (child.m < 0 || child.n < 0) continue;
            if (!x.contains(child)) out.insert(child);
        }
    }
    return out;
}

void validate(const BifurcationParams& params)
{
    if (params.beta < 1) throw std::invalid_argument("beta must be >= 1");
    if (!(params.q.eval(static_cast<std::uint64_t>(params.beta)) > 0.0))
        throw std::invalid_argument("beta must satisfy q_beta > 0");
}

namespace {

// log prod_{1<=|a|<=k} (1 - c * p_|a|), with p truncated at k.
double log_two_sided_product(const SequenceSpec& p, std::uint64_t k, double c)
{
    double s = 0.0;
    for (std::uint64_t i = 1; i <= k; ++i) s += 2.0 * std::log1p(-c * p.eval(i));
    return s;
}

double gamma_from(const SequenceSpec& p, double q_beta, std::uint64_t k)
{
    const double branch = -std::expm1(log_two_sided_product(p, k, 1.0));
    return -std::expm1(log_two_sided_product(p, k, q_beta * branch));
}

double truncated_q_beta(const BifurcationParams& params, std::uint64_t k)
{
    const auto beta = static_cast<std::uint64_t>(params.beta);
    return beta <= k ? params.q.eval(beta) : 0.0;
}

// 1, -1, 2, -2, ..., k, -k
constexpr std::int64_t leg_at(std::uint64_t j)
{
    const auto r = static_cast<std::int64_t>(j / 2 + 1);
    return (j % 2 == 0) ? r : -r;
}

} // namespace

double gamma_k(const BifurcationParams& params)
{
    validate(params);
    return gamma_from(params.p, truncated_q_beta(params, params.k), params.k);
}

std::vector<double> gamma_sweep(const BifurcationParams& params, std::uint64_t kmax)
{
    validate(params);
    std::vector<double> out;
    out.reserve(kmax);
    for (std::uint64_t k = 1; k <= kmax; ++k) out.push_back(gamma_from(params.p, truncated_q_beta(params, k), k));
    return out;
}

std::optional<std::uint64_t> minimal_k_above(const BifurcationParams& params, double threshold, std::uint64_t kmax)
{
    validate(params);
    for (std::uint64_t k = 1; k <= kmax; ++k)
        if (gamma_from(params.p, truncated_q_beta(params, k), k) > threshold) return k;
    return std::nullopt;
}

BifurcationRecord check_bifurcation(const BondField& field, const GVertex& origin, const BifurcationParams& params)
{
    constexpr int dim = 2;
    const auto legs = 2 * params.k;
    for (std::uint64_t j = 0; j < legs; ++j) {
        const auto a = leg_at(j);
        if (!field.is_open(BondId::oriented(origin.x, dim, origin.n, 1, a))) continue;
        Site mid = origin.x;
        mid[0] += a;
        if (!field.is_open(BondId::oriented(mid, dim, origin.n + 1, 2, params.beta))) continue;
        for (std::uint64_t jj = 0; jj < legs; ++jj) {
            const auto a2 = leg_at(jj);
            if (field.is_open(BondId::oriented(mid, dim, origin.n + 1, 1, a2))) return {true, a, a2};
        }
    }
    return {};
}

GVertex certified_vertex(const CertifiedSite& site, std::int64_t beta)
{
    return GVertex{Site{site.a, site.cell.m * beta, 0, 0}, 2 * site.cell.n};
}

std::vector<GVertex> certified_path(const RedRun& run, std::size_t site_index, std::int64_t beta)
{
    std::vector<GVertex> path;
    auto idx = static_cast<std::int32_t>(site_index);
    while (idx >= 0) {
        const auto& site = run.certified.at(static_cast<std::size_t>(idx));
        auto v = certified_vertex(site, beta);
        path.push_back(v);
        if (site.parent < 0) break;
        const auto parent = certified_vertex(run.certified.at(static_cast<std::size_t>(site.parent)), beta);
        GVertex mid{parent.x, parent.n + 1};
        mid.x[0] += site.first_leg;
        path.push_back(mid);
        idx = site.parent;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

RedRun explore_red_cluster(const BondField& field, const BifurcationParams& params, std::uint64_t max_steps)
{
    validate(params);
    RedRun run;
    run.certified.push_back(CertifiedSite{RenormPoint{0, 0}, 0, -1, 0, false, 0});

    struct PointLess {
        bool operator()(const RenormPoint& a, const RenormPoint& b) const { return prec(a, b); }
    };
    std::map<RenormPoint, std::vector<std::int32_t>, PointLess> on_line;
    on_line[RenormPoint{0, 0}].push_back(0);

    RenormSet frontier{RenormPoint{0, 0}};
    auto& state = run.state;
    while (!frontier.empty()) {
        if (state.step >= max_steps) {
            run.truncated = true;
            break;
        }
        const auto cell = *frontier.begin();
        frontier.erase(frontier.begin());

        auto sites = std::move(on_line[cell]);
        on_line.erase(cell);
        std::stable_sort(sites.begin(), sites.end(), [&](std::int32_t l, std::int32_t r) {
            return run.certified[static_cast<std::size_t>(l)].a < run.certified[static_cast<std::size_t>(r)].a;
        });

        Examination ex{cell, false, -1, {}, static_cast<std::uint32_t>(sites.size())};
        for (auto idx : sites) {
            const auto v = certified_vertex(run.certified[static_cast<std::size_t>(idx)], params.beta);
            auto rec = check_bifurcation(field, v, params);
            if (rec.occurred) {
                ex.red = true;
                ex.site = idx;
                ex.bifurcation = rec;
                break;
            }
        }

        if (ex.red) {
            state.accepted.insert(cell);
            const auto base_a = run.certified[static_cast<std::size_t>(ex.site)].a;
            const auto& b = ex.bifurcation;
            const CertifiedSite children[] = {
                {RenormPoint{cell.m, cell.n + 1}, base_a + b.a + b.a_next, ex.site, b.a, false, b.a_next},
                {RenormPoint{cell.m + 1, cell.n + 1}, base_a + b.a, ex.site, b.a, true, params.beta},
            };
            for (const auto& child : children) {
                on_line[child.cell].push_back(static_cast<std::int32_t>(run.certified.size()));
                run.certified.push_back(child);
                if (!state.accepted.contains(child.cell) && !state.rejected.contains(child.cell))
                    frontier.insert(child.cell);
            }
        } else {
            state.rejected.insert(cell);
        }
        run.trace.push_back(ex);
        ++state.step;
    }
    if (!frontier.empty()) state.current = *frontier.begin();
    return run;
}

DominationReport domination_check(const BondField& field, const BifurcationParams& params, std::uint64_t samples,
                                  std::uint64_t max_steps, unsigned threads)
{
    if (samples == 0) throw std::invalid_argument("samples must be >= 1");
    validate(params);

    struct Tally {
        std::uint64_t examined = 0;
        std::uint64_t red = 0;
        std::uint64_t cluster = 0;
        std::uint8_t truncated = 0;
    };
    auto tallies = run_replicas(samples, threads, [&](std::uint64_t r) {
        auto run = explore_red_cluster(field.derive_replica(r), params, max_steps);
        Tally t;
        t.examined = run.trace.size();
        for (const auto& ex : run.trace) t.red += ex.red ? 1 : 0;
        t.cluster = run.cluster_size();
        t.truncated = run.truncated ? 1 : 0;
        return t;
    });

    DominationReport report;
    report.runs = samples;
    report.gamma = gamma_k(params);
    std::uint64_t examined = 0, red = 0, cluster = 0;
    for (const auto& t : tallies) {
        examined += t.examined;
        red += t.red;
        cluster += t.cluster;
        report.truncated_runs += t.truncated;
    }
    report.red_frequency = EstimateWithCI::from_counts(red, std::max<std::uint64_t>(examined, 1), 3.0);
    if (examined == 0) report.red_frequency = EstimateWithCI{0, 0, 0.0, 0.0, 1.0, 3.0};
    report.violation = report.red_frequency.hi < report.gamma;
    report.mean_cluster_size = static_cast<double>(cluster) / static_cast<double>(samples);
    return report;
}

ConeCluster site_perc_cone(double gamma, std::int64_t horizon, const BondField& field, ConeOptions options)
{
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0,1]");
    if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");

    ConeCluster cone;
    cone.front_sizes.assign(static_cast<std::size_t>(horizon) + 1, 0);
    auto open = [&](std::int64_t m, std::int64_t n) { return field.uniform(BondId::cone_site(m, n)) < gamma; };

    std::vector<std::int64_t> front;
    if (options.origin_always_open || open(0, 0)) front.push_back(0);
    std::vector<std::int64_t> next;
    for (std::int64_t n = 0;; ++n) {
        cone.front_sizes[static_cast<std::size_t>(n)] = front.size();
        if (options.record_reached)
            for (auto m : front) cone.reached.push_back({m, n});
        if (n == horizon || front.empty()) break;
        next.clear();
        // front is increasing, so candidates arrive in nondecreasing order
        for (auto m : front) {
            for (auto c : {m, m + 1}) {
                if (!next.empty() && next.back() >= c) continue;
                if (open(c, n + 1)) next.push_back(c);
            }
        }
        front.swap(next);
    }
    cone.survived = cone.front_sizes.back() > 0;
    return cone;
}

std::vector<EstimateWithCI> site_perc_survival(double gamma, std::span<const std::int64_t> horizons,
                                               std::uint64_t seed, std::uint64_t replicas, unsigned threads,
                                               double z)
{
    if (replicas == 0) throw std::invalid_argument("replicas must be >= 1");
    if (horizons.empty()) throw std::invalid_argument("at least one horizon required");
    const auto tmax = *std::max_element(horizons.begin(), horizons.end());
    const auto base = BondField::sites(seed, gamma);

    // Per replica: the last generation with a nonempty front.
    auto reach = run_replicas(replicas, threads, [&](std::uint64_t r) -> std::int64_t {
        auto cone = site_perc_cone(gamma, tmax, base.derive_replica(r), {true, false});
        std::int64_t last = 0;
        for (std::size_t n = 0; n < cone.front_sizes.size(); ++n)
            if (cone.front_sizes[n] > 0) last = static_cast<std::int64_t>(n);
        return last;
    });

    std::vector<EstimateWithCI> out;
    for (auto t : horizons) {
        std::uint64_t s = 0;
        for (auto last : reach) s += last >= t ? 1 : 0;
        out.push_back(EstimateWithCI::from_counts(s, replicas, z));
    }
    return out;
}

std::optional<double> ratio_crossing(std::span<const double> gammas, std::span<const double> p_t,
                                     std::span<const double> p_2t, std::span<const double> p_4t)
{
    const auto n = gammas.size();
    if (p_t.size() != n || p_2t.size() != n || p_4t.size() != n)
        throw std::invalid_argument("ratio_crossing: mismatched lengths");
    if (n < 2) return std::nullopt;

    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r1 = p_t[i] > 0.0 ? p_2t[i] / p_t[i] : 0.0;
        const double r2 = p_2t[i] > 0.0 ? p_4t[i] / p_2t[i] : 0.0;
        diff[i] = r2 - r1;
    }

    // Split maximising agreement with "negative below, positive above".
    std::size_t best = 0;
    long best_score = -1;
    for (std::size_t j = 1; j < n; ++j) {
        long score = 0;
        for (std::size_t i = 0; i < n; ++i) score += (i < j ? diff[i] < 0.0 : diff[i] > 0.0) ? 1 : 0;
        if (score > best_score) {
            best_score = score;
            best = j;
        }
    }
    const double d0 = diff[best - 1];
    const double d1 = diff[best];
    if (!(d0 <= 0.0 && d1 >= 0.0)) return std::nullopt;
    const double g0 = gammas[best - 1];
    const double g1 = gammas[best];
    if (d1 == d0) return 0.5 * (g0 + g1);
    return g0 + (g1 - g0) * (-d0) / (d1 - d0);
}

} // namespace lrperc

namespace lrperc {

EstimateWithCI estimate_bifurcation_frequency(const BifurcationParams& params, std::uint64_t seed,
                                              std::uint64_t trials, unsigned threads, double z)
{
    validate(params);
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    const auto base = BondField::oriented(seed, params.p, params.q, params.k);
    auto hits = run_replicas(trials, threads, [&](std::uint64_t r) -> std::uint8_t {
        return check_bifurcation(base.derive_replica(r), GVertex{}, params).occurred ? 1 : 0;
    });
    std::uint64_t s = 0;
    for (auto h : hits) s += h;
    return EstimateWithCI::from_counts(s, trials, z);
}

} // namespace lrperc
