#include "lrperc/contact.hpp"

#include "lrperc/counter_rng.hpp"
#include "lrperc/replicas.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lrperc {

namespace {

constexpr std::size_t kMaxBoxSites = std::size_t{1} << 26;
constexpr std::uint64_t kMaxAttempts = 16;

// Appends the points of a rate-`rate` Poisson process on [0, horizon].
void poisson_times(std::uint64_t process_key, double rate, double horizon, std::vector<double>& out)
{
    if (!(rate > 0.0)) return;
    double t = 0.0;
    for (std::uint64_t j = 0;; ++j) {
        const double u = rng::to_unit(rng::Hasher(process_key).absorb(j).finish());
        t += -std::log1p(-u) / rate;
        if (t > horizon) return;
        out.push_back(t);
    }
}

bool by_time(const ContactEvent& l, const ContactEvent& r)
{
    if (l.time != r.time) return l.time < r.time;
    if (l.target != r.target) return l.target < r.target;
    if (l.axis != r.axis) return l.axis < r.axis;
    return l.displacement < r.displacement;
}

void check_site(const Timeline& tl, const Site& x, const char* what)
{
    if (!tl.contains(x)) throw std::invalid_argument(std::string(what) + " lies outside the timeline box");
}

} // namespace

PoissonField::PoissonField(std::uint64_t seed, TruncatedSequence rates)
    : key_(rng::root_key(seed)), rates_(std::move(rates))
{
}

std::vector<double> PoissonField::death_times(const Site& x, int dim, double horizon) const
{
    std::vector<double> out;
    poisson_times(BondId::death(x, dim).hash(key_), 1.0, horizon, out);
    return out;
}

std::vector<double> PoissonField::arrow_times(const Site& from, int dim, int axis, std::int64_t displacement,
                                              double horizon) const
{
    std::vector<double> out;
    const auto range = static_cast<std::uint64_t>(displacement < 0 ? -displacement : displacement);
    poisson_times(BondId::arrow(from, dim, axis, displacement).hash(key_), rates_.term(range), horizon, out);
    return out;
}

PoissonField PoissonField::derive_replica(std::uint64_t replica) const
{
    PoissonField f = *this;
    f.key_ = rng::replica_key(key_, replica);
    return f;
}

Timeline::Timeline(int dim, std::int64_t half_width, double horizon)
    : dim_(dim), half_width_(half_width), horizon_(horizon)
{
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("dim must lie in [1, " + std::to_string(kMaxDim) + "]");
    if (half_width < 0) throw std::invalid_argument("window must be >= 0");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("horizon must be > 0");
    std::size_t count = 1;
    const auto side = static_cast<std::size_t>(2 * half_width + 1);
    for (int j = 0; j < dim; ++j) {
        if (count > kMaxBoxSites / side) throw std::invalid_argument("timeline box too large");
        count *= side;
    }
    sites_.resize(count);
    ready_.assign(count, 1);
}

Timeline Timeline::sample(const PoissonField& field, int dim, std::int64_t half_width, double horizon)
{
    Timeline tl = lazy(field, dim, half_width, horizon);
    for (std::size_t i = 0; i < tl.site_count(); ++i) tl.materialise(i);
    return tl;
}

Timeline Timeline::lazy(const PoissonField& field, int dim, std::int64_t half_width, double horizon)
{
    Timeline tl(dim, half_width, horizon);
    tl.source_ = field;
    std::fill(tl.ready_.begin(), tl.ready_.end(), 0);
    return tl;
}

void Timeline::materialise(std::size_t index) const
{
    if (ready_[index]) return;
    const Site x = site_at(index);
    auto& list = sites_[index];
    std::vector<double> times;

    poisson_times(BondId::death(x, dim_).hash(source_->stream_key()), 1.0, horizon_, times);
    for (double t : times) list.push_back({t, ContactEvent::kDeath, 0, 0});

    const auto k = static_cast<std::int64_t>(source_->rates().k());
    for (int axis = 1; axis <= dim_; ++axis) {
        for (std::int64_t i = -k; i <= k; ++i) {
            if (i == 0) continue;
            Site y = x;
            y[axis - 1] += i;
            if (!contains(y)) continue;
            const double rate = source_->rates().term(static_cast<std::uint64_t>(i < 0 ? -i : i));
            if (!(rate > 0.0)) continue;
            times.clear();
            poisson_times(BondId::arrow(x, dim_, axis, i).hash(source_->stream_key()), rate, horizon_, times);
            const auto target = static_cast<std::int32_t>(index_of(y));
            for (double t : times)
                list.push_back({t, target, static_cast<std::int16_t>(axis), static_cast<std::int32_t>(i)});
        }
    }
    std::sort(list.begin(), list.end(), by_time);
    ready_[index] = 1;
}

void Timeline::add_death(const Site& x, double t)
{
    check_site(*this, x, "death site");
    const auto idx = index_of(x);
    materialise(idx);
    ContactEvent e{t, ContactEvent::kDeath, 0, 0};
    auto& list = sites_[idx];
    list.insert(std::upper_bound(list.begin(), list.end(), e, by_time), e);
}

void Timeline::add_arrow(const Site& from, int axis, std::int64_t displacement, double t)
{
    check_site(*this, from, "arrow tail");
    if (axis < 1 || axis > dim_) throw std::invalid_argument("arrow axis out of range");
    if (displacement == 0) throw std::invalid_argument("arrow displacement must be nonzero");
    Site y = from;
    y[axis - 1] += displacement;
    if (!contains(y)) return; // leaves the box
    const auto idx = index_of(from);
    materialise(idx);
    ContactEvent e{t, static_cast<std::int32_t>(index_of(y)), static_cast<std::int16_t>(axis),
                   static_cast<std::int32_t>(displacement)};
    auto& list = sites_[idx];
    list.insert(std::upper_bound(list.begin(), list.end(), e, by_time), e);
}

bool Timeline::contains(const Site& x) const
{
    for (int j = 0; j < kMaxDim; ++j) {
        if (j < dim_) {
            if (x[j] < -half_width_ || x[j] > half_width_) return false;
        } else if (x[j] != 0) {
            return false;
        }
    }
    return true;
}

std::size_t Timeline::index_of(const Site& x) const
{
    const auto side = static_cast<std::size_t>(2 * half_width_ + 1);
    std::size_t idx = 0;
    for (int j = dim_ - 1; j >= 0; --j) idx = idx * side + static_cast<std::size_t>(x[j] + half_width_);
    return idx;
}

Site Timeline::site_at(std::size_t index) const
{
    const auto side = static_cast<std::size_t>(2 * half_width_ + 1);
    Site x{};
    for (int j = 0; j < dim_; ++j) {
        x[j] = static_cast<std::int64_t>(index % side) - half_width_;
        index /= side;
    }
    return x;
}

std::span<const ContactEvent> Timeline::events(std::size_t index) const
{
    materialise(index);
    return sites_[index];
}

std::vector<double> Timeline::death_times(const Site& x) const
{
    std::vector<double> out;
    if (!contains(x)) return out;
    for (const auto& e : events(index_of(x)))
        if (e.target == ContactEvent::kDeath) out.push_back(e.time);
    return out;
}

std::vector<double> Timeline::arrow_times(const Site& from, int axis, std::int64_t displacement) const
{
    std::vector<double> out;
    if (!contains(from)) return out;
    for (const auto& e : events(index_of(from)))
        if (e.target != ContactEvent::kDeath && e.axis == axis && e.displacement == displacement)
            out.push_back(e.time);
    return out;
}

namespace {

template <class Pred>
bool any_in(std::span<const ContactEvent> list, double t0, double t1, Pred&& pred)
{
    auto it = std::lower_bound(list.begin(), list.end(), t0,
                               [](const ContactEvent& e, double t) { return e.time < t; });
    for (; it != list.end() && it->time <= t1; ++it)
        if (pred(*it)) return true;
    return false;
}

} // namespace

bool Timeline::has_death(const Site& x, double t0, double t1) const
{
    if (!contains(x)) return false;
    return any_in(events(index_of(x)), t0, t1, [](const ContactEvent& e) { return e.target == ContactEvent::kDeath; });
}

bool Timeline::has_arrow(const Site& from, int axis, std::int64_t displacement, double t0, double t1) const
{
    if (!contains(from)) return false;
    return any_in(events(index_of(from)), t0, t1, [&](const ContactEvent& e) {
        return e.target != ContactEvent::kDeath && e.axis == axis && e.displacement == displacement;
    });
}

bool Timeline::has_collision() const
{
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        if (!ready_[i]) continue;
        const auto& list = sites_[i];
        for (std::size_t j = 1; j < list.size(); ++j)
            if (list[j].time == list[j - 1].time) return true;
    }
    return false;
}

InfectionSweep::InfectionSweep(const Timeline& timeline, std::span<const Site> initial, double start_time,
                               std::uint64_t max_jump)
    : tl_(timeline), max_jump_(max_jump), state_(timeline.site_count(), 0), last_time_(start_time)
{
    for (const auto& x : initial) {
        check_site(tl_, x, "initial site");
        const auto idx = tl_.index_of(x);
        if (state_[idx]) continue;
        state_[idx] = 1;
        ++count_;
        schedule(idx, start_time, true);
    }
    // Only a genuine tie between two applied marks counts as a collision.
    last_time_ = -1.0;
}

void InfectionSweep::schedule(std::size_t site, double after, bool inclusive)
{
    const auto list = tl_.events(site);
    auto it = inclusive
                  ? std::lower_bound(list.begin(), list.end(), after,
                                     [](const ContactEvent& e, double t) { return e.time < t; })
                  : std::upper_bound(list.begin(), list.end(), after,
                                     [](double t, const ContactEvent& e) { return t < e.time; });
    // A path sits at its start site at the start time; arrows there cannot fire.
    while (inclusive && it != list.end() && it->time == after && it->target != ContactEvent::kDeath) ++it;
    if (it != list.end())
        queue_.push({it->time, site, static_cast<std::size_t>(it - list.begin())});
}

void InfectionSweep::advance_to(double t)
{
    while (!queue_.empty() && queue_.top().time <= t) {
        const auto p = queue_.top();
        queue_.pop();
        if (p.time == last_time_) collision_ = true;
        last_time_ = p.time;

        const auto list = tl_.events(p.site);
        const auto& e = list[p.cursor];
        if (e.target == ContactEvent::kDeath) {
            state_[p.site] = 0;
            --count_;
            continue; // a dead site has nothing scheduled until reinfected
        }
        const auto jump = static_cast<std::uint64_t>(e.displacement < 0 ? -e.displacement : e.displacement);
        const auto target = static_cast<std::size_t>(e.target);
        if (jump <= max_jump_ && !state_[target]) {
            state_[target] = 1;
            ++count_;
            schedule(target, e.time, false);
        }
        if (p.cursor + 1 < list.size()) queue_.push({list[p.cursor + 1].time, p.site, p.cursor + 1});
    }
}

bool InfectionSweep::infected(const Site& x) const
{
    return tl_.contains(x) && state_[tl_.index_of(x)] != 0;
}

std::vector<Site> InfectionSweep::infected_sites() const
{
    std::vector<Site> out;
    for (std::size_t i = 0; i < state_.size(); ++i)
        if (state_[i]) out.push_back(tl_.site_at(i));
    return out;
}

bool k_connected(const Timeline& timeline, const Site& from, double s, const Site& to, double t, std::uint64_t k)
{
    check_site(timeline, from, "source site");
    check_site(timeline, to, "target site");
    if (!(s <= t)) throw std::invalid_argument("k_connected requires s <= t");
    if (s < 0.0 || t > timeline.horizon()) throw std::invalid_argument("k_connected times outside [0, horizon]");
    const Site start[] = {from};
    InfectionSweep sweep(timeline, start, s, k);
    sweep.advance_to(t);
    return sweep.infected(to);
}

double f_probability(const SkeletonParams& params, const SequenceSpec& rates)
{
    if (!(params.delta > 0.0)) throw std::invalid_argument("delta must be > 0");
    if (params.b == 0) throw std::invalid_argument("b must be nonzero");
    const double d = params.delta;
    const auto b = static_cast<std::uint64_t>(params.b < 0 ? -params.b : params.b);
    const double lambda_b = b <= params.k ? rates.eval(b) : 0.0;
    const double vertical = -std::expm1(-lambda_b * d / 2.0);
    double log_miss = 0.0;
    for (std::uint64_t i = 1; i <= params.k; ++i) {
        const double first = -std::expm1(-rates.eval(i) * d / 2.0);
        log_miss += 2.0 * std::log1p(-std::exp(-2.0 * d) * first * vertical);
    }
    return std::exp(-d) * -std::expm1(log_miss);
}

FEventRecord check_f_event(const Timeline& timeline, const Site& x, std::int64_t n, const SkeletonParams& params)
{
    if (!(params.delta > 0.0)) throw std::invalid_argument("delta must be > 0");
    if (n < 0) throw std::invalid_argument("step index must be >= 0");
    const double t0 = static_cast<double>(n) * params.delta;
    const double t1 = static_cast<double>(n + 1) * params.delta;
    const double mid = t0 + params.delta / 2.0;
    if (t1 > timeline.horizon() * (1.0 + 1e-12)) throw std::invalid_argument("F-event window exceeds the horizon");

    if (timeline.has_death(x, t0, t1)) return {};
    const auto k = static_cast<std::int64_t>(params.k);
    for (std::int64_t r = 1; r <= k; ++r) {
        for (std::int64_t a : {r, -r}) {
            Site y = x;
            y[0] += a;
            Site z = y;
            z[1] += params.b;
            if (!timeline.contains(y) || !timeline.contains(z)) continue;
            if (timeline.has_death(y, t0, t1) || timeline.has_death(z, t0, t1)) continue;
            if (!timeline.has_arrow(x, 1, a, t0, mid)) continue;
            if (!timeline.has_arrow(y, 2, params.b, mid, t1)) continue;
            return {true, a};
        }
    }
    return {};
}

bool contact_survives(const Timeline& timeline, std::uint64_t k)
{
    const Site origin[] = {Site{}};
    InfectionSweep sweep(timeline, origin, 0.0, k);
    sweep.advance_to(timeline.horizon());
    return sweep.alive();
}

ContactSurvival estimate_contact_survival(const SequenceSpec& rates, const ContactParams& params, std::uint64_t seed,
                                          std::uint64_t replicas, unsigned threads, double z)
{
    if (replicas == 0) throw std::invalid_argument("replicas must be >= 1");
    if (rates.domain() != Domain::rate) throw std::invalid_argument("contact rates must be a rate sequence");
    const PoissonField base(seed, truncate(rates, params.k));

    struct Outcome {
        std::uint8_t survived = 0;
        std::uint8_t redraws = 0;
    };
    auto outcomes = run_replicas(replicas, threads, [&](std::uint64_t r) {
        for (std::uint64_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
            auto field = base.derive_replica(r);
            if (attempt > 0) field = field.derive_replica(attempt);
            auto tl = Timeline::lazy(field, params.dim, params.window, params.horizon);
            const Site origin[] = {Site{}};
            InfectionSweep sweep(tl, origin, 0.0, params.k);
            sweep.advance_to(params.horizon);
            if (sweep.collision() || tl.has_collision()) continue;
            return Outcome{static_cast<std::uint8_t>(sweep.alive() ? 1 : 0), static_cast<std::uint8_t>(attempt)};
        }
        throw std::runtime_error("contact replica kept producing simultaneous events");
    });

    ContactSurvival out;
    std::uint64_t successes = 0;
    for (const auto& o : outcomes) {
        successes += o.survived;
        out.resampled += o.redraws > 0 ? 1 : 0;
    }
    out.estimate = EstimateWithCI::from_counts(successes, replicas, z);
    return out;
}

} // namespace lrperc

namespace lrperc {

EstimateWithCI estimate_f_frequency(const SkeletonParams& params, const SequenceSpec& rates, std::uint64_t seed,
                                    std::uint64_t trials, unsigned threads, double z)
{
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    if (rates.domain() != Domain::rate) throw std::invalid_argument("contact rates must be a rate sequence");
    const PoissonField base(seed, truncate(rates, params.k));
    const auto half = std::max<std::int64_t>(static_cast<std::int64_t>(params.k), params.b < 0 ? -params.b : params.b);
    auto hits = run_replicas(trials, threads, [&](std::uint64_t r) -> std::uint8_t {
        auto tl = Timeline::lazy(base.derive_replica(r), 2, half, params.delta);
        return check_f_event(tl, Site{}, 0, params).occurred ? 1 : 0;
    });
    std::uint64_t s = 0;
    for (auto h : hits) s += h;
    return EstimateWithCI::from_counts(s, trials, z);
}

} // namespace lrperc
