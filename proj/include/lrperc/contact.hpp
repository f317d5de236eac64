#pragma once

#include "lrperc/bondfield.hpp"
#include "lrperc/sequences.hpp"
#include "lrperc/stats.hpp"

#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <vector>

namespace lrperc {

/// Homogeneous Poisson processes keyed counter-mode, one per death process
/// D^x (rate 1) and per arrow process B^(x, x+i e_m) (rate lambda^k_|i|).
/// Each process is a prefix-consistent sequence of exponential gaps, so its
/// restriction to [0,T] does not depend on T, on the box, or on k.
class PoissonField {
public:
    PoissonField(std::uint64_t seed, TruncatedSequence rates);

    std::vector<double> death_times(const Site& x, int dim, double horizon) const;
    std::vector<double> arrow_times(const Site& from, int dim, int axis, std::int64_t displacement,
                                    double horizon) const;

    PoissonField derive_replica(std::uint64_t replica) const;

    const TruncatedSequence& rates() const { return rates_; }
    std::uint64_t stream_key() const { return key_; }

private:
    std::uint64_t key_;
    TruncatedSequence rates_;
};

// One mark in a site's event list. target == kDeath marks a death of the site
// itself; otherwise it is the box index of the arrow's head.
struct ContactEvent {
    static constexpr std::int32_t kDeath = -1;

    double time = 0.0;
    std::int32_t target = kDeath;
    std::int16_t axis = 0;
    std::int32_t displacement = 0;
};

/// Death and arrow marks on the box |x_j| <= half_width over [0, horizon].
/// Arrows whose head leaves the box are discarded. Built eagerly, lazily
/// (site lists generated on first access; not safe to share across threads),
/// or by hand through add_death/add_arrow.
class Timeline {
public:
    Timeline(int dim, std::int64_t half_width, double horizon);

    static Timeline sample(const PoissonField& field, int dim, std::int64_t half_width, double horizon);
    static Timeline lazy(const PoissonField& field, int dim, std::int64_t half_width, double horizon);

    void add_death(const Site& x, double t);
    void add_arrow(const Site& from, int axis, std::int64_t displacement, double t);

    int dim() const { return dim_; }
    std::int64_t half_width() const { return half_width_; }
    double horizon() const { return horizon_; }
    std::size_t site_count() const { return sites_.size(); }

    bool contains(const Site& x) const;
    std::size_t index_of(const Site& x) const;
    Site site_at(std::size_t index) const;

    /// Events of one site, sorted by time.
    std::span<const ContactEvent> events(std::size_t index) const;

    std::vector<double> death_times(const Site& x) const;
    std::vector<double> arrow_times(const Site& from, int axis, std::int64_t displacement) const;
    bool has_death(const Site& x, double t0, double t1) const;
    bool has_arrow(const Site& from, int axis, std::int64_t displacement, double t0, double t1) const;

    /// Two marks of one site share a time stamp.
    bool has_collision() const;

private:
    void materialise(std::size_t index) const;

    int dim_;
    std::int64_t half_width_;
    double horizon_;
    std::optional<PoissonField> source_;
    mutable std::vector<std::vector<ContactEvent>> sites_;
    mutable std::vector<std::uint8_t> ready_;
};

/// Event-driven propagation of the infected set along the marks of a
/// timeline: a death clears its site, an arrow from an infected site infects
/// its head. Only infected sites are scheduled.
class InfectionSweep {
public:
    /// Sites infected at start_time; arrows of length > max_jump are ignored.
    InfectionSweep(const Timeline& timeline, std::span<const Site> initial, double start_time,
                   std::uint64_t max_jump);

    /// Applies every mark with time <= t.
    void advance_to(double t);

    bool infected(const Site& x) const;
    std::vector<Site> infected_sites() const;
    std::size_t infected_count() const { return count_; }
    bool alive() const { return count_ > 0; }

    /// Two applied marks shared a time stamp.
    bool collision() const { return collision_; }

private:
    struct Pending {
        double time;
        std::size_t site;
        std::size_t cursor;
        bool operator>(const Pending& o) const { return time != o.time ? time > o.time : site > o.site; }
    };

    void schedule(std::size_t site, double after, bool inclusive);

    const Timeline& tl_;
    std::uint64_t max_jump_;
    std::vector<std::uint8_t> state_;
    std::size_t count_ = 0;
    std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue_;
    double last_time_ = -1.0;
    bool collision_ = false;
};

/// (from, s) and (to, t) are joined by a death-avoiding path using arrows of
/// length <= k. Both sites must lie in the box and s <= t <= horizon.
bool k_connected(const Timeline& timeline, const Site& from, double s, const Site& to, double t, std::uint64_t k);

struct SkeletonParams {
    double delta = 1.0;
    std::int64_t b = 1; // displacement along e_2 with lambda_b > 0
    std::uint64_t k = 1;
};

/// Exact probability of the event F under the k-truncated rates.
double f_probability(const SkeletonParams& params, const SequenceSpec& rates);

struct FEventRecord {
    bool occurred = false;
    std::int64_t a = 0;
};

/// The event F at (x, n) on [n delta, (n+1) delta]; scans a = 1, -1, 2, ...
FEventRecord check_f_event(const Timeline& timeline, const Site& x, std::int64_t n, const SkeletonParams& params);

/// Fraction of replicas in which F occurs at (origin, 0). Replica r samples a
/// box of half-width max(k, |b|) over [0, delta] from
/// PoissonField(seed, rates^k).derive_replica(r).
EstimateWithCI estimate_f_frequency(const SkeletonParams& params, const SequenceSpec& rates, std::uint64_t seed,
                                    std::uint64_t trials, unsigned threads = 1, double z = kDefaultZ);

struct ContactParams {
    int dim = 2;
    std::uint64_t k = 1;
    std::int64_t window = 10;
    double horizon = 1.0;
};

struct ContactSurvival {
    EstimateWithCI estimate;
    std::uint64_t resampled = 0; // replicas redrawn after a time-stamp collision
};

/// Fraction of replicas in which the infection started at the origin at time
/// 0 is alive at the horizon. Replica r uses PoissonField(seed, rates^k)
/// .derive_replica(r); a colliding replica is redrawn from
/// .derive_replica(r).derive_replica(attempt).
ContactSurvival estimate_contact_survival(const SequenceSpec& rates, const ContactParams& params, std::uint64_t seed,
                                          std::uint64_t replicas, unsigned threads = 1, double z = kDefaultZ);

/// Survival indicator for a single timeline (origin infected at time 0).
bool contact_survives(const Timeline& timeline, std::uint64_t k);

} // namespace lrperc
