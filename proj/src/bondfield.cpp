#include "lrperc/bondfield.hpp"

#include <algorithm>
#include <stdexcept>

namespace lrperc {

namespace {

void check_dim(int dim)
{
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("dimension must lie in [1, " + std::to_string(kMaxDim) + "]");
}

} // namespace

BondId BondId::oriented(const Site& tail, int dim, std::int64_t n, int axis, std::int64_t displacement)
{
    check_dim(dim);
    return {GraphTag::g_oriented, dim, tail, n, axis, displacement};
}

BondId BondId::star_horizontal(const Site& u, const Site& v, int dim, std::int64_t n)
{
    check_dim(dim);
    int axis = 0;
    for (int j = 0; j < dim; ++j) {
        if (u[j] != v[j]) {
            if (axis != 0) throw std::invalid_argument("horizontal bond endpoints differ on more than one axis");
            axis = j + 1;
        }
    }
    if (axis == 0) throw std::invalid_argument("horizontal bond endpoints coincide");
    const Site& tail = std::lexicographical_compare(u.begin(), u.begin() + dim, v.begin(), v.begin() + dim) ? u : v;
    const Site& head = &tail == &u ? v : u;
    return {GraphTag::gstar_horizontal, dim, tail, n, axis, head[axis - 1] - tail[axis - 1]};
}

BondId BondId::star_vertical(const Site& x, int dim, std::int64_t n)
{
    check_dim(dim);
    return {GraphTag::gstar_vertical, dim, x, n, 0, 1};
}

BondId BondId::cone_site(std::int64_t m, std::int64_t n)
{
    return {GraphTag::site, 1, Site{m, 0, 0, 0}, n, 0, 0};
}

BondId BondId::death(const Site& x, int dim)
{
    check_dim(dim);
    return {GraphTag::contact_death, dim, x, 0, 0, 0};
}

BondId BondId::arrow(const Site& from, int dim, int axis, std::int64_t displacement)
{
    check_dim(dim);
    return {GraphTag::contact_arrow, dim, from, 0, axis, displacement};
}

std::uint64_t BondId::hash(std::uint64_t stream_key) const
{
    rng::Hasher h(stream_key);
    h.absorb(static_cast<std::uint64_t>(tag)).absorb(static_cast<std::uint64_t>(dim));
    for (int j = 0; j < dim; ++j) h.absorb_signed(x[j]);
    h.absorb_signed(n).absorb(static_cast<std::uint64_t>(axis)).absorb_signed(displacement);
    return h.finish();
}

BondField::BondField(std::uint64_t seed, std::vector<TruncatedSequence> axis_laws,
                     double vertical_probability, double site_probability)
    : key_(rng::root_key(seed)), laws_(std::move(axis_laws)), vertical_(vertical_probability),
      site_(site_probability)
{
    if (!(vertical_ >= 0.0 && vertical_ <= 1.0)) throw std::invalid_argument("vertical probability outside [0,1]");
    if (!(site_ >= 0.0 && site_ <= 1.0)) throw std::invalid_argument("site probability outside [0,1]");
    for (const auto& law : laws_)
        if (law.base().domain() != Domain::probability)
            throw std::invalid_argument("bond laws must be probability sequences");
}

BondField BondField::oriented(std::uint64_t seed, const SequenceSpec& p, const SequenceSpec& q, std::uint64_t k)
{
    return BondField(seed, {truncate(p, k), truncate(q, k)});
}

BondField BondField::star(std::uint64_t seed, const SequenceSpec& p, std::uint64_t k, double eps)
{
    return BondField(seed, {truncate(p, k)}, eps);
}

BondField BondField::sites(std::uint64_t seed, double gamma) { return BondField(seed, {}, 0.0, gamma); }

double BondField::probability(const BondId& bond) const
{
    switch (bond.tag) {
    case GraphTag::g_oriented: {
        if (laws_.empty() || bond.axis < 1) return 0.0;
        auto idx = std::min<std::size_t>(static_cast<std::size_t>(bond.axis), laws_.size()) - 1;
        return laws_[idx].term(bond.range());
    }
    case GraphTag::gstar_horizontal:
        return laws_.empty() ? 0.0 : laws_.front().term(bond.range());
    case GraphTag::gstar_vertical:
        return vertical_;
    case GraphTag::site:
        return site_;
    case GraphTag::contact_death:
    case GraphTag::contact_arrow:
        break;
    }
    return 0.0;
}

BondField BondField::derive_replica(std::uint64_t replica) const
{
    BondField f = *this;
    f.key_ = rng::replica_key(key_, replica);
    return f;
}

BondField BondField::retruncated(std::uint64_t k) const
{
    BondField f = *this;
    for (auto& law : f.laws_) law = law.retruncated(k);
    return f;
}

} // namespace lrperc
