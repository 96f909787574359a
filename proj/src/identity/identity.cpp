#include "przk/identity.hpp"

#include <stdexcept>

namespace przk {

namespace {

constexpr std::string_view kProvisionTag = "przk/puf-provision";

ByteView as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

} // namespace

PhysicalIdentity PhysicalIdentity::provision(ByteView seed) {
    if (seed.empty()) throw std::invalid_argument("identity seed must be nonempty");
    return PhysicalIdentity(h2({as_bytes(kProvisionTag), seed}), IdentitySource::SimulatedPuf);
}

PhysicalIdentity PhysicalIdentity::provision(std::string_view seed) {
    return provision(as_bytes(seed));
}

PhysicalIdentity PhysicalIdentity::fixed(const std::array<std::uint8_t, 32>& secret) {
    return PhysicalIdentity(secret, IdentitySource::Fixed);
}

EntityKeys EntityKeys::derive(const Group& group, const PhysicalIdentity& id) {
    Scalar h = h1(group, {id.secret()});
    for (std::uint32_t counter = 1; group.is_zero(h); ++counter) {
        h = h1(group, {id.secret(), u32_be(counter)});
    }
    return {h, group.exp_g(h)};
}

EntityKeys EntityKeys::from_hash(const Group& group, const Scalar& h_sp) {
    if (group.is_zero(h_sp)) throw std::invalid_argument("h_sp must be nonzero");
    return {h_sp, group.exp_g(h_sp)};
}

bool EntityKeys::consistent(const Group& group) const {
    return !group.is_zero(h_sp) && group.exp_g(h_sp) == pk_p;
}

TwinKeyPair TwinKeyPair::generate(const Group& group, Rng& rng) {
    Scalar sk = group.random_nonzero_scalar(rng);
    GroupElement pk = group.exp_g(sk);
    return {std::move(sk), std::move(pk)};
}

TwinKeyPair TwinKeyPair::from_secret(const Group& group, const Scalar& sk_d) {
    if (group.is_zero(sk_d)) throw std::invalid_argument("sk_d must be nonzero");
    return {sk_d, group.exp_g(sk_d)};
}

bool TwinKeyPair::consistent(const Group& group) const {
    return !group.is_zero(sk_d) && group.exp_g(sk_d) == pk_d;
}

} // namespace przk
