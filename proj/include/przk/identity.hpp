#ifndef PRZK_IDENTITY_HPP
#define PRZK_IDENTITY_HPP

#include "przk/bytes.hpp"
#include "przk/group.hpp"
#include "przk/hash.hpp"
#include "przk/rng.hpp"

#include <array>
#include <string_view>

namespace przk {

enum class IdentitySource : std::uint8_t { SimulatedPuf, Fixed };

// The physical entity's unclonable secret S_p. Simulated: a noise-free PUF
// readout derived deterministically from a provisioning seed.
//
// There is deliberately no serializer; only H1(S_p) leaves the entity. The
// CLI's secret file is the single place the raw bytes are written.
class PhysicalIdentity {
public:
    // Throws std::invalid_argument on an empty seed.
    static PhysicalIdentity provision(ByteView seed);
    static PhysicalIdentity provision(std::string_view seed);
    static PhysicalIdentity fixed(const std::array<std::uint8_t, 32>& secret);

    ByteView secret() const { return s_p_; }
    IdentitySource source() const { return source_; }

private:
    PhysicalIdentity(const std::array<std::uint8_t, 32>& s, IdentitySource src) : s_p_(s), source_(src) {}

    std::array<std::uint8_t, 32> s_p_;
    IdentitySource source_;
};

// h_sp = H1(S_p) and pk_p = g^h_sp.
struct EntityKeys {
    Scalar h_sp;
    GroupElement pk_p;

    // If H1(S_p) reduces to 0 the derivation is retried over
    // (S_p, u32 counter) for counter = 1, 2, ... until nonzero.
    static EntityKeys derive(const Group& group, const PhysicalIdentity& id);
    // Throws std::invalid_argument if h_sp is zero.
    static EntityKeys from_hash(const Group& group, const Scalar& h_sp);

    bool consistent(const Group& group) const;
};

struct TwinKeyPair {
    Scalar sk_d;
    GroupElement pk_d;

    static TwinKeyPair generate(const Group& group, Rng& rng);
    // Throws std::invalid_argument if sk_d is zero.
    static TwinKeyPair from_secret(const Group& group, const Scalar& sk_d);

    bool consistent(const Group& group) const;
};

} // namespace przk

#endif
