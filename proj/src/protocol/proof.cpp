#include "przk/proof.hpp"

#include "przk/session.hpp"

#include <stdexcept>
#include <type_traits>

namespace przk::protocol {

void Transcript::record(const Message& m, double at_ms) {
    timeline.push_back({tag_of(m), at_ms});
    std::visit(
        [this](const auto& msg) {
            using T = std::decay_t<decltype(msg)>;
            if constexpr (std::is_same_v<T, Commit>) {
                if (!alpha) alpha = msg.alpha;
            } else if constexpr (std::is_same_v<T, Challenge>) {
                if (!c) c = msg.c;
            } else if constexpr (std::is_same_v<T, Response>) {
                if (!z) z = msg.z;
            } else if constexpr (std::is_same_v<T, IdentityProof>) {
                if (!h_sp) {
                    h_sp = msg.h_sp;
                    r_p_pub = msg.r_p_pub;
                }
            } else {
                if (!verdict) verdict = msg;
            }
        },
        m);
}

Bytes Transcript::serialize() const {
    Bytes out;
    auto put = [&out](const Bytes& b) { out.insert(out.end(), b.begin(), b.end()); };
    if (alpha) put(alpha->bytes());
    if (c) put(c->bytes());
    if (z) put(z->bytes());
    if (h_sp) put(h_sp->bytes());
    if (r_p_pub) put(r_p_pub->bytes());
    if (verdict) put(encode(*verdict));
    return out;
}

Scalar fiat_shamir_challenge(const Group& group, const GroupElement& alpha, const Digest& zeta,
                             const GroupElement& pk_d) {
    return h1(group, {alpha.bytes(), zeta, pk_d.bytes()});
}

FiatShamirProof fiat_shamir_prove(const Group& group, const TwinKeyPair& keys, const Digest& zeta, Rng& rng) {
    return fiat_shamir_prove_with_nonce(group, keys, zeta, group.random_scalar(rng));
}

FiatShamirProof fiat_shamir_prove_with_nonce(const Group& group, const TwinKeyPair& keys, const Digest& zeta,
                                             const Scalar& r) {
    GroupElement alpha = group.exp_g(r);
    const Scalar c = fiat_shamir_challenge(group, alpha, zeta, keys.pk_d);
    return {std::move(alpha), schnorr_response(group, r, c, keys.sk_d)};
}

bool fiat_shamir_verify(const Group& group, const GroupElement& pk_d, const Digest& zeta,
                        const FiatShamirProof& proof) {
    const Scalar c = fiat_shamir_challenge(group, proof.alpha, zeta, pk_d);
    return schnorr_holds(group, proof.alpha, c, proof.z, pk_d);
}

Scalar extract_secret(const Group& group, const Transcript& t1, const Transcript& t2) {
    if (!t1.alpha || !t1.c || !t1.z || !t2.alpha || !t2.c || !t2.z) {
        throw std::invalid_argument("extract_secret: transcripts need alpha, c and z");
    }
    if (*t1.alpha != *t2.alpha) throw std::invalid_argument("extract_secret: commitments differ");
    if (*t1.c == *t2.c) throw std::invalid_argument("extract_secret: equal challenges, nothing to extract");
    const Scalar dz = group.sub(*t1.z, *t2.z);
    const Scalar dc = group.sub(*t1.c, *t2.c);
    return group.mul(dz, group.inverse(dc));
}

} // namespace przk::protocol
