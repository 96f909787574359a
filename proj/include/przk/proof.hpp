#ifndef PRZK_PROOF_HPP
#define PRZK_PROOF_HPP

#include "przk/group.hpp"
#include "przk/hash.hpp"
#include "przk/identity.hpp"
#include "przk/message.hpp"
#include "przk/rng.hpp"

#include <optional>
#include <vector>

namespace przk::protocol {

// Public record of one session as seen on the wire.
struct Transcript {
    struct Entry {
        MessageTag tag;
        double at_ms;
    };

    std::optional<GroupElement> alpha;
    std::optional<Scalar> c;
    std::optional<Scalar> z;
    std::optional<Scalar> h_sp;
    std::optional<GroupElement> r_p_pub;
    std::optional<Verdict> verdict;
    std::vector<Entry> timeline;

    // Keeps the first occurrence of each field; later copies of a tag only
    // extend the timeline.
    void record(const Message& m, double at_ms);
    // Concatenated public field encodings, for secrecy scans.
    Bytes serialize() const;
};

// Non-interactive variant: c = H1(enc(alpha) || zeta || enc(pk_d)).
struct FiatShamirProof {
    GroupElement alpha;
    Scalar z;
};

Scalar fiat_shamir_challenge(const Group& group, const GroupElement& alpha, const Digest& zeta,
                             const GroupElement& pk_d);
FiatShamirProof fiat_shamir_prove(const Group& group, const TwinKeyPair& keys, const Digest& zeta, Rng& rng);
FiatShamirProof fiat_shamir_prove_with_nonce(const Group& group, const TwinKeyPair& keys, const Digest& zeta,
                                             const Scalar& r);
bool fiat_shamir_verify(const Group& group, const GroupElement& pk_d, const Digest& zeta,
                        const FiatShamirProof& proof);

// Special-soundness extractor: from two accepting transcripts sharing alpha
// with c1 != c2, sk = (z1 - z2) / (c1 - c2). Throws std::invalid_argument if
// the transcripts are incomplete, have different commitments, or equal
// challenges.
Scalar extract_secret(const Group& group, const Transcript& t1, const Transcript& t2);

} // namespace przk::protocol

#endif
