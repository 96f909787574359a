#ifndef PRZK_SESSION_HPP
#define PRZK_SESSION_HPP

#include "przk/group.hpp"
#include "przk/hash.hpp"
#include "przk/identity.hpp"
#include "przk/message.hpp"
#include "przk/rng.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace przk::protocol {

// Thrown when an operation is invoked in a phase that does not allow it.
// Message-driven input (receive) never throws this; it fails the session.
class ProtocolError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Entity P:  Idle -> Challenged -> ResponseReceived -> IdentitySent -> KeyEstablished
// Twin D:    Idle -> CommitmentSent -> ResponseSent -> IdentityVerified -> KeyEstablished
// Either may drop to Failed, which is absorbing.
enum class Phase : std::uint8_t {
    Idle,
    CommitmentSent,
    Challenged,
    ResponseSent,
    ResponseReceived,
    IdentitySent,
    IdentityVerified,
    KeyEstablished,
    Failed,
};

std::string_view to_string(Phase p);

struct OpCounts {
    std::uint64_t group_exp = 0;
    std::uint64_t group_mul = 0;
    std::uint64_t hash = 0;

    OpCounts& operator+=(const OpCounts& o) {
        group_exp += o.group_exp;
        group_mul += o.group_mul;
        hash += o.hash;
        return *this;
    }
    friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

struct SessionKey {
    Digest k_pd{};
    friend bool operator==(const SessionKey&, const SessionKey&) = default;
};

inline constexpr std::size_t kChallengeNonceSize = 16;

// c = H1(enc(alpha) || zeta || nonce). The nonce is drawn fresh by P for
// every session, so a replayed commitment meets a new challenge.
Scalar interactive_challenge(const Group& group, const GroupElement& alpha, const Digest& zeta, ByteView nonce);

// z = r + c * sk mod q.
Scalar schnorr_response(const Group& group, const Scalar& r, const Scalar& c, const Scalar& sk);

// g^z == alpha * pk^c.
bool schnorr_holds(const Group& group, const GroupElement& alpha, const Scalar& c, const Scalar& z,
                   const GroupElement& pk);

// K_pd = H1_bytes(enc(shared) || zeta).
SessionKey session_key_from_point(const GroupElement& shared, const Digest& zeta);

// The digital twin D: Schnorr prover and physical-identity verifier.
class TwinSession {
public:
    TwinSession(const Group& group, TwinKeyPair keys, GroupElement pk_p, Digest zeta);

    // Draws r uniformly from [1, q).
    Commit commit(Rng& rng);
    Commit commit_with_nonce(const Scalar& r);
    Response respond(const Challenge& ch);
    // g^h_sp == pk_p, plus degenerate guards on h_sp and the ephemeral R_p.
    bool verify_identity(const IdentityProof& proof);
    SessionKey derive_key();

    // Dispatches by phase. Unexpected input fails the session with
    // OutOfOrder; the returned message is the reply to send, if any.
    std::optional<Message> receive(const Message& m);
    void fail(Reason reason);
    void timeout();

    Phase phase() const { return phase_; }
    std::optional<Reason> failure() const { return failure_; }
    bool identity_verified() const { return identity_verified_; }
    bool ephemeral_erased() const { return !r_.has_value(); }
    const std::optional<SessionKey>& key() const { return key_; }
    const OpCounts& ops() const { return ops_; }
    const GroupElement& pk_d() const { return keys_.pk_d; }
    const Group& group() const { return *group_; }

private:
    void require(Phase expected, std::string_view op) const;
    void erase_ephemerals();

    const Group* group_;
    TwinKeyPair keys_;
    GroupElement pk_p_;
    Digest zeta_;

    Phase phase_ = Phase::Idle;
    std::optional<Reason> failure_;
    std::optional<Scalar> r_;
    std::optional<GroupElement> shared_base_;  // pk_p * R_p
    std::optional<SessionKey> key_;
    bool identity_verified_ = false;
    OpCounts ops_;
};

// The physical entity P: challenger, Schnorr verifier and identity prover.
class EntitySession {
public:
    EntitySession(const Group& group, EntityKeys keys, GroupElement pk_d, Digest zeta);

    // nullopt when alpha is the identity element (session fails with
    // DegenerateCommitment).
    std::optional<Challenge> challenge(const Commit& commit, Rng& rng);
    std::optional<Challenge> challenge_with_nonce(const Commit& commit, ByteView nonce);
    bool verify_response(const Response& resp);
    // Draws r_p from [1, q) with h_sp + r_p != 0, so neither R_p nor the
    // shared point is the identity.
    IdentityProof identity_proof(Rng& rng);
    IdentityProof identity_proof_with(const Scalar& r_p);
    SessionKey derive_key();

    // On a valid Response this emits the IdentityProof and derives the key in
    // one step (there is no key-confirmation round).
    std::optional<Message> receive(const Message& m, Rng& rng);
    void fail(Reason reason);
    void timeout();

    Phase phase() const { return phase_; }
    std::optional<Reason> failure() const { return failure_; }
    bool schnorr_verified() const { return schnorr_verified_; }
    bool confirmed() const { return confirmed_; }
    bool ephemeral_erased() const { return !r_p_.has_value(); }
    const std::optional<SessionKey>& key() const { return key_; }
    const OpCounts& ops() const { return ops_; }
    const std::optional<GroupElement>& alpha() const { return alpha_; }
    const std::optional<Scalar>& c() const { return c_; }
    const Group& group() const { return *group_; }

private:
    void require(Phase expected, std::string_view op) const;
    void erase_ephemerals();

    const Group* group_;
    EntityKeys keys_;
    GroupElement pk_d_;
    Digest zeta_;

    Phase phase_ = Phase::Idle;
    std::optional<Reason> failure_;
    std::optional<GroupElement> alpha_;
    std::optional<Scalar> c_;
    std::optional<Scalar> r_p_;
    std::optional<SessionKey> key_;
    bool schnorr_verified_ = false;
    bool confirmed_ = false;
    OpCounts ops_;
};

} // namespace przk::protocol

#endif
