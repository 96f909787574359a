#include "przk/session.hpp"

#include <string>
#include <type_traits>

namespace przk::protocol {

std::string_view to_string(Phase p) {
    switch (p) {
    case Phase::Idle: return "Idle";
    case Phase::CommitmentSent: return "CommitmentSent";
    case Phase::Challenged: return "Challenged";
    case Phase::ResponseSent: return "ResponseSent";
    case Phase::ResponseReceived: return "ResponseReceived";
    case Phase::IdentitySent: return "IdentitySent";
    case Phase::IdentityVerified: return "IdentityVerified";
    case Phase::KeyEstablished: return "KeyEstablished";
    case Phase::Failed: return "Failed";
    }
    return "Unknown";
}

Scalar interactive_challenge(const Group& group, const GroupElement& alpha, const Digest& zeta, ByteView nonce) {
    return h1(group, {alpha.bytes(), zeta, nonce});
}

Scalar schnorr_response(const Group& group, const Scalar& r, const Scalar& c, const Scalar& sk) {
    return group.add(r, group.mul(c, sk));
}

bool schnorr_holds(const Group& group, const GroupElement& alpha, const Scalar& c, const Scalar& z,
                   const GroupElement& pk) {
    return group.exp_g(z) == group.mul(alpha, group.exp(pk, c));
}

SessionKey session_key_from_point(const GroupElement& shared, const Digest& zeta) {
    return SessionKey{h1_bytes({shared.bytes(), zeta})};
}

namespace {

[[noreturn]] void out_of_phase(std::string_view party, std::string_view op, Phase actual) {
    throw ProtocolError(std::string(party) + ": " + std::string(op) + " not allowed in phase " +
                        std::string(to_string(actual)));
}

Message reject(Reason reason) { return Verdict{false, reason}; }

} // namespace

// ---------------------------------------------------------------------------
// TwinSession

TwinSession::TwinSession(const Group& group, TwinKeyPair keys, GroupElement pk_p, Digest zeta)
    : group_(&group), keys_(std::move(keys)), pk_p_(std::move(pk_p)), zeta_(zeta) {}

void TwinSession::require(Phase expected, std::string_view op) const {
    if (phase_ != expected) out_of_phase("twin", op, phase_);
}

void TwinSession::erase_ephemerals() {
    r_.reset();
    shared_base_.reset();
}

void TwinSession::fail(Reason reason) {
    if (phase_ == Phase::Failed) return;
    phase_ = Phase::Failed;
    failure_ = reason;
    key_.reset();
    erase_ephemerals();
}

void TwinSession::timeout() {
    if (phase_ != Phase::Failed && phase_ != Phase::KeyEstablished) fail(Reason::Timeout);
}

Commit TwinSession::commit(Rng& rng) {
    require(Phase::Idle, "commit");
    return commit_with_nonce(group_->random_nonzero_scalar(rng));
}

Commit TwinSession::commit_with_nonce(const Scalar& r) {
    require(Phase::Idle, "commit");
    ++ops_.group_exp;
    GroupElement alpha = group_->exp_g(r);
    r_ = r;
    phase_ = Phase::CommitmentSent;
    return Commit{std::move(alpha)};
}

Response TwinSession::respond(const Challenge& ch) {
    require(Phase::CommitmentSent, "respond");
    Scalar z = schnorr_response(*group_, *r_, ch.c, keys_.sk_d);
    r_.reset();
    phase_ = Phase::ResponseSent;
    return Response{std::move(z)};
}

bool TwinSession::verify_identity(const IdentityProof& proof) {
    require(Phase::ResponseSent, "verify_identity");
    if (group_->is_zero(proof.h_sp)) {
        fail(Reason::BadIdentity);
        return false;
    }
    ++ops_.group_exp;
    if (group_->exp_g(proof.h_sp) != pk_p_) {
        fail(Reason::BadIdentity);
        return false;
    }
    ++ops_.group_mul;
    GroupElement base = group_->mul(pk_p_, proof.r_p_pub);
    if (group_->is_identity(proof.r_p_pub) || group_->is_identity(base)) {
        fail(Reason::DegenerateCommitment);
        return false;
    }
    shared_base_ = std::move(base);
    identity_verified_ = true;
    phase_ = Phase::IdentityVerified;
    return true;
}

SessionKey TwinSession::derive_key() {
    require(Phase::IdentityVerified, "derive_key");
    ++ops_.group_exp;
    const GroupElement shared = group_->exp(*shared_base_, keys_.sk_d);
    ++ops_.hash;
    key_ = session_key_from_point(shared, zeta_);
    phase_ = Phase::KeyEstablished;
    erase_ephemerals();
    return *key_;
}

std::optional<Message> TwinSession::receive(const Message& m) {
    if (phase_ == Phase::Failed) return std::nullopt;

    if (const auto* v = std::get_if<Verdict>(&m)) {
        if (!v->accept) {
            fail(v->reason);
            return std::nullopt;
        }
    } else if (const auto* ch = std::get_if<Challenge>(&m); ch && phase_ == Phase::CommitmentSent) {
        return respond(*ch);
    } else if (const auto* ip = std::get_if<IdentityProof>(&m); ip && phase_ == Phase::ResponseSent) {
        if (!verify_identity(*ip)) return reject(*failure_);
        derive_key();
        return Verdict{true, Reason::Ok};
    }
    fail(Reason::OutOfOrder);
    return reject(Reason::OutOfOrder);
}

// ---------------------------------------------------------------------------
// EntitySession

EntitySession::EntitySession(const Group& group, EntityKeys keys, GroupElement pk_d, Digest zeta)
    : group_(&group), keys_(std::move(keys)), pk_d_(std::move(pk_d)), zeta_(zeta) {}

void EntitySession::require(Phase expected, std::string_view op) const {
    if (phase_ != expected) out_of_phase("entity", op, phase_);
}

void EntitySession::erase_ephemerals() { r_p_.reset(); }

void EntitySession::fail(Reason reason) {
    if (phase_ == Phase::Failed) return;
    phase_ = Phase::Failed;
    failure_ = reason;
    key_.reset();
    erase_ephemerals();
}

void EntitySession::timeout() {
    if (phase_ != Phase::Failed && phase_ != Phase::KeyEstablished) fail(Reason::Timeout);
}

std::optional<Challenge> EntitySession::challenge(const Commit& commit, Rng& rng) {
    require(Phase::Idle, "challenge");
    std::array<std::uint8_t, kChallengeNonceSize> nonce{};
    rng.fill(nonce);
    return challenge_with_nonce(commit, nonce);
}

std::optional<Challenge> EntitySession::challenge_with_nonce(const Commit& commit, ByteView nonce) {
    require(Phase::Idle, "challenge");
    if (group_->is_identity(commit.alpha)) {
        fail(Reason::DegenerateCommitment);
        return std::nullopt;
    }
    ++ops_.hash;
    alpha_ = commit.alpha;
    c_ = interactive_challenge(*group_, commit.alpha, zeta_, nonce);
    phase_ = Phase::Challenged;
    return Challenge{*c_};
}

bool EntitySession::verify_response(const Response& resp) {
    require(Phase::Challenged, "verify_response");
    ops_.group_exp += 2;
    ++ops_.group_mul;
    if (!schnorr_holds(*group_, *alpha_, *c_, resp.z, pk_d_)) {
        fail(Reason::BadProof);
        return false;
    }
    schnorr_verified_ = true;
    phase_ = Phase::ResponseReceived;
    return true;
}

IdentityProof EntitySession::identity_proof(Rng& rng) {
    require(Phase::ResponseReceived, "identity_proof");
    for (;;) {
        Scalar r_p = group_->random_nonzero_scalar(rng);
        if (!group_->is_zero(group_->add(keys_.h_sp, r_p))) return identity_proof_with(r_p);
    }
}

IdentityProof EntitySession::identity_proof_with(const Scalar& r_p) {
    require(Phase::ResponseReceived, "identity_proof");
    ++ops_.group_exp;
    GroupElement r_p_pub = group_->exp_g(r_p);
    r_p_ = r_p;
    phase_ = Phase::IdentitySent;
    return IdentityProof{keys_.h_sp, std::move(r_p_pub)};
}

SessionKey EntitySession::derive_key() {
    require(Phase::IdentitySent, "derive_key");
    // (pk_p * g^r_p)^sk_d == pk_d^(h_sp + r_p)
    ++ops_.group_exp;
    const GroupElement shared = group_->exp(pk_d_, group_->add(keys_.h_sp, *r_p_));
    ++ops_.hash;
    key_ = session_key_from_point(shared, zeta_);
    phase_ = Phase::KeyEstablished;
    erase_ephemerals();
    return *key_;
}

std::optional<Message> EntitySession::receive(const Message& m, Rng& rng) {
    if (phase_ == Phase::Failed) return std::nullopt;

    if (const auto* v = std::get_if<Verdict>(&m)) {
        if (!v->accept) {
            fail(v->reason);
            return std::nullopt;
        }
        if (phase_ == Phase::KeyEstablished && !confirmed_) {
            confirmed_ = true;
            return std::nullopt;
        }
    } else if (const auto* cm = std::get_if<Commit>(&m); cm && phase_ == Phase::Idle) {
        auto ch = challenge(*cm, rng);
        if (!ch) return reject(*failure_);
        return *ch;
    } else if (const auto* resp = std::get_if<Response>(&m); resp && phase_ == Phase::Challenged) {
        if (!verify_response(*resp)) return reject(*failure_);
        IdentityProof proof = identity_proof(rng);
        derive_key();
        return proof;
    }
    fail(Reason::OutOfOrder);
    return reject(Reason::OutOfOrder);
}

} // namespace przk::protocol
