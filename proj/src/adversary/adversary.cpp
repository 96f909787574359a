#include "przk/adversary.hpp"

#include <functional>
#include <stdexcept>

namespace przk::adversary {

using protocol::Challenge;
using protocol::Commit;
using protocol::IdentityProof;
using protocol::Message;
using protocol::MessageTag;
using protocol::Phase;
using protocol::Reason;
using protocol::Response;

std::string_view to_string(AdversaryKind k) {
    switch (k) {
    case AdversaryKind::Replay: return "replay";
    case AdversaryKind::ImpersonateTwin: return "impersonate_twin";
    case AdversaryKind::MitmTamper: return "mitm_tamper";
    case AdversaryKind::KciImpersonatePhysical: return "kci_impersonate_physical";
    }
    return "unknown";
}

AdversaryKind parse_adversary_kind(std::string_view name) {
    for (AdversaryKind k : kAllKinds) {
        if (to_string(k) == name) return k;
    }
    throw std::invalid_argument("unknown adversary kind '" + std::string(name) + "'");
}

AttackContext AttackContext::observer(const Group& group, GroupElement pk_p, GroupElement pk_d, Digest zeta,
                                      std::vector<protocol::Transcript> recorded) {
    AttackContext ctx(group, std::move(pk_p), std::move(pk_d), zeta);
    ctx.recorded_ = std::move(recorded);
    return ctx;
}

AttackContext AttackContext::key_compromise(const Group& group, GroupElement pk_p, GroupElement pk_d, Digest zeta,
                                            Scalar sk_d) {
    AttackContext ctx(group, std::move(pk_p), std::move(pk_d), zeta);
    ctx.sk_d_ = std::move(sk_d);
    return ctx;
}

namespace {

std::optional<Message> try_decode(const Group& group, ByteView frame) {
    try {
        return protocol::decode(group, frame);
    } catch (const DecodeError&) {
        return std::nullopt;
    }
}

// Forwards to an honest endpoint and remembers the delivery index at which
// its session first reached KeyEstablished.
class Probe final : public protocol::Endpoint {
public:
    Probe(protocol::Endpoint& inner, std::size_t& clock, std::function<bool()> established)
        : inner_(&inner), clock_(&clock), established_(std::move(established)) {}

    std::vector<Bytes> start(double now) override { return inner_->start(now); }
    std::vector<Bytes> receive(ByteView frame, double now) override {
        const std::size_t index = (*clock_)++;
        auto out = inner_->receive(frame, now);
        if (!established_at_ && established_()) established_at_ = index;
        return out;
    }
    void timeout(double now) override { inner_->timeout(now); }
    bool finished() const override { return inner_->finished(); }

    std::optional<std::size_t> established_at() const { return established_at_; }

private:
    protocol::Endpoint* inner_;
    std::size_t* clock_;
    std::function<bool()> established_;
    std::optional<std::size_t> established_at_;
};

// Whether a flipped bit lands in authentication material (the frame header,
// alpha, c, z or h_sp) rather than R_p or the closing Verdict.
bool hits_credential(MessageTag tag, std::size_t bit, std::size_t scalar_size) {
    const std::size_t offset = bit / 8;
    if (offset < 5) return true;
    const std::size_t payload_offset = offset - 5;
    switch (tag) {
    case MessageTag::Verdict: return false;
    case MessageTag::IdentityProof: return payload_offset < scalar_size;
    default: return true;
    }
}

Reason reason_of(const std::optional<Reason>& r) { return r.value_or(Reason::Ok); }

} // namespace

// ---------------------------------------------------------------------------

ReplayTwin::ReplayTwin(const Group& group, protocol::Transcript recorded)
    : group_(&group), recorded_(std::move(recorded)) {
    if (!recorded_.alpha || !recorded_.z) throw std::invalid_argument("replay needs a transcript with alpha and z");
}

std::vector<Bytes> ReplayTwin::start(double) { return {protocol::encode(Commit{*recorded_.alpha})}; }

std::vector<Bytes> ReplayTwin::receive(ByteView frame, double) {
    auto m = try_decode(*group_, frame);
    if (answered_ || !m || !std::holds_alternative<Challenge>(*m)) return {};
    answered_ = true;
    return {protocol::encode(Response{*recorded_.z})};
}

std::vector<Bytes> BlindTwin::start(double) {
    return {protocol::encode(Commit{group_->exp_g(group_->random_nonzero_scalar(rng_))})};
}

std::vector<Bytes> BlindTwin::receive(ByteView frame, double) {
    auto m = try_decode(*group_, frame);
    if (answered_ || !m || !std::holds_alternative<Challenge>(*m)) return {};
    answered_ = true;
    return {protocol::encode(Response{group_->random_scalar(rng_)})};
}

KciEntity::KciEntity(const AttackContext& ctx, Rng rng) : ctx_(&ctx), rng_(std::move(rng)) {
    if (!ctx.compromised_sk_d()) throw std::invalid_argument("KCI attacker needs a compromised sk_d");
}

std::vector<Bytes> KciEntity::receive(ByteView frame, double) {
    const Group& group = ctx_->group();
    auto m = try_decode(group, frame);
    if (!m) return {};
    if (const auto* cm = std::get_if<Commit>(&*m); cm && !challenged_) {
        challenged_ = true;
        std::array<std::uint8_t, protocol::kChallengeNonceSize> nonce{};
        rng_.fill(nonce);
        return {protocol::encode(Challenge{protocol::interactive_challenge(group, cm->alpha, ctx_->zeta(), nonce)})};
    }
    if (std::holds_alternative<Response>(*m) && challenged_ && !proved_) {
        proved_ = true;
        const Scalar guess = group.random_scalar(rng_);
        // Avoid the one R_p that D rejects as degenerate whatever h_sp is.
        do {
            r_pub_ = group.exp_g(group.random_nonzero_scalar(rng_));
        } while (group.is_identity(group.mul(ctx_->pk_p(), *r_pub_)));
        return {protocol::encode(IdentityProof{guess, *r_pub_})};
    }
    if (const auto* v = std::get_if<protocol::Verdict>(&*m); v && v->accept && proved_) {
        // D accepted: the attacker can now compute K_pd with sk_d alone.
        const GroupElement shared = group.exp(group.mul(ctx_->pk_p(), *r_pub_), *ctx_->compromised_sk_d());
        forged_key_ = protocol::session_key_from_point(shared, ctx_->zeta());
    }
    return {};
}

bool BitFlipper::operator()(std::size_t seq, protocol::Role, Bytes& frame) {
    if (seq != target_seq_ || frame.empty()) return false;
    const std::size_t bits = frame.size() * 8;
    const std::size_t bit = fixed_bit_ ? *fixed_bit_ % bits : rng_.below(bits);
    original_tag_ = static_cast<MessageTag>(frame[0]);
    frame[bit / 8] ^= static_cast<std::uint8_t>(0x80u >> (bit % 8));
    flipped_bit_ = bit;
    return true;
}

// ---------------------------------------------------------------------------

AttackOutcome attack_replay(const AttackContext& ctx, protocol::EntityEndpoint& target,
                            const sim::LatencyFn& latency) {
    if (ctx.recorded().empty()) throw std::invalid_argument("replay attack needs a recorded transcript");
    ReplayTwin attacker(ctx.group(), ctx.recorded().back());
    AttackOutcome out;
    out.kind = AdversaryKind::Replay;
    out.log = sim::run_channel(attacker, target, latency);
    out.accepted = target.session().schnorr_verified();
    out.reason = reason_of(target.session().failure());
    out.decided_at_ms = target.decided_at().value_or(out.log.end_ms);
    out.entity_ops = target.session().ops();
    return out;
}

AttackOutcome attack_impersonate_twin(const AttackContext& ctx, Rng& rng, protocol::EntityEndpoint& target,
                                      const sim::LatencyFn& latency) {
    BlindTwin attacker(ctx.group(), Rng({rng.next(), rng.next()}));
    AttackOutcome out;
    out.kind = AdversaryKind::ImpersonateTwin;
    out.log = sim::run_channel(attacker, target, latency);
    out.accepted = target.session().schnorr_verified();
    out.reason = reason_of(target.session().failure());
    out.decided_at_ms = target.decided_at().value_or(out.log.end_ms);
    out.entity_ops = target.session().ops();
    return out;
}

namespace {

AttackOutcome run_mitm(BitFlipper& flipper, protocol::TwinEndpoint& twin, protocol::EntityEndpoint& entity,
                       const sim::LatencyFn& latency) {
    std::size_t clock = 0;
    Probe twin_probe(twin, clock, [&twin] { return twin.session().phase() == Phase::KeyEstablished; });
    Probe entity_probe(entity, clock, [&entity] { return entity.session().phase() == Phase::KeyEstablished; });

    AttackOutcome out;
    out.kind = AdversaryKind::MitmTamper;
    out.log = sim::run_channel(twin_probe, entity_probe, latency, std::ref(flipper));

    for (std::size_t i = 0; i < out.log.deliveries.size(); ++i) {
        const sim::Delivery& d = out.log.deliveries[i];
        if (!d.tampered) continue;
        const bool credential =
            hits_credential(*flipper.original_tag(), *flipper.flipped_bit(), twin.session().group().scalar_size());
        auto after = [i](const Probe& p) { return p.established_at() && *p.established_at() >= i; };
        out.accepted = credential && (after(twin_probe) || after(entity_probe));
        const auto& receiver_failure =
            d.to == protocol::Role::Twin ? twin.session().failure() : entity.session().failure();
        out.reason = reason_of(receiver_failure);
        out.detail = "flipped bit " + std::to_string(*flipper.flipped_bit()) + " of " +
                     std::string(protocol::to_string(*flipper.original_tag())) +
                     (credential ? " (credential)" : " (non-credential)");
    }

    const auto& kt = twin.session().key();
    const auto& ke = entity.session().key();
    out.keys_agree = kt && ke && *kt == *ke;
    out.decided_at_ms = twin.decided_at().value_or(out.log.end_ms);
    out.twin_ops = twin.session().ops();
    out.entity_ops = entity.session().ops();
    return out;
}

} // namespace

AttackOutcome attack_mitm_tamper(Rng& rng, protocol::TwinEndpoint& twin, protocol::EntityEndpoint& entity,
                                 const sim::LatencyFn& latency) {
    const std::size_t slot = rng.below(kHonestMessageCount);
    BitFlipper flipper(slot, Rng({rng.next(), rng.next()}));
    return run_mitm(flipper, twin, entity, latency);
}

AttackOutcome attack_mitm_tamper_at(std::size_t target_seq, std::size_t bit, protocol::TwinEndpoint& twin,
                                    protocol::EntityEndpoint& entity, const sim::LatencyFn& latency) {
    BitFlipper flipper(target_seq, bit);
    return run_mitm(flipper, twin, entity, latency);
}

AttackOutcome attack_kci(const AttackContext& ctx, Rng& rng, protocol::TwinEndpoint& target,
                         const sim::LatencyFn& latency) {
    KciEntity attacker(ctx, Rng({rng.next(), rng.next()}));
    AttackOutcome out;
    out.kind = AdversaryKind::KciImpersonatePhysical;
    out.log = sim::run_channel(target, attacker, latency);
    out.accepted = target.session().identity_verified();
    out.reason = reason_of(target.session().failure());
    out.decided_at_ms = target.decided_at().value_or(out.log.end_ms);
    out.twin_ops = target.session().ops();
    return out;
}

} // namespace przk::adversary
