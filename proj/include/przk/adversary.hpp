#ifndef PRZK_ADVERSARY_HPP
#define PRZK_ADVERSARY_HPP

#include "przk/channel.hpp"
#include "przk/endpoint.hpp"
#include "przk/proof.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace przk::adversary {

enum class AdversaryKind : std::uint8_t { Replay, ImpersonateTwin, MitmTamper, KciImpersonatePhysical };

inline constexpr std::array<AdversaryKind, 4> kAllKinds = {
    AdversaryKind::Replay, AdversaryKind::ImpersonateTwin, AdversaryKind::MitmTamper,
    AdversaryKind::KciImpersonatePhysical};

std::string_view to_string(AdversaryKind k);
AdversaryKind parse_adversary_kind(std::string_view name);

// What an attacker knows. Built only through the two factories, so S_p, r
// and r_p can never be in here, and sk_d only for key-compromise attacks.
class AttackContext {
public:
    static AttackContext observer(const Group& group, GroupElement pk_p, GroupElement pk_d, Digest zeta,
                                  std::vector<protocol::Transcript> recorded);
    // KCI attacker: holds sk_d but has never seen an IdentityProof.
    static AttackContext key_compromise(const Group& group, GroupElement pk_p, GroupElement pk_d, Digest zeta,
                                        Scalar sk_d);

    const Group& group() const { return *group_; }
    const GroupElement& pk_p() const { return pk_p_; }
    const GroupElement& pk_d() const { return pk_d_; }
    const Digest& zeta() const { return zeta_; }
    const std::vector<protocol::Transcript>& recorded() const { return recorded_; }
    const std::optional<Scalar>& compromised_sk_d() const { return sk_d_; }

private:
    AttackContext(const Group& group, GroupElement pk_p, GroupElement pk_d, Digest zeta)
        : group_(&group), pk_p_(std::move(pk_p)), pk_d_(std::move(pk_d)), zeta_(zeta) {}

    const Group* group_;
    GroupElement pk_p_;
    GroupElement pk_d_;
    Digest zeta_;
    std::vector<protocol::Transcript> recorded_;
    std::optional<Scalar> sk_d_;
};

struct AttackOutcome {
    AdversaryKind kind = AdversaryKind::Replay;
    // A replayed, forged or tampered credential got an honest party to
    // KeyEstablished.
    bool accepted = false;
    // Failure reason reported by the targeted party (Ok when it accepted).
    protocol::Reason reason = protocol::Reason::Ok;
    // MITM only: whether the two honest parties ended with equal keys.
    std::optional<bool> keys_agree;
    // Virtual time at which the targeted verifier decided.
    double decided_at_ms = 0;
    protocol::OpCounts twin_ops;
    protocol::OpCounts entity_ops;
    sim::ChannelLog log;
    std::string detail;
};

// --- strategy endpoints ------------------------------------------------------

// Plays D: replays a recorded commitment and answers whatever challenge comes
// back with the recorded response.
class ReplayTwin final : public protocol::Endpoint {
public:
    ReplayTwin(const Group& group, protocol::Transcript recorded);
    std::vector<Bytes> start(double now) override;
    std::vector<Bytes> receive(ByteView frame, double now) override;
    bool finished() const override { return true; }

private:
    const Group* group_;
    protocol::Transcript recorded_;
    bool answered_ = false;
};

// Plays D without sk_d: random commitment, uniformly random response.
class BlindTwin final : public protocol::Endpoint {
public:
    BlindTwin(const Group& group, Rng rng) : group_(&group), rng_(std::move(rng)) {}
    std::vector<Bytes> start(double now) override;
    std::vector<Bytes> receive(ByteView frame, double now) override;
    bool finished() const override { return true; }

private:
    const Group* group_;
    Rng rng_;
    bool answered_ = false;
};

// Plays P knowing sk_d but not S_p: issues a challenge, then guesses h_sp
// uniformly from Z_q. If D accepts, computes the session key from sk_d.
class KciEntity final : public protocol::Endpoint {
public:
    KciEntity(const AttackContext& ctx, Rng rng);
    std::vector<Bytes> receive(ByteView frame, double now) override;
    bool finished() const override { return true; }

    const std::optional<protocol::SessionKey>& forged_key() const { return forged_key_; }

private:
    const AttackContext* ctx_;
    Rng rng_;
    bool challenged_ = false;
    bool proved_ = false;
    std::optional<GroupElement> r_pub_;
    std::optional<protocol::SessionKey> forged_key_;
};

// Flips one uniformly chosen bit of the message in slot `target_seq`.
class BitFlipper {
public:
    BitFlipper(std::size_t target_seq, Rng rng) : target_seq_(target_seq), rng_(std::move(rng)) {}
    // Fixed bit, for exhaustive tests.
    BitFlipper(std::size_t target_seq, std::size_t bit) : target_seq_(target_seq), fixed_bit_(bit), rng_(0) {}

    bool operator()(std::size_t seq, protocol::Role from, Bytes& frame);

    std::optional<std::size_t> flipped_bit() const { return flipped_bit_; }
    std::optional<protocol::MessageTag> original_tag() const { return original_tag_; }

private:
    std::size_t target_seq_;
    std::optional<std::size_t> fixed_bit_;
    Rng rng_;
    std::optional<std::size_t> flipped_bit_;
    std::optional<protocol::MessageTag> original_tag_;
};

// Messages in an honest run: Commit, Challenge, Response, IdentityProof, Verdict.
inline constexpr std::size_t kHonestMessageCount = 5;

// --- attacks -----------------------------------------------------------------

// Throws std::invalid_argument if ctx has no recorded transcript.
AttackOutcome attack_replay(const AttackContext& ctx, protocol::EntityEndpoint& target,
                            const sim::LatencyFn& latency);
AttackOutcome attack_impersonate_twin(const AttackContext& ctx, Rng& rng, protocol::EntityEndpoint& target,
                                      const sim::LatencyFn& latency);
// Tampers with one message of an otherwise honest session.
AttackOutcome attack_mitm_tamper(Rng& rng, protocol::TwinEndpoint& twin, protocol::EntityEndpoint& entity,
                                 const sim::LatencyFn& latency);
AttackOutcome attack_mitm_tamper_at(std::size_t target_seq, std::size_t bit, protocol::TwinEndpoint& twin,
                                    protocol::EntityEndpoint& entity, const sim::LatencyFn& latency);
// Throws std::invalid_argument if ctx carries no compromised sk_d.
AttackOutcome attack_kci(const AttackContext& ctx, Rng& rng, protocol::TwinEndpoint& target,
                         const sim::LatencyFn& latency);

} // namespace przk::adversary

#endif
