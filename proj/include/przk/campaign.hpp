#ifndef PRZK_CAMPAIGN_HPP
#define PRZK_CAMPAIGN_HPP

#include "przk/adversary.hpp"
#include "przk/group.hpp"
#include "przk/identity.hpp"
#include "przk/registration.hpp"
#include "przk/session.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace przk::sim {

using adversary::AdversaryKind;
using protocol::OpCounts;

class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class SessionError : public std::runtime_error {
public:
    SessionError(std::size_t index, const std::string& what)
        : std::runtime_error("session " + std::to_string(index) + ": " + what), index_(index) {}
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

// Relative cost per operation class.
struct EnergyWeights {
    double group_exp = 10.0;
    double group_mul = 1.0;
    double hash = 1.0;
    friend bool operator==(const EnergyWeights&, const EnergyWeights&) = default;
};

struct CampaignConfig {
    std::size_t sessions = 5000;
    double adv_ratio = 0.1;
    // Weights in kAllKinds order: replay, impersonate_twin, mitm_tamper, kci.
    std::array<double, 4> adversary_mix{1.0, 1.0, 1.0, 1.0};
    double latency_low_ms = 10.0;
    double latency_high_ms = 20.0;
    GroupId group = GroupId::P256;
    std::uint64_t rng_seed = 42;
    EnergyWeights energy_weights;

    // Throws ConfigError naming the offending field.
    void validate() const;
    friend bool operator==(const CampaignConfig&, const CampaignConfig&) = default;
};

enum class SessionKind : std::uint8_t { Honest, Replay, ImpersonateTwin, MitmTamper, KciImpersonatePhysical };

std::string_view to_string(SessionKind k);
SessionKind parse_session_kind(std::string_view name);
SessionKind session_kind(AdversaryKind k);

struct SessionMetrics {
    std::size_t index = 0;
    SessionKind kind = SessionKind::Honest;
    bool accepted = false;
    protocol::Reason reason = protocol::Reason::Ok;
    // Virtual time until the authenticating verifier decided.
    double auth_latency_ms = 0;
    // Virtual time until both keys exist and D's accepting verdict reached P.
    std::optional<double> key_establish_ms;
    std::optional<bool> keys_agree;
    OpCounts entity_ops;
    OpCounts twin_ops;

    friend bool operator==(const SessionMetrics&, const SessionMetrics&) = default;
};

struct KindTally {
    std::uint64_t attempted = 0;
    std::uint64_t accepted = 0;
    friend bool operator==(const KindTally&, const KindTally&) = default;
};

struct Aggregates {
    std::uint64_t honest_sessions = 0;
    std::uint64_t adversarial_sessions = 0;
    std::uint64_t honest_accepted = 0;
    std::optional<double> honest_acceptance;
    std::uint64_t key_agreements = 0;
    std::uint64_t adversarial_accepted = 0;
    std::optional<double> far;
    std::map<std::string, KindTally> per_kind;  // adversary kinds only
    std::optional<double> mean_auth_latency_ms;
    std::optional<double> p95_auth_latency_ms;
    std::optional<double> mean_key_establish_ms;
    OpCounts total_ops;
    double energy_proxy = 0;

    friend bool operator==(const Aggregates&, const Aggregates&) = default;
};

struct CampaignReport {
    CampaignConfig config;
    std::vector<SessionMetrics> sessions;
    Aggregates aggregates;
};

// Keys and binding shared read-only by every session of a campaign. Built
// once, through the CA registry, before any session runs.
struct CampaignEnvironment {
    const Group* group = nullptr;
    EntityKeys entity;
    TwinKeyPair twin;
    BindingRecord binding;

    static CampaignEnvironment provision(const CampaignConfig& config, Registry& registry);
};

double energy_proxy(const OpCounts& ops, const EnergyWeights& weights);

// Kind of each session index: the first ceil(sessions * adv_ratio) indices of
// a seeded shuffle are adversarial, split across kinds by largest-remainder
// apportionment of adversary_mix.
std::vector<SessionKind> allocate_kinds(const CampaignConfig& config);

// One session. Every random stream is derived from (rng_seed, index), so
// the result does not depend on which thread runs it or in what order.
SessionMetrics run_session(const CampaignEnvironment& env, const CampaignConfig& config, SessionKind kind,
                           std::size_t index);

Aggregates aggregate(const CampaignConfig& config, const std::vector<SessionMetrics>& sessions);

std::optional<double> far(const CampaignReport& report);

// Reference implementation: sessions run one after another.
CampaignReport run_campaign_serial(const CampaignConfig& config);
// OpenMP over sessions; threads <= 0 uses the OpenMP default. Produces a
// report identical to run_campaign_serial.
CampaignReport run_campaign_parallel(const CampaignConfig& config, int threads = 0);
// threads == 1 runs the serial reference.
CampaignReport run_campaign(const CampaignConfig& config, int threads = 1);

} // namespace przk::sim

#endif
