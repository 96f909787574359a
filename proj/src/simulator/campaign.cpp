#include "przk/campaign.hpp"

#include "przk/channel.hpp"
#include "przk/endpoint.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace przk::sim {

using protocol::EntityEndpoint;
using protocol::EntitySession;
using protocol::Phase;
using protocol::TwinEndpoint;
using protocol::TwinSession;

namespace {

// Independent random streams per session.
enum Stream : std::uint64_t {
    kNetwork = 1,
    kTwin = 2,
    kEntity = 3,
    kAdversary = 4,
    kEavesdropTwin = 5,
    kEavesdropEntity = 6,
    kAllocation = 100,
    kProvisionTwin = 101,
};

constexpr std::uint64_t kBindingTimestamp = 1700000000;

Rng stream(const CampaignConfig& config, std::size_t index, Stream s) {
    return Rng({config.rng_seed, static_cast<std::uint64_t>(index), static_cast<std::uint64_t>(s)});
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

} // namespace

void CampaignConfig::validate() const {
    if (sessions < 1) throw ConfigError("sessions", "must be at least 1");
    if (!std::isfinite(adv_ratio) || adv_ratio < 0.0 || adv_ratio > 1.0) {
        throw ConfigError("adv_ratio", "must be in [0, 1]");
    }
    if (!finite_nonneg(latency_low_ms) || !finite_nonneg(latency_high_ms)) {
        throw ConfigError("latency_range_ms", "bounds must be finite and nonnegative");
    }
    if (latency_low_ms > latency_high_ms) throw ConfigError("latency_range_ms", "low must not exceed high");
    double total = 0;
    for (double w : adversary_mix) {
        if (!finite_nonneg(w)) throw ConfigError("adversary_mix", "weights must be finite and nonnegative");
        total += w;
    }
    if (adv_ratio > 0.0 && total <= 0.0) throw ConfigError("adversary_mix", "weights must not all be zero");
    if (!finite_nonneg(energy_weights.group_exp) || !finite_nonneg(energy_weights.group_mul) ||
        !finite_nonneg(energy_weights.hash)) {
        throw ConfigError("energy_weights", "weights must be finite and nonnegative");
    }
}

std::string_view to_string(SessionKind k) {
    switch (k) {
    case SessionKind::Honest: return "honest";
    case SessionKind::Replay: return adversary::to_string(AdversaryKind::Replay);
    case SessionKind::ImpersonateTwin: return adversary::to_string(AdversaryKind::ImpersonateTwin);
    case SessionKind::MitmTamper: return adversary::to_string(AdversaryKind::MitmTamper);
    case SessionKind::KciImpersonatePhysical: return adversary::to_string(AdversaryKind::KciImpersonatePhysical);
    }
    return "unknown";
}

SessionKind parse_session_kind(std::string_view name) {
    if (name == "honest") return SessionKind::Honest;
    return session_kind(adversary::parse_adversary_kind(name));
}

SessionKind session_kind(AdversaryKind k) {
    return static_cast<SessionKind>(static_cast<std::uint8_t>(k) + 1);
}

CampaignEnvironment CampaignEnvironment::provision(const CampaignConfig& config, Registry& registry) {
    CampaignEnvironment env;
    env.group = &group_for(config.group);
    const auto identity = PhysicalIdentity::provision("przk-campaign-entity-" + std::to_string(config.rng_seed));
    env.entity = EntityKeys::derive(*env.group, identity);
    Rng twin_rng = stream(config, 0, kProvisionTwin);
    env.twin = TwinKeyPair::generate(*env.group, twin_rng);
    env.binding = registry.register_binding(env.entity.pk_p, env.twin.pk_d, kBindingTimestamp);
    // Each party recomputes zeta before first use.
    if (!verify_record(env.binding)) throw RegistryError("CA issued an inconsistent binding record");
    return env;
}

double energy_proxy(const OpCounts& ops, const EnergyWeights& w) {
    return static_cast<double>(ops.group_exp) * w.group_exp + static_cast<double>(ops.group_mul) * w.group_mul +
           static_cast<double>(ops.hash) * w.hash;
}

std::vector<SessionKind> allocate_kinds(const CampaignConfig& config) {
    const std::size_t n = config.sessions;
    auto n_adv = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * config.adv_ratio - 1e-9));
    n_adv = std::min(n_adv, n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng = stream(config, 0, kAllocation);
    for (std::size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[rng.below(i)]);
    }

    // Largest-remainder apportionment; ties go to the earlier kind.
    std::array<std::size_t, 4> counts{};
    if (n_adv > 0) {
        const double total = std::accumulate(config.adversary_mix.begin(), config.adversary_mix.end(), 0.0);
        std::array<double, 4> remainder{};
        std::size_t assigned = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            const double quota = static_cast<double>(n_adv) * config.adversary_mix[k] / total;
            counts[k] = static_cast<std::size_t>(std::floor(quota));
            remainder[k] = quota - std::floor(quota);
            assigned += counts[k];
        }
        std::array<std::size_t, 4> by_remainder{0, 1, 2, 3};
        std::stable_sort(by_remainder.begin(), by_remainder.end(),
                         [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
        for (std::size_t i = 0; assigned < n_adv; ++i, ++assigned) ++counts[by_remainder[i % 4]];
    }

    std::vector<SessionKind> kinds(n, SessionKind::Honest);
    std::size_t pos = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t c = 0; c < counts[k]; ++c) kinds[order[pos++]] = session_kind(adversary::kAllKinds[k]);
    }
    return kinds;
}

SessionMetrics run_session(const CampaignEnvironment& env, const CampaignConfig& config, SessionKind kind,
                           std::size_t index) {
    const Group& g = *env.group;
    const Digest& zeta = env.binding.zeta;
    Rng net = stream(config, index, kNetwork);
    const LatencyFn latency = [&net, &config] { return net.uniform(config.latency_low_ms, config.latency_high_ms); };

    auto make_twin = [&](Stream s) {
        return TwinEndpoint(TwinSession(g, env.twin, env.entity.pk_p, zeta), stream(config, index, s));
    };
    auto make_entity = [&](Stream s) {
        return EntityEndpoint(EntitySession(g, env.entity, env.twin.pk_d, zeta), stream(config, index, s));
    };

    SessionMetrics m;
    m.index = index;
    m.kind = kind;

    auto from_outcome = [&m](const adversary::AttackOutcome& out) {
        m.accepted = out.accepted;
        m.reason = out.reason;
        m.auth_latency_ms = out.decided_at_ms;
        m.entity_ops = out.entity_ops;
        m.twin_ops = out.twin_ops;
    };

    Rng adv_rng = stream(config, index, kAdversary);
    switch (kind) {
    case SessionKind::Honest: {
        TwinEndpoint twin = make_twin(kTwin);
        EntityEndpoint entity = make_entity(kEntity);
        const ChannelLog log = run_channel(twin, entity, latency);
        const auto& d = twin.session();
        const auto& p = entity.session();
        m.accepted = d.phase() == Phase::KeyEstablished && p.phase() == Phase::KeyEstablished &&
                     d.identity_verified() && p.schnorr_verified();
        m.reason = d.failure().value_or(p.failure().value_or(protocol::Reason::Ok));
        m.auth_latency_ms = std::max(twin.decided_at().value_or(log.end_ms), entity.decided_at().value_or(log.end_ms));
        if (m.accepted && entity.confirmed_at()) m.key_establish_ms = *entity.confirmed_at();
        m.keys_agree = d.key() && p.key() && *d.key() == *p.key();
        m.entity_ops = p.ops();
        m.twin_ops = d.ops();
        break;
    }
    case SessionKind::Replay: {
        // The attacker first records a legitimate session between the pair.
        TwinEndpoint seen_twin = make_twin(kEavesdropTwin);
        EntityEndpoint seen_entity = make_entity(kEavesdropEntity);
        const ChannelLog seen = run_channel(seen_twin, seen_entity, zero_latency());
        const auto ctx = adversary::AttackContext::observer(g, env.entity.pk_p, env.twin.pk_d, zeta,
                                                            {transcript_of(g, seen)});
        EntityEndpoint target = make_entity(kEntity);
        from_outcome(adversary::attack_replay(ctx, target, latency));
        break;
    }
    case SessionKind::ImpersonateTwin: {
        const auto ctx = adversary::AttackContext::observer(g, env.entity.pk_p, env.twin.pk_d, zeta, {});
        EntityEndpoint target = make_entity(kEntity);
        from_outcome(adversary::attack_impersonate_twin(ctx, adv_rng, target, latency));
        break;
    }
    case SessionKind::MitmTamper: {
        TwinEndpoint twin = make_twin(kTwin);
        EntityEndpoint entity = make_entity(kEntity);
        const auto out = adversary::attack_mitm_tamper(adv_rng, twin, entity, latency);
        from_outcome(out);
        m.keys_agree = out.keys_agree;
        break;
    }
    case SessionKind::KciImpersonatePhysical: {
        const auto ctx =
            adversary::AttackContext::key_compromise(g, env.entity.pk_p, env.twin.pk_d, zeta, env.twin.sk_d);
        TwinEndpoint target = make_twin(kTwin);
        from_outcome(adversary::attack_kci(ctx, adv_rng, target, latency));
        break;
    }
    }
    return m;
}

namespace {

std::optional<double> mean(const std::vector<double>& xs) {
    if (xs.empty()) return std::nullopt;
    double sum = 0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

// Nearest-rank percentile.
std::optional<double> percentile(std::vector<double> xs, double pct) {
    if (xs.empty()) return std::nullopt;
    std::sort(xs.begin(), xs.end());
    auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(xs.size())));
    rank = std::clamp<std::size_t>(rank, 1, xs.size());
    return xs[rank - 1];
}

} // namespace

Aggregates aggregate(const CampaignConfig& config, const std::vector<SessionMetrics>& sessions) {
    Aggregates a;
    for (AdversaryKind k : adversary::kAllKinds) a.per_kind[std::string(adversary::to_string(k))] = {};

    std::vector<double> honest_latency;
    std::vector<double> key_times;
    for (const SessionMetrics& s : sessions) {
        a.total_ops += s.entity_ops;
        a.total_ops += s.twin_ops;
        if (s.key_establish_ms) key_times.push_back(*s.key_establish_ms);
        if (s.kind == SessionKind::Honest) {
            ++a.honest_sessions;
            if (s.accepted) ++a.honest_accepted;
            if (s.keys_agree.value_or(false)) ++a.key_agreements;
            honest_latency.push_back(s.auth_latency_ms);
        } else {
            ++a.adversarial_sessions;
            auto& tally = a.per_kind[std::string(to_string(s.kind))];
            ++tally.attempted;
            if (s.accepted) {
                ++tally.accepted;
                ++a.adversarial_accepted;
            }
        }
    }
    if (a.honest_sessions > 0) {
        a.honest_acceptance = static_cast<double>(a.honest_accepted) / static_cast<double>(a.honest_sessions);
    }
    if (a.adversarial_sessions > 0) {
        a.far = static_cast<double>(a.adversarial_accepted) / static_cast<double>(a.adversarial_sessions);
    }
    a.mean_auth_latency_ms = mean(honest_latency);
    a.p95_auth_latency_ms = percentile(honest_latency, 95.0);
    a.mean_key_establish_ms = mean(key_times);
    a.energy_proxy = energy_proxy(a.total_ops, config.energy_weights);
    return a;
}

std::optional<double> far(const CampaignReport& report) {
    std::uint64_t attempted = 0;
    std::uint64_t accepted = 0;
    for (const SessionMetrics& s : report.sessions) {
        if (s.kind == SessionKind::Honest) continue;
        ++attempted;
        if (s.accepted) ++accepted;
    }
    if (attempted == 0) return std::nullopt;
    return static_cast<double>(accepted) / static_cast<double>(attempted);
}

namespace {

struct Prepared {
    Registry registry;
    CampaignEnvironment env;
    std::vector<SessionKind> kinds;
};

Prepared prepare(const CampaignConfig& config) {
    config.validate();
    Registry registry(group_for(config.group));
    CampaignEnvironment env = CampaignEnvironment::provision(config, registry);
    // The CA goes away once provisioning is done.
    registry.seal();
    return {std::move(registry), std::move(env), allocate_kinds(config)};
}

CampaignReport finish(const CampaignConfig& config, const Prepared& prep, std::vector<SessionMetrics> sessions) {
    if (!prep.registry.sealed()) throw std::logic_error("registry was reopened during the session loop");
    CampaignReport report{config, std::move(sessions), {}};
    report.aggregates = aggregate(config, report.sessions);
    return report;
}

} // namespace

CampaignReport run_campaign_serial(const CampaignConfig& config) {
    Prepared prep = prepare(config);
    std::vector<SessionMetrics> sessions;
    sessions.reserve(config.sessions);
    for (std::size_t i = 0; i < config.sessions; ++i) {
        try {
            sessions.push_back(run_session(prep.env, config, prep.kinds[i], i));
        } catch (const std::exception& e) {
            throw SessionError(i, e.what());
        }
    }
    return finish(config, prep, std::move(sessions));
}

CampaignReport run_campaign_parallel(const CampaignConfig& config, int threads) {
    Prepared prep = prepare(config);
    const auto n = static_cast<std::ptrdiff_t>(config.sessions);
    std::vector<SessionMetrics> sessions(config.sessions);
    std::vector<std::string> errors(config.sessions);

#ifdef _OPENMP
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(nthreads)
#else
    (void)threads;
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            sessions[idx] = run_session(prep.env, config, prep.kinds[idx], idx);
        } catch (const std::exception& e) {
            errors[idx] = e.what();
            if (errors[idx].empty()) errors[idx] = "unknown error";
        }
    }

    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i].empty()) throw SessionError(i, errors[i]);
    }
    return finish(config, prep, std::move(sessions));
}

CampaignReport run_campaign(const CampaignConfig& config, int threads) {
    if (threads == 1) return run_campaign_serial(config);
    return run_campaign_parallel(config, threads);
}

} // namespace przk::sim
