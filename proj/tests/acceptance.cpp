// Acceptance runner: one PASS/FAIL line per criterion, exit status 0 only if
// all pass.

#include "cli.hpp"
#include "oracle.hpp"
#include "toy_suite.hpp"

#include "przk/campaign.hpp"
#include "przk/channel.hpp"
#include "przk/report.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <unistd.h>

using namespace przk;
using namespace przk::protocol;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Result {
    bool pass;
    std::string detail;
};

sim::CampaignConfig p256_campaign(std::size_t sessions, double adv_ratio) {
    sim::CampaignConfig c;
    c.sessions = sessions;
    c.adv_ratio = adv_ratio;
    c.group = GroupId::P256;
    return c;
}

Result completeness_at_scale() {
    const auto t0 = Clock::now();
    const auto r = sim::run_campaign_parallel(p256_campaign(5000, 0.0));
    const double secs = seconds_since(t0);
    const auto& a = r.aggregates;
    std::ostringstream d;
    d << a.honest_accepted << "/5000 accepted, " << a.key_agreements << "/5000 keys agree, " << secs << " s";
    return {a.honest_accepted == 5000 && a.key_agreements == 5000 && secs < 60.0, d.str()};
}

Result far_bound() {
    bool ok = true;
    std::ostringstream d;
    for (double ratio : {0.02, 0.1, 0.2, 0.4}) {
        const auto r = sim::run_campaign_parallel(p256_campaign(5000, ratio));
        const auto& a = r.aggregates;
        bool row_ok = a.far && *a.far == 0.0 && a.adversarial_accepted == 0;
        for (const auto& [kind, t] : a.per_kind) row_ok = row_ok && t.accepted == 0 && t.attempted > 0;
        if (ratio == 0.1) {
            row_ok = row_ok && a.honest_sessions == 4500 && a.adversarial_sessions == 500;
            for (const auto& [kind, t] : a.per_kind) row_ok = row_ok && t.attempted == 125;
        }
        ok = ok && row_ok;
        d << a.adversarial_accepted << "/" << a.adversarial_sessions << " ";
    }
    return {ok, "accepted/attempted: " + d.str()};
}

Result toy_exhaustive() {
    const auto t0 = Clock::now();
    const auto x = toy_suite::run_exhaustive();
    const double secs = seconds_since(t0);
    const bool ok = x.completeness_cases == 1210 && x.completeness_failures == 0 && x.extraction_cases == 12100 &&
                    x.extraction_failures == 0 && x.blind_attempts == 1331 && x.blind_accepts * 11 == x.blind_attempts &&
                    secs < 5.0;
    std::ostringstream d;
    d << x.completeness_cases << " completeness, " << x.extraction_cases << " extractions, blind " << x.blind_accepts
      << "/" << x.blind_attempts << ", " << secs << " s";
    return {ok, d.str()};
}

Result replay() {
    const auto x = toy_suite::run_exhaustive();
    sim::CampaignConfig c = p256_campaign(500, 1.0);
    c.adversary_mix = {1, 0, 0, 0};
    const auto r = sim::run_campaign_parallel(c);
    const auto& t = r.aggregates.per_kind.at("replay");
    std::ostringstream d;
    d << "toy " << x.replay_accepts << "/" << x.replay_cases << ", p256 " << t.accepted << "/" << t.attempted;
    return {x.replay_cases == 12100 && x.replay_accepts == 0 && t.attempted == 500 && t.accepted == 0, d.str()};
}

// Runs one session with a chosen r_p and checks both derivation forms
// against each other and against the keys the two parties hold.
bool derivation_paths_agree(const Group& g, Rng& rng) {
    const TwinKeyPair twin = TwinKeyPair::generate(g, rng);
    const Scalar h_sp = g.random_nonzero_scalar(rng);
    const EntityKeys entity = EntityKeys::from_hash(g, h_sp);
    Digest zeta;
    rng.fill(zeta);
    TwinSession d(g, twin, entity.pk_p, zeta);
    EntitySession p(g, entity, twin.pk_d, zeta);

    const Commit cm = d.commit(rng);
    const auto ch = p.challenge(cm, rng);
    if (!ch || !p.verify_response(d.respond(*ch))) return false;
    Scalar r_p = g.random_nonzero_scalar(rng);
    while (g.add(h_sp, r_p) == g.scalar(0)) r_p = g.random_nonzero_scalar(rng);
    const IdentityProof ip = p.identity_proof_with(r_p);
    const SessionKey kp = p.derive_key();
    if (!d.verify_identity(ip)) return false;
    const SessionKey kd = d.derive_key();

    const GroupElement d_form = g.exp(g.mul(entity.pk_p, ip.r_p_pub), twin.sk_d);
    const GroupElement p_form = g.exp(twin.pk_d, g.add(h_sp, r_p));
    return d_form == p_form && session_key_from_point(d_form, zeta) == kd && kd == kp;
}

Result key_derivation() {
    std::ostringstream d;
    bool ok = true;
    for (const Group* g : {static_cast<const Group*>(&toy_group()), &p256_group()}) {
        Rng rng(g->id() == GroupId::Toy ? 5 : 6);
        std::size_t agreed = 0;
        for (int i = 0; i < 1000; ++i) agreed += derivation_paths_agree(*g, rng) ? 1 : 0;
        ok = ok && agreed == 1000;
        d << to_string(g->id()) << " " << agreed << "/1000, ";
    }

    // pk_p = 13, R_p = 4, sk_d = 3: (13 * 4)^3 = 9 = 8^(7 + 2) mod 23.
    const auto& toy = toy_group();
    const bool forms = oracle::pow_mod(13 * 4 % oracle::kP, 3, oracle::kP) == 9 && oracle::pow_mod(8, 9, oracle::kP) == 9;
    const SessionKey k9 = session_key_from_point(toy.element(9), toy_suite::zeta());
    const bool vector = forms && to_hex(k9.k_pd) == oracle::kToyKey9;
    d << "toy vector " << (vector ? "matches" : "differs");
    return {ok && vector, d.str()};
}

Result determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("przk-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto run = [&](const std::string& tag, const std::string& threads) {
        std::ostringstream out, err;
        const std::vector<std::string> args{"simulate", "--sessions", "1000", "--adv-ratio", "0.2", "--seed", "2024",
                                            "--parallel", threads, "--json", (dir / (tag + ".json")).string(),
                                            "--csv", (dir / (tag + ".csv")).string()};
        return cli::run_cli(args, out, err) == cli::kOk;
    };
    auto slurp = [&](const std::string& tag) {
        std::ifstream in(dir / (tag + ".json"), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const bool ran = run("serial1", "1") && run("serial2", "1") && run("parallel", "0");
    const std::string a = slurp("serial1");
    const bool ok = ran && !a.empty() && a == slurp("serial2") && a == slurp("parallel");
    fs::remove_all(dir);
    return {ok, "serial, serial, parallel: " + std::to_string(a.size()) + " bytes each"};
}

Result fuzzing() {
    const auto p = toy_suite::fuzz_entity(6);
    const auto d = toy_suite::fuzz_twin(6);
    std::ostringstream out;
    out << "entity " << p.nodes << " nodes / " << p.key_established << " keyed, twin " << d.nodes << " nodes / "
        << d.key_established << " keyed, " << (p.violations + d.violations) << " violations";
    if (p.violations) out << "; " << p.first_violation;
    if (d.violations) out << "; " << d.first_violation;
    return {p.violations == 0 && d.violations == 0 && p.key_established > 0 && d.key_established > 0, out.str()};
}

Result latency_accounting() {
    sim::CampaignConfig c = p256_campaign(100, 0.0);
    c.latency_low_ms = c.latency_high_ms = 10.0;
    const auto r = sim::run_campaign_serial(c);
    bool ok = true;
    for (const auto& m : r.sessions) ok = ok && m.auth_latency_ms == 40.0;
    std::ostringstream d;
    d << "auth_latency " << *r.aggregates.mean_auth_latency_ms << " ms over 100 sessions";
    return {ok, d.str()};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Result()>>> criteria{
        {"completeness at scale", completeness_at_scale},
        {"false acceptance rate", far_bound},
        {"toy exhaustive schnorr suite", toy_exhaustive},
        {"replay resistance", replay},
        {"key derivation identity", key_derivation},
        {"deterministic reports", determinism},
        {"state machine safety", fuzzing},
        {"latency accounting", latency_accounting},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Result r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        if (!r.pass) ++failures;
        std::printf("%s %zu %s: %s\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, r.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
