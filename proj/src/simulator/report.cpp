#include "przk/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace przk::sim {

using nlohmann::ordered_json;

namespace {

constexpr std::array<const char*, 4> kMixKeys = {"replay", "impersonate_twin", "mitm_tamper",
                                                 "kci_impersonate_physical"};

template <typename T>
ordered_json nullable(const std::optional<T>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <typename T>
std::optional<T> read_nullable(const ordered_json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

ordered_json ops_to_json(const OpCounts& ops) {
    ordered_json j;
    j["group_exp"] = ops.group_exp;
    j["group_mul"] = ops.group_mul;
    j["hash"] = ops.hash;
    return j;
}

OpCounts ops_from_json(const ordered_json& j) {
    return {j.at("group_exp").get<std::uint64_t>(), j.at("group_mul").get<std::uint64_t>(),
            j.at("hash").get<std::uint64_t>()};
}

protocol::Reason parse_reason(const std::string& s) {
    using protocol::Reason;
    for (Reason r : {Reason::Ok, Reason::BadProof, Reason::BadIdentity, Reason::DegenerateCommitment,
                     Reason::OutOfOrder, Reason::Timeout, Reason::Malformed}) {
        if (protocol::to_string(r) == s) return r;
    }
    throw ReportError("unknown reason '" + s + "'");
}

ordered_json config_json(const CampaignConfig& c) {
    ordered_json j;
    j["sessions"] = c.sessions;
    j["adv_ratio"] = c.adv_ratio;
    ordered_json mix;
    for (std::size_t k = 0; k < 4; ++k) mix[kMixKeys[k]] = c.adversary_mix[k];
    j["adversary_mix"] = mix;
    j["latency_range_ms"] = {c.latency_low_ms, c.latency_high_ms};
    j["group"] = std::string(to_string(c.group));
    j["rng_seed"] = c.rng_seed;
    j["energy_weights"] = {{"group_exp", c.energy_weights.group_exp},
                           {"group_mul", c.energy_weights.group_mul},
                           {"hash", c.energy_weights.hash}};
    return j;
}

template <typename T>
T field(const ordered_json& j, const char* name) {
    try {
        return j.at(name).get<T>();
    } catch (const std::exception& e) {
        throw ConfigError(name, e.what());
    }
}

CampaignConfig config_from(const ordered_json& j) {
    if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
    CampaignConfig c;
    static const std::array<std::string, 7> known = {"sessions", "adv_ratio", "adversary_mix", "latency_range_ms",
                                                     "group", "rng_seed", "energy_weights"};
    for (const auto& item : j.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
            throw ConfigError(item.key(), "unknown field");
        }
    }
    if (j.contains("sessions")) {
        if (!j["sessions"].is_number_unsigned()) throw ConfigError("sessions", "must be a positive integer");
        c.sessions = field<std::size_t>(j, "sessions");
    }
    if (j.contains("adv_ratio")) c.adv_ratio = field<double>(j, "adv_ratio");
    if (j.contains("adversary_mix")) {
        const auto& mix = j["adversary_mix"];
        if (!mix.is_object()) throw ConfigError("adversary_mix", "expected an object keyed by adversary kind");
        c.adversary_mix = {0, 0, 0, 0};
        for (const auto& item : mix.items()) {
            auto it = std::find(kMixKeys.begin(), kMixKeys.end(), item.key());
            if (it == kMixKeys.end()) throw ConfigError("adversary_mix", "unknown kind '" + item.key() + "'");
            if (!item.value().is_number()) throw ConfigError("adversary_mix", "weights must be numbers");
            c.adversary_mix[static_cast<std::size_t>(it - kMixKeys.begin())] = item.value().get<double>();
        }
    }
    if (j.contains("latency_range_ms")) {
        const auto& lr = j["latency_range_ms"];
        if (!lr.is_array() || lr.size() != 2 || !lr[0].is_number() || !lr[1].is_number()) {
            throw ConfigError("latency_range_ms", "expected [low, high]");
        }
        c.latency_low_ms = lr[0].get<double>();
        c.latency_high_ms = lr[1].get<double>();
    }
    if (j.contains("group")) {
        try {
            c.group = parse_group_id(field<std::string>(j, "group"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("group", e.what());
        }
    }
    if (j.contains("rng_seed")) c.rng_seed = field<std::uint64_t>(j, "rng_seed");
    if (j.contains("energy_weights")) {
        const auto& w = j["energy_weights"];
        if (!w.is_object()) throw ConfigError("energy_weights", "expected an object");
        if (w.contains("group_exp")) c.energy_weights.group_exp = field<double>(w, "group_exp");
        if (w.contains("group_mul")) c.energy_weights.group_mul = field<double>(w, "group_mul");
        if (w.contains("hash")) c.energy_weights.hash = field<double>(w, "hash");
    }
    c.validate();
    return c;
}

ordered_json aggregates_json(const Aggregates& a) {
    ordered_json j;
    j["honest_sessions"] = a.honest_sessions;
    j["adversarial_sessions"] = a.adversarial_sessions;
    j["honest_accepted"] = a.honest_accepted;
    j["honest_acceptance"] = nullable(a.honest_acceptance);
    j["key_agreements"] = a.key_agreements;
    j["adversarial_accepted"] = a.adversarial_accepted;
    j["far"] = nullable(a.far);
    ordered_json kinds = ordered_json::object();
    for (const auto& [name, tally] : a.per_kind) {
        kinds[name] = {{"attempted", tally.attempted}, {"accepted", tally.accepted}};
    }
    j["per_kind"] = kinds;
    j["mean_auth_latency_ms"] = nullable(a.mean_auth_latency_ms);
    j["p95_auth_latency_ms"] = nullable(a.p95_auth_latency_ms);
    j["mean_key_establish_ms"] = nullable(a.mean_key_establish_ms);
    j["total_ops"] = ops_to_json(a.total_ops);
    j["energy_proxy"] = a.energy_proxy;
    return j;
}

Aggregates aggregates_from(const ordered_json& j) {
    Aggregates a;
    a.honest_sessions = j.at("honest_sessions").get<std::uint64_t>();
    a.adversarial_sessions = j.at("adversarial_sessions").get<std::uint64_t>();
    a.honest_accepted = j.at("honest_accepted").get<std::uint64_t>();
    a.honest_acceptance = read_nullable<double>(j.at("honest_acceptance"));
    a.key_agreements = j.at("key_agreements").get<std::uint64_t>();
    a.adversarial_accepted = j.at("adversarial_accepted").get<std::uint64_t>();
    a.far = read_nullable<double>(j.at("far"));
    for (const auto& item : j.at("per_kind").items()) {
        a.per_kind[item.key()] = {item.value().at("attempted").get<std::uint64_t>(),
                                  item.value().at("accepted").get<std::uint64_t>()};
    }
    a.mean_auth_latency_ms = read_nullable<double>(j.at("mean_auth_latency_ms"));
    a.p95_auth_latency_ms = read_nullable<double>(j.at("p95_auth_latency_ms"));
    a.mean_key_establish_ms = read_nullable<double>(j.at("mean_key_establish_ms"));
    a.total_ops = ops_from_json(j.at("total_ops"));
    a.energy_proxy = j.at("energy_proxy").get<double>();
    return a;
}

std::string fixed(double v, int decimals = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

bool close(double a, double b) {
    return std::fabs(a - b) <= 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

bool close(const std::optional<double>& a, const std::optional<double>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || close(*a, *b);
}

} // namespace

std::string config_to_json(const CampaignConfig& config) { return config_json(config).dump(2); }

CampaignConfig config_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError("config", e.what());
    }
    return config_from(j);
}

std::string report_to_json(const CampaignReport& report) {
    ordered_json j;
    j["config"] = config_json(report.config);
    j["aggregates"] = aggregates_json(report.aggregates);
    ordered_json rows = ordered_json::array();
    for (const SessionMetrics& s : report.sessions) {
        ordered_json r;
        r["index"] = s.index;
        r["kind"] = std::string(to_string(s.kind));
        r["accepted"] = s.accepted;
        r["reason"] = std::string(protocol::to_string(s.reason));
        r["auth_latency_ms"] = s.auth_latency_ms;
        r["key_establish_ms"] = nullable(s.key_establish_ms);
        r["keys_agree"] = nullable(s.keys_agree);
        r["entity_ops"] = ops_to_json(s.entity_ops);
        r["twin_ops"] = ops_to_json(s.twin_ops);
        rows.push_back(std::move(r));
    }
    j["sessions"] = std::move(rows);
    return j.dump(2) + "\n";
}

CampaignReport report_from_json(const std::string& text) {
    try {
        const auto j = ordered_json::parse(text);
        CampaignReport report;
        report.config = config_from(j.at("config"));
        report.aggregates = aggregates_from(j.at("aggregates"));
        for (const auto& r : j.at("sessions")) {
            SessionMetrics s;
            s.index = r.at("index").get<std::size_t>();
            s.kind = parse_session_kind(r.at("kind").get<std::string>());
            s.accepted = r.at("accepted").get<bool>();
            s.reason = parse_reason(r.at("reason").get<std::string>());
            s.auth_latency_ms = r.at("auth_latency_ms").get<double>();
            s.key_establish_ms = read_nullable<double>(r.at("key_establish_ms"));
            s.keys_agree = read_nullable<bool>(r.at("keys_agree"));
            s.entity_ops = ops_from_json(r.at("entity_ops"));
            s.twin_ops = ops_from_json(r.at("twin_ops"));
            report.sessions.push_back(s);
        }
        return report;
    } catch (const ReportError&) {
        throw;
    } catch (const std::exception& e) {
        throw ReportError(std::string("malformed report: ") + e.what());
    }
}

std::string report_to_csv(const CampaignReport& report) {
    std::ostringstream out;
    out << "index,kind,accepted,auth_latency_ms,key_ms,entity_exp,entity_mul,entity_hash,twin_exp,twin_mul,"
           "twin_hash\n";
    for (const SessionMetrics& s : report.sessions) {
        out << s.index << ',' << to_string(s.kind) << ',' << (s.accepted ? 1 : 0) << ','
            << fixed(s.auth_latency_ms, 6) << ',' << (s.key_establish_ms ? fixed(*s.key_establish_ms, 6) : "")
            << ',' << s.entity_ops.group_exp << ',' << s.entity_ops.group_mul << ',' << s.entity_ops.hash << ','
            << s.twin_ops.group_exp << ',' << s.twin_ops.group_mul << ',' << s.twin_ops.hash << '\n';
    }
    return out.str();
}

std::string report_to_table(const CampaignReport& report) {
    const Aggregates& a = report.aggregates;
    const CampaignConfig& c = report.config;
    std::ostringstream out;
    char line[160];
    auto row = [&](const std::string& kind, std::uint64_t attempted, std::uint64_t accepted) {
        const std::string rate =
            attempted == 0 ? "-" : fixed(100.0 * static_cast<double>(accepted) / static_cast<double>(attempted)) + "%";
        std::snprintf(line, sizeof line, "%-26s %10llu %10llu %10s\n", kind.c_str(),
                      static_cast<unsigned long long>(attempted), static_cast<unsigned long long>(accepted),
                      rate.c_str());
        out << line;
    };

    out << "sessions " << c.sessions << "  group " << to_string(c.group) << "  seed " << c.rng_seed
        << "  latency " << fixed(c.latency_low_ms) << ":" << fixed(c.latency_high_ms) << " ms\n";
    std::snprintf(line, sizeof line, "%-26s %10s %10s %10s\n", "kind", "attempted", "accepted", "rate");
    out << line;
    row("honest", a.honest_sessions, a.honest_accepted);
    for (const auto& [name, tally] : a.per_kind) row(name, tally.attempted, tally.accepted);

    auto opt = [](const std::optional<double>& v, int decimals) { return v ? fixed(*v, decimals) : "null"; };
    out << "honest acceptance      " << (a.honest_acceptance ? fixed(100.0 * *a.honest_acceptance) + "%" : "null")
        << "\n";
    out << "key agreement          " << a.key_agreements << "/" << a.honest_sessions << "\n";
    out << "FAR                    " << (a.far ? fixed(100.0 * *a.far, 4) + "%" : "null") << "  ("
        << a.adversarial_accepted << "/" << a.adversarial_sessions << ")\n";
    out << "mean auth latency ms   " << opt(a.mean_auth_latency_ms, 3) << "\n";
    out << "p95 auth latency ms    " << opt(a.p95_auth_latency_ms, 3) << "\n";
    out << "mean key establish ms  " << opt(a.mean_key_establish_ms, 3) << "\n";
    out << "ops exp/mul/hash       " << a.total_ops.group_exp << "/" << a.total_ops.group_mul << "/"
        << a.total_ops.hash << "\n";
    out << "energy proxy           " << fixed(a.energy_proxy, 1) << "\n";
    return out.str();
}

void verify_aggregates(const CampaignReport& report) {
    const Aggregates fresh = aggregate(report.config, report.sessions);
    const Aggregates& stored = report.aggregates;
    if (fresh.honest_sessions != stored.honest_sessions) throw AggregateMismatch("honest_sessions");
    if (fresh.adversarial_sessions != stored.adversarial_sessions) throw AggregateMismatch("adversarial_sessions");
    if (fresh.honest_accepted != stored.honest_accepted) throw AggregateMismatch("honest_accepted");
    if (!close(fresh.honest_acceptance, stored.honest_acceptance)) throw AggregateMismatch("honest_acceptance");
    if (fresh.key_agreements != stored.key_agreements) throw AggregateMismatch("key_agreements");
    if (fresh.adversarial_accepted != stored.adversarial_accepted) throw AggregateMismatch("adversarial_accepted");
    if (!close(fresh.far, stored.far)) throw AggregateMismatch("far");
    if (fresh.per_kind != stored.per_kind) throw AggregateMismatch("per_kind");
    if (!close(fresh.mean_auth_latency_ms, stored.mean_auth_latency_ms)) {
        throw AggregateMismatch("mean_auth_latency_ms");
    }
    if (!close(fresh.p95_auth_latency_ms, stored.p95_auth_latency_ms)) throw AggregateMismatch("p95_auth_latency_ms");
    if (!close(fresh.mean_key_establish_ms, stored.mean_key_establish_ms)) {
        throw AggregateMismatch("mean_key_establish_ms");
    }
    if (!(fresh.total_ops == stored.total_ops)) throw AggregateMismatch("total_ops");
    if (!close(fresh.energy_proxy, stored.energy_proxy)) throw AggregateMismatch("energy_proxy");
}

} // namespace przk::sim
