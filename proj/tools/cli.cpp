#include "cli.hpp"

#include "przk/campaign.hpp"
#include "przk/identity.hpp"
#include "przk/message.hpp"
#include "przk/registration.hpp"
#include "przk/report.hpp"
#include "przk/session.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace przk::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Raised inside a subcommand; carries the exit code to report.
struct Failure {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, std::string message) { throw Failure{code, std::move(message)}; }

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(kRuntime, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(kRuntime, "cannot write " + path.string());
    out << content;
    if (!out) fail(kRuntime, "write to " + path.string() + " failed");
}

// Owner read/write only, including when the file already existed.
void write_secret_file(const fs::path& path, const std::string& content) {
    const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
    if (fd < 0) fail(kRuntime, "cannot write " + path.string());
    bool ok = ::fchmod(fd, 0600) == 0;
    std::size_t done = 0;
    while (ok && done < content.size()) {
        const ssize_t n = ::write(fd, content.data() + done, content.size() - done);
        if (n <= 0) {
            ok = false;
        } else {
            done += static_cast<std::size_t>(n);
        }
    }
    ok = (::close(fd) == 0) && ok;
    if (!ok) fail(kRuntime, "write to " + path.string() + " failed");
}

ordered_json read_json(const fs::path& path) {
    try {
        return ordered_json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        fail(kIntegrity, path.string() + ": " + e.what());
    }
}

std::string field(const ordered_json& j, const char* key, const fs::path& path) {
    if (!j.is_object() || !j.contains(key) || !j[key].is_string()) {
        fail(kIntegrity, path.string() + ": missing string field '" + key + "'");
    }
    return j[key].get<std::string>();
}

GroupId group_of(const ordered_json& j, const fs::path& path) {
    try {
        return parse_group_id(field(j, "group", path));
    } catch (const std::invalid_argument& e) {
        fail(kIntegrity, path.string() + ": " + e.what());
    }
}

ByteView as_bytes(std::string_view s) { return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}; }

// Twin key material is drawn from a stream seeded by the keygen seed, so the
// same seed reproduces the same files.
Rng twin_keygen_rng(const std::string& seed) {
    const Digest d = h2({as_bytes("przk/twin-keygen"), as_bytes(seed)});
    return Rng({read_u64_be(ByteView(d).subspan(0, 8)), read_u64_be(ByteView(d).subspan(8, 8)),
                read_u64_be(ByteView(d).subspan(16, 8)), read_u64_be(ByteView(d).subspan(24, 8))});
}

void parse_latency(const std::string& text, double& low, double& high) {
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) {
            throw sim::ConfigError("latency_range_ms", "expected low:high or a single value, got '" + text + "'");
        }
        return v;
    };
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        low = high = number(text);
    } else {
        low = number(text.substr(0, colon));
        high = number(text.substr(colon + 1));
    }
}

// --- keygen --------------------------------------------------------------------

struct KeygenArgs {
    std::string seed;
    std::string group = "p256";
    std::string out = ".";
};

int cmd_keygen(const KeygenArgs& a, std::ostream& out) {
    GroupId gid;
    try {
        gid = parse_group_id(a.group);
    } catch (const std::invalid_argument& e) {
        fail(kUsage, std::string("--group: ") + e.what());
    }
    if (a.seed.empty()) fail(kUsage, "--seed must be nonempty");
    const Group& g = group_for(gid);

    const auto identity = PhysicalIdentity::provision(a.seed);
    const EntityKeys entity = EntityKeys::derive(g, identity);
    Rng rng = twin_keygen_rng(a.seed);
    const TwinKeyPair twin = TwinKeyPair::generate(g, rng);

    std::error_code ec;
    fs::create_directories(a.out, ec);
    if (ec) fail(kRuntime, "cannot create " + a.out + ": " + ec.message());
    const fs::path dir(a.out);
    const std::string gname(to_string(gid));

    auto dump = [](const ordered_json& j) { return j.dump(2) + "\n"; };
    const ordered_json entity_pub{{"group", gname}, {"pk_p", to_hex(entity.pk_p.bytes())}};
    const ordered_json twin_pub{{"group", gname}, {"pk_d", to_hex(twin.pk_d.bytes())}};
    const ordered_json entity_secret{{"group", gname}, {"s_p", to_hex(identity.secret())}};
    const ordered_json twin_secret{{"group", gname}, {"sk_d", to_hex(twin.sk_d.bytes())}};

    write_file(dir / "entity.pub.json", dump(entity_pub));
    write_file(dir / "twin.pub.json", dump(twin_pub));
    write_secret_file(dir / "entity.secret.json", dump(entity_secret));
    write_secret_file(dir / "twin.secret.json", dump(twin_secret));

    out << "group   " << gname << "\n";
    out << "pk_p    " << to_hex(entity.pk_p.bytes()) << "\n";
    out << "pk_d    " << to_hex(twin.pk_d.bytes()) << "\n";
    out << "wrote   " << (dir / "entity.pub.json").string() << "\n";
    out << "wrote   " << (dir / "twin.pub.json").string() << "\n";
    out << "wrote   " << (dir / "entity.secret.json").string() << "  [SECRET: S_p, mode 0600]\n";
    out << "wrote   " << (dir / "twin.secret.json").string() << "  [SECRET: sk_d, mode 0600]\n";
    return kOk;
}

// --- register ------------------------------------------------------------------

struct RegisterArgs {
    std::string registry;
    std::string entity;
    std::string twin;
    std::optional<std::uint64_t> timestamp;
};

GroupElement element_field(const Group& g, const ordered_json& j, const char* key, const fs::path& path) {
    try {
        return g.element_from_bytes(from_hex(field(j, key, path)));
    } catch (const Failure&) {
        throw;
    } catch (const std::exception& e) {
        fail(kIntegrity, path.string() + ": " + key + ": " + e.what());
    }
}

int cmd_register(const RegisterArgs& a, std::ostream& out) {
    const ordered_json ej = read_json(a.entity);
    const ordered_json tj = read_json(a.twin);
    const GroupId gid = group_of(ej, a.entity);
    if (group_of(tj, a.twin) != gid) fail(kIntegrity, "entity and twin keys are in different groups");
    const Group& g = group_for(gid);
    const GroupElement pk_p = element_field(g, ej, "pk_p", a.entity);
    const GroupElement pk_d = element_field(g, tj, "pk_d", a.twin);

    const std::uint64_t t = a.timestamp.value_or(static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
            .count()));

    Registry reg(g);
    if (fs::exists(a.registry)) {
        try {
            reg = Registry::load(g, a.registry);
        } catch (const RegistryError& e) {
            fail(kIntegrity, e.what());
        }
    }
    BindingRecord rec;
    try {
        rec = reg.register_binding(pk_p, pk_d, t);
        reg.save(a.registry);
    } catch (const RegistryError& e) {
        fail(kRuntime, e.what());
    }
    out << "registered binding in " << a.registry << " (" << reg.size() << " record"
        << (reg.size() == 1 ? "" : "s") << ")\n";
    out << "t       " << rec.t << "\n";
    out << "zeta    " << to_hex(rec.zeta) << "\n";
    return kOk;
}

// --- authenticate --------------------------------------------------------------

struct AuthenticateArgs {
    std::string registry;
    std::string entity_secret;
    std::string twin_secret;
    std::uint64_t seed = 1;
};

std::string fields_of(const protocol::Message& m) {
    using namespace protocol;
    return std::visit(
        [](const auto& msg) -> std::string {
            using T = std::decay_t<decltype(msg)>;
            if constexpr (std::is_same_v<T, Commit>) {
                return "alpha=" + to_hex(msg.alpha.bytes());
            } else if constexpr (std::is_same_v<T, Challenge>) {
                return "c=" + to_hex(msg.c.bytes());
            } else if constexpr (std::is_same_v<T, Response>) {
                return "z=" + to_hex(msg.z.bytes());
            } else if constexpr (std::is_same_v<T, IdentityProof>) {
                return "h_sp=" + to_hex(msg.h_sp.bytes()) + " R_p=" + to_hex(msg.r_p_pub.bytes());
            } else {
                return std::string("accept=") + (msg.accept ? "1" : "0") + " reason=" +
                       std::string(to_string(msg.reason));
            }
        },
        m);
}

int cmd_authenticate(const AuthenticateArgs& a, std::ostream& out) {
    using namespace protocol;
    const ordered_json ej = read_json(a.entity_secret);
    const ordered_json tj = read_json(a.twin_secret);
    const GroupId gid = group_of(ej, a.entity_secret);
    if (group_of(tj, a.twin_secret) != gid) fail(kIntegrity, "entity and twin secrets are in different groups");
    const Group& g = group_for(gid);

    EntityKeys entity;
    TwinKeyPair twin;
    try {
        const Bytes s_p = from_hex(field(ej, "s_p", a.entity_secret));
        if (s_p.size() != 32) fail(kIntegrity, a.entity_secret + ": s_p must be 32 bytes");
        std::array<std::uint8_t, 32> secret{};
        std::copy(s_p.begin(), s_p.end(), secret.begin());
        entity = EntityKeys::derive(g, PhysicalIdentity::fixed(secret));
        twin = TwinKeyPair::from_secret(g, g.scalar_from_bytes(from_hex(field(tj, "sk_d", a.twin_secret))));
    } catch (const Failure&) {
        throw;
    } catch (const std::exception& e) {
        fail(kIntegrity, std::string("bad secret file: ") + e.what());
    }

    // The CA's registry is consulted once, here, to hand both parties zeta.
    BindingRecord binding;
    try {
        const Registry reg = Registry::load(g, a.registry);
        const BindingRecord* rec = reg.find(entity.pk_p, twin.pk_d);
        if (!rec) fail(kIntegrity, "no binding for this (pk_p, pk_d) pair in " + a.registry);
        binding = *rec;
    } catch (const RegistryError& e) {
        fail(kIntegrity, e.what());
    }

    TwinSession d(g, twin, entity.pk_p, binding.zeta);
    EntitySession p(g, entity, twin.pk_d, binding.zeta);
    Rng d_rng({a.seed, 1});
    Rng p_rng({a.seed, 2});

    out << "group   " << to_string(gid) << "\n";
    out << "zeta    " << to_hex(binding.zeta) << "  (t=" << binding.t << ")\n\n";

    std::vector<std::string> d_phases{std::string(to_string(d.phase()))};
    std::vector<std::string> p_phases{std::string(to_string(p.phase()))};
    auto note = [](std::vector<std::string>& v, Phase ph) {
        if (v.back() != to_string(ph)) v.emplace_back(to_string(ph));
    };

    // Every message crosses an encode/decode boundary, as on a real wire.
    std::size_t step = 0;
    auto send = [&](const char* dir, const Message& m) {
        const Bytes frame = encode(m);
        out << std::setw(2) << ++step << "  " << dir << "  " << std::left << std::setw(14)
            << std::string(to_string(tag_of(m))) << std::right << fields_of(m) << "\n";
        return decode(g, frame);
    };

    std::optional<Message> msg = send("D->P", d.commit(d_rng));
    note(d_phases, d.phase());
    bool to_entity = true;
    while (msg) {
        if (to_entity) {
            std::optional<Message> reply;
            if (const auto* resp = std::get_if<Response>(&*msg); resp && p.phase() == Phase::Challenged) {
                // Step explicitly so every intermediate state is visible.
                if (p.verify_response(*resp)) {
                    note(p_phases, p.phase());
                    const IdentityProof ip = p.identity_proof(p_rng);
                    note(p_phases, p.phase());
                    p.derive_key();
                    reply = ip;
                } else {
                    reply = Verdict{false, *p.failure()};
                }
            } else {
                reply = p.receive(*msg, p_rng);
            }
            note(p_phases, p.phase());
            msg = reply ? std::optional<Message>(send("P->D", *reply)) : std::nullopt;
        } else {
            std::optional<Message> reply;
            if (const auto* ip = std::get_if<IdentityProof>(&*msg); ip && d.phase() == Phase::ResponseSent) {
                if (d.verify_identity(*ip)) {
                    note(d_phases, d.phase());
                    d.derive_key();
                    reply = Verdict{true, Reason::Ok};
                } else {
                    reply = Verdict{false, *d.failure()};
                }
            } else {
                reply = d.receive(*msg);
            }
            note(d_phases, d.phase());
            msg = reply ? std::optional<Message>(send("D->P", *reply)) : std::nullopt;
        }
        to_entity = !to_entity;
    }

    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : " -> ") + x;
        return s;
    };
    out << "\nD phases: " << join(d_phases) << "\n";
    out << "P phases: " << join(p_phases) << "\n";
    out << "ops D exp/mul/hash " << d.ops().group_exp << "/" << d.ops().group_mul << "/" << d.ops().hash << "\n";
    out << "ops P exp/mul/hash " << p.ops().group_exp << "/" << p.ops().group_mul << "/" << p.ops().hash << "\n";

    const bool agree = d.key() && p.key() && *d.key() == *p.key();
    const bool accepted = d.phase() == Phase::KeyEstablished && p.phase() == Phase::KeyEstablished && agree;
    out << "result  " << (accepted ? "accepted" : "rejected");
    if (accepted) out << ", session keys agree";
    out << "\n";
    return accepted ? kOk : kIntegrity;
}

// --- simulate ------------------------------------------------------------------

struct SimulateArgs {
    std::string config;
    std::optional<std::size_t> sessions;
    std::optional<double> adv_ratio;
    std::string latency;
    std::optional<std::uint64_t> seed;
    std::string group;
    int parallel = 1;
    std::string json_out = "report.json";
    std::string csv_out = "report.csv";
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    sim::CampaignConfig config;
    try {
        std::string path = a.config;
        if (path.empty()) {
            if (const char* env = std::getenv(kConfigEnv); env && *env) path = env;
        }
        if (!path.empty()) config = sim::config_from_json(read_file(path));
        if (a.sessions) config.sessions = *a.sessions;
        if (a.adv_ratio) config.adv_ratio = *a.adv_ratio;
        if (!a.latency.empty()) parse_latency(a.latency, config.latency_low_ms, config.latency_high_ms);
        if (a.seed) config.rng_seed = *a.seed;
        if (!a.group.empty()) {
            try {
                config.group = parse_group_id(a.group);
            } catch (const std::invalid_argument& e) {
                throw sim::ConfigError("group", e.what());
            }
        }
        if (a.parallel < 0) throw sim::ConfigError("parallel", "must be nonnegative");
        config.validate();
    } catch (const sim::ConfigError& e) {
        fail(kUsage, std::string("invalid config: ") + e.what());
    }

    sim::CampaignReport report;
    try {
        report = sim::run_campaign(config, a.parallel);
    } catch (const sim::SessionError& e) {
        fail(kRuntime, e.what());
    }
    write_file(a.json_out, sim::report_to_json(report));
    write_file(a.csv_out, sim::report_to_csv(report));
    out << sim::report_to_table(report);
    out << "wrote " << a.json_out << " and " << a.csv_out << "\n";
    return kOk;
}

// --- report --------------------------------------------------------------------

struct ReportArgs {
    std::string in;
    std::string format = "table";
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
    const std::string text = read_file(a.in);
    sim::CampaignReport report;
    try {
        report = sim::report_from_json(text);
        sim::verify_aggregates(report);
    } catch (const sim::AggregateMismatch& e) {
        fail(kIntegrity, a.in + ": " + e.what());
    } catch (const std::exception& e) {
        fail(kIntegrity, a.in + ": " + e.what());
    }
    if (a.format == "json") {
        out << sim::report_to_json(report);
    } else if (a.format == "csv") {
        out << sim::report_to_csv(report);
    } else {
        out << sim::report_to_table(report);
    }
    return kOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"PRZK-Bind: physical entity / digital twin authentication", "przk"};
    app.require_subcommand(1);

    KeygenArgs keygen;
    auto* kg = app.add_subcommand("keygen", "Provision an entity identity and a twin key pair");
    kg->add_option("--seed", keygen.seed, "Provisioning seed")->required();
    kg->add_option("--group", keygen.group, "toy | p256")->capture_default_str();
    kg->add_option("--out", keygen.out, "Output directory")->capture_default_str();

    RegisterArgs reg;
    auto* rg = app.add_subcommand("register", "Bind an entity and a twin in the CA registry");
    rg->add_option("--registry", reg.registry, "Registry file (JSON lines)")->required();
    rg->add_option("--entity", reg.entity, "entity.pub.json")->required();
    rg->add_option("--twin", reg.twin, "twin.pub.json")->required();
    rg->add_option("--timestamp", reg.timestamp, "Binding time T, Unix seconds (default: now)");

    AuthenticateArgs auth;
    auto* au = app.add_subcommand("authenticate", "Run one session between local state machines");
    au->add_option("--registry", auth.registry, "Registry file")->required();
    au->add_option("--entity-secret", auth.entity_secret, "entity.secret.json")->required();
    au->add_option("--twin-secret", auth.twin_secret, "twin.secret.json")->required();
    au->add_option("--seed", auth.seed, "Session randomness seed")->capture_default_str();

    SimulateArgs simulate;
    auto* si = app.add_subcommand("simulate", "Run a session campaign");
    si->add_option("--config", simulate.config, std::string("Campaign config JSON (default: $") + kConfigEnv + ")");
    si->add_option("--sessions", simulate.sessions, "Number of sessions");
    si->add_option("--adv-ratio", simulate.adv_ratio, "Adversarial fraction in [0, 1]");
    si->add_option("--latency", simulate.latency, "Per-message delay in ms, low:high or a single value");
    si->add_option("--seed", simulate.seed, "Campaign RNG seed");
    si->add_option("--group", simulate.group, "toy | p256");
    si->add_option("--parallel", simulate.parallel, "Worker threads (0 = OpenMP default)")->capture_default_str();
    si->add_option("--json", simulate.json_out, "JSON report path")->capture_default_str();
    si->add_option("--csv", simulate.csv_out, "CSV report path")->capture_default_str();

    ReportArgs rep;
    auto* rp = app.add_subcommand("report", "Re-check and format a campaign report");
    rp->add_option("--in", rep.in, "Report JSON")->required();
    rp->add_option("--format", rep.format, "csv | json | table")
        ->check(CLI::IsMember({"csv", "json", "table"}))
        ->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*kg) return cmd_keygen(keygen, out);
        if (*rg) return cmd_register(reg, out);
        if (*au) return cmd_authenticate(auth, out);
        if (*si) return cmd_simulate(simulate, out);
        if (*rp) return cmd_report(rep, out);
    } catch (const Failure& f) {
        err << (f.code == kUsage ? "usage error: " : "error: ") << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kUsage;
}

} // namespace przk::cli
