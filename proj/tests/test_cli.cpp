#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli.hpp"

#include <json.hpp>

#include <sys/stat.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using przk::cli::run_cli;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("przk-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void keygen_and_register(const TempDir& dir, const std::string& group = "toy") {
    REQUIRE(cli({"keygen", "--seed", "unit", "--group", group, "--out", dir / "keys"}).code == 0);
    REQUIRE(cli({"register", "--registry", dir / "reg.jsonl", "--entity", dir / "keys/entity.pub.json", "--twin",
                 dir / "keys/twin.pub.json", "--timestamp", "1700000000"})
                .code == 0);
}

} // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(cli({}).code == 1);
    CHECK(cli({"fly"}).code == 1);
    CHECK(cli({"keygen", "--group", "toy"}).code == 1);
    CHECK(cli({"keygen", "--seed", "x", "--group", "p521"}).code == 1);
    CHECK(cli({"report", "--in", "x", "--format", "xml"}).code == 1);
    const Run help = cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("simulate") != std::string::npos);
}

TEST_CASE("keygen writes public and secret files, secrets owner-only") {
    TempDir dir;
    const Run r = cli({"keygen", "--seed", "unit", "--group", "toy", "--out", dir / "keys"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("SECRET") != std::string::npos);
    for (const char* name : {"entity.secret.json", "twin.secret.json"}) {
        struct stat st {};
        REQUIRE(::stat((dir / (std::string("keys/") + name)).c_str(), &st) == 0);
        CHECK((st.st_mode & 0777) == 0600);
    }
    const auto pub = nlohmann::json::parse(slurp(dir / "keys/entity.pub.json"));
    CHECK(pub["group"] == "toy");
    CHECK(pub["pk_p"].get<std::string>().size() == 8);
    CHECK_FALSE(pub.contains("s_p"));

    // Same seed, same keys.
    TempDir again;
    REQUIRE(cli({"keygen", "--seed", "unit", "--group", "toy", "--out", again / "keys"}).code == 0);
    CHECK(slurp(dir / "keys/twin.secret.json") == slurp(again / "keys/twin.secret.json"));
    CHECK(slurp(dir / "keys/entity.pub.json") == slurp(again / "keys/entity.pub.json"));
}

TEST_CASE("register, then authenticate succeeds without printing the key") {
    for (const char* group : {"toy", "p256"}) {
        CAPTURE(group);
        TempDir dir;
        keygen_and_register(dir, group);
        const Run r = cli({"authenticate", "--registry", dir / "reg.jsonl", "--entity-secret",
                           dir / "keys/entity.secret.json", "--twin-secret", dir / "keys/twin.secret.json"});
        CHECK(r.code == 0);
        CHECK(r.out.find("result  accepted") != std::string::npos);
        CHECK(r.out.find("IdentityVerified -> KeyEstablished") != std::string::npos);
        CHECK(r.out.find("ResponseReceived -> IdentitySent -> KeyEstablished") != std::string::npos);
        CHECK(r.out.find("K_") == std::string::npos);
    }
}

TEST_CASE("register rejects a duplicate and a corrupted registry") {
    TempDir dir;
    keygen_and_register(dir);
    const std::vector<std::string> again{"register", "--registry", dir / "reg.jsonl", "--entity",
                                         dir / "keys/entity.pub.json", "--twin", dir / "keys/twin.pub.json"};
    CHECK(cli(again).code == 2);

    std::string text = slurp(dir / "reg.jsonl");
    const auto pos = text.find("\"t\":1700000000");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 14, "\"t\":1700000001");
    std::ofstream(dir / "reg.jsonl", std::ios::trunc) << text;
    CHECK(cli(again).code == 3);
    const Run auth = cli({"authenticate", "--registry", dir / "reg.jsonl", "--entity-secret",
                          dir / "keys/entity.secret.json", "--twin-secret", dir / "keys/twin.secret.json"});
    CHECK(auth.code == 3);
}

TEST_CASE("authenticate with a twin that was never bound exits 3") {
    TempDir dir;
    keygen_and_register(dir);
    REQUIRE(cli({"keygen", "--seed", "other", "--group", "toy", "--out", dir / "other"}).code == 0);
    const Run r = cli({"authenticate", "--registry", dir / "reg.jsonl", "--entity-secret",
                       dir / "keys/entity.secret.json", "--twin-secret", dir / "other/twin.secret.json"});
    CHECK(r.code == 3);
    CHECK(r.err.find("no binding") != std::string::npos);
}

TEST_CASE("simulate writes reports and is reproducible across thread counts") {
    TempDir dir;
    const std::vector<std::string> base{"simulate", "--sessions", "300", "--adv-ratio", "0.2", "--group", "toy",
                                        "--seed", "5"};
    auto with = [&](const std::string& tag, const std::string& threads) {
        auto args = base;
        for (const std::string& a : {std::string("--parallel"), threads, std::string("--json"), dir / (tag + ".json"),
                                     std::string("--csv"), dir / (tag + ".csv")}) {
            args.push_back(a);
        }
        return cli(args);
    };
    const Run a = with("a", "1");
    REQUIRE(a.code == 0);
    CHECK(a.out.find("FAR") != std::string::npos);
    CHECK(with("b", "1").code == 0);
    CHECK(with("c", "4").code == 0);
    CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
    CHECK(slurp(dir / "a.json") == slurp(dir / "c.json"));
    CHECK(slurp(dir / "a.csv") == slurp(dir / "c.csv"));

    const Run table = cli({"report", "--in", dir / "a.json"});
    CHECK(table.code == 0);
    CHECK(table.out.find("energy proxy") != std::string::npos);
    CHECK(cli({"report", "--in", dir / "a.json", "--format", "json"}).out == slurp(dir / "a.json"));
    CHECK(cli({"report", "--in", dir / "a.json", "--format", "csv"}).out == slurp(dir / "a.csv"));
}

TEST_CASE("simulate: bad flags and configs exit 1 naming the field") {
    TempDir dir;
    Run r = cli({"simulate", "--adv-ratio", "1.5", "--json", dir / "r.json", "--csv", dir / "r.csv"});
    CHECK(r.code == 1);
    CHECK(r.err.find("adv_ratio") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "r.json"));

    r = cli({"simulate", "--latency", "20:10", "--json", dir / "r.json", "--csv", dir / "r.csv"});
    CHECK(r.code == 1);
    CHECK(r.err.find("latency_range_ms") != std::string::npos);
    r = cli({"simulate", "--latency", "fast", "--json", dir / "r.json", "--csv", dir / "r.csv"});
    CHECK(r.code == 1);

    std::ofstream(dir / "bad.json") << R"({"sesions": 10})";
    r = cli({"simulate", "--config", dir / "bad.json", "--json", dir / "r.json", "--csv", dir / "r.csv"});
    CHECK(r.code == 1);
    CHECK(r.err.find("sesions") != std::string::npos);
}

TEST_CASE("simulate reads its config from the environment and flags override it") {
    TempDir dir;
    std::ofstream(dir / "cfg.json") << R"({"sessions": 20, "adv_ratio": 0, "group": "toy",
                                          "latency_range_ms": [10, 10]})";
    ::setenv(przk::cli::kConfigEnv, (dir / "cfg.json").c_str(), 1);
    const Run r = cli({"simulate", "--sessions", "30", "--json", dir / "r.json", "--csv", dir / "r.csv"});
    ::unsetenv(przk::cli::kConfigEnv);
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "r.json"));
    CHECK(j["config"]["sessions"] == 30);
    CHECK(j["config"]["group"] == "toy");
    CHECK(j["aggregates"]["far"].is_null());
    CHECK(j["aggregates"]["mean_auth_latency_ms"] == 40.0);
}

TEST_CASE("report: a tampered aggregate exits 3 naming the metric") {
    TempDir dir;
    REQUIRE(cli({"simulate", "--sessions", "100", "--group", "toy", "--json", dir / "r.json", "--csv", dir / "r.csv"})
                .code == 0);
    auto j = nlohmann::ordered_json::parse(slurp(dir / "r.json"));
    j["aggregates"]["far"] = 0.777;
    std::ofstream(dir / "t.json") << j.dump(2);
    const Run r = cli({"report", "--in", dir / "t.json"});
    CHECK(r.code == 3);
    CHECK(r.err.find("far") != std::string::npos);
    CHECK(cli({"report", "--in", dir / "missing.json"}).code == 2);
}
