#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle.hpp"
#include "przk/registration.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace przk;

namespace {

const ToyGroup& toy = toy_group();
constexpr std::uint64_t kT = 1700000000;

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("przk-" + std::to_string(::getpid()) + "-" + name);
}

std::vector<std::string> lines_of(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("register: zeta matches an independent SHA-256 recomputation") {
    Registry reg(toy);
    const BindingRecord& rec = reg.register_binding(toy.element(13), toy.element(8), kT);
    CHECK(to_hex(rec.zeta) == oracle::kToyZeta);
    CHECK(rec.t == kT);
    CHECK(verify_record(rec));
}

TEST_CASE("register: determinism and sensitivity to every input") {
    const Digest z = binding_commitment(toy.element(13), toy.element(8), kT);
    CHECK(z == binding_commitment(toy.element(13), toy.element(8), kT));
    CHECK(z != binding_commitment(toy.element(13), toy.element(8), kT + 1));
    CHECK(z != binding_commitment(toy.element(3), toy.element(8), kT));
    CHECK(z != binding_commitment(toy.element(13), toy.element(16), kT));
    CHECK(z != binding_commitment(toy.element(8), toy.element(13), kT));
}

TEST_CASE("register: rejects identity keys and duplicates") {
    Registry reg(toy);
    CHECK_THROWS_AS(reg.register_binding(toy.identity(), toy.element(8), kT), RegistryError);
    CHECK_THROWS_AS(reg.register_binding(toy.element(13), toy.identity(), kT), RegistryError);
    reg.register_binding(toy.element(13), toy.element(8), kT);
    try {
        reg.register_binding(toy.element(13), toy.element(8), kT + 5);
        FAIL("duplicate accepted");
    } catch (const RegistryError& e) {
        CHECK(std::string(e.what()).find("already bound") != std::string::npos);
    }
    CHECK(reg.size() == 1);
    CHECK(reg.find(toy.element(13), toy.element(8)) != nullptr);
    CHECK(reg.find(toy.element(8), toy.element(13)) == nullptr);
}

TEST_CASE("verify_record: detects tampering") {
    Registry reg(toy);
    BindingRecord rec = reg.register_binding(toy.element(13), toy.element(8), kT);
    CHECK(verify_record(rec));
    BindingRecord flipped = rec;
    flipped.zeta[7] ^= 0x10;
    CHECK_FALSE(verify_record(flipped));
    BindingRecord retimed = rec;
    retimed.t += 1;
    CHECK_FALSE(verify_record(retimed));
}

TEST_CASE("registry file: bit-exact line format") {
    Registry reg(toy);
    reg.register_binding(toy.element(13), toy.element(8), kT);
    const auto path = temp_file("format.jsonl");
    reg.save(path);
    const auto lines = lines_of(path);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0] == std::string(R"({"pk_p":"0000000d","pk_d":"00000008","t":1700000000,"zeta":")") +
                          std::string(oracle::kToyZeta) + "\"}");
    std::filesystem::remove(path);
}

TEST_CASE("registry file: round trips") {
    const auto path = temp_file("roundtrip.jsonl");
    Registry empty(toy);
    empty.save(path);
    CHECK(Registry::load(toy, path).size() == 0);

    const Group& p = p256_group();
    Registry reg(p);
    Rng rng(4);
    for (int i = 0; i < 5; ++i) {
        reg.register_binding(p.exp_g(p.random_nonzero_scalar(rng)), p.exp_g(p.random_nonzero_scalar(rng)),
                             kT + static_cast<std::uint64_t>(i));
    }
    reg.save(path);
    const Registry back = Registry::load(p, path);
    CHECK(back == reg);
    std::filesystem::remove(path);
}

TEST_CASE("registry file: tampered record reported by index") {
    const auto path = temp_file("tampered.jsonl");
    Registry reg(toy);
    reg.register_binding(toy.element(13), toy.element(8), kT);
    reg.register_binding(toy.element(3), toy.element(8), kT);
    reg.register_binding(toy.element(13), toy.element(16), kT);
    reg.save(path);

    auto lines = lines_of(path);
    const auto pos = lines[1].find("1700000000");
    REQUIRE(pos != std::string::npos);
    lines[1].replace(pos, 10, "1700000001");
    {
        std::ofstream out(path, std::ios::trunc);
        for (const auto& l : lines) out << l << '\n';
    }
    try {
        (void)Registry::load(toy, path);
        FAIL("tampered registry loaded");
    } catch (const RegistryError& e) {
        CHECK(std::string(e.what()).find("registry record 1") != std::string::npos);
    }

    {
        std::ofstream out(path, std::ios::trunc);
        out << lines[0] << '\n' << lines[2] << '\n' << "{not json\n";
    }
    CHECK_THROWS_WITH_AS(Registry::load(toy, path), doctest::Contains("registry record 2"), RegistryError);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(Registry::load(toy, path), RegistryError);
}

TEST_CASE("registry: sealed registry refuses every access") {
    Registry reg(toy);
    reg.register_binding(toy.element(13), toy.element(8), kT);
    reg.seal();
    CHECK(reg.sealed());
    CHECK_THROWS_AS(reg.records(), RegistryError);
    CHECK_THROWS_AS(reg.find(toy.element(13), toy.element(8)), RegistryError);
    CHECK_THROWS_AS(reg.register_binding(toy.element(3), toy.element(8), kT), RegistryError);
    CHECK_THROWS_AS(reg.save(temp_file("sealed.jsonl")), RegistryError);
}

TEST_CASE("record_from_json_line: rejects malformed lines") {
    const std::string good = record_to_json_line({toy.element(13), toy.element(8), kT,
                                                  binding_commitment(toy.element(13), toy.element(8), kT)});
    CHECK_NOTHROW(record_from_json_line(toy, good));
    CHECK_THROWS_AS(record_from_json_line(toy, "[]"), RegistryError);
    CHECK_THROWS_AS(record_from_json_line(toy, R"({"pk_p":"00000005","pk_d":"00000008","t":1,"zeta":"00"})"),
                    RegistryError);
    CHECK_THROWS_AS(record_from_json_line(toy, R"({"pk_p":"0000000d","pk_d":"00000008","t":-1,"zeta":"00"})"),
                    RegistryError);
    const Digest z = binding_commitment(toy.identity(), toy.element(8), kT);
    CHECK_THROWS_AS(record_from_json_line(toy, record_to_json_line({toy.identity(), toy.element(8), kT, z})),
                    RegistryError);
}
