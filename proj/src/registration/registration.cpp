#include "przk/registration.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>

namespace przk {

using nlohmann::ordered_json;

Digest binding_commitment(const GroupElement& pk_p, const GroupElement& pk_d, std::uint64_t t) {
    return h2({pk_p.bytes(), pk_d.bytes(), u64_be(t)});
}

bool verify_record(const BindingRecord& rec) {
    return binding_commitment(rec.pk_p, rec.pk_d, rec.t) == rec.zeta;
}

std::string record_to_json_line(const BindingRecord& rec) {
    ordered_json j;
    j["pk_p"] = to_hex(rec.pk_p.bytes());
    j["pk_d"] = to_hex(rec.pk_d.bytes());
    j["t"] = rec.t;
    j["zeta"] = to_hex(rec.zeta);
    return j.dump();
}

BindingRecord record_from_json_line(const Group& group, const std::string& line) {
    BindingRecord rec;
    try {
        const auto j = ordered_json::parse(line);
        if (!j.is_object() || j.size() != 4) throw RegistryError("expected exactly pk_p, pk_d, t, zeta");
        rec.pk_p = group.element_from_bytes(from_hex(j.at("pk_p").get<std::string>()));
        rec.pk_d = group.element_from_bytes(from_hex(j.at("pk_d").get<std::string>()));
        if (group.is_identity(rec.pk_p) || group.is_identity(rec.pk_d)) {
            throw RegistryError("identity element is not a valid public key");
        }
        if (!j.at("t").is_number_unsigned()) throw RegistryError("t must be an unsigned integer");
        rec.t = j.at("t").get<std::uint64_t>();
        const Bytes zeta = from_hex(j.at("zeta").get<std::string>());
        if (zeta.size() != rec.zeta.size()) throw RegistryError("zeta must be 32 bytes");
        std::copy(zeta.begin(), zeta.end(), rec.zeta.begin());
    } catch (const RegistryError&) {
        throw;
    } catch (const std::exception& e) {
        throw RegistryError(e.what());
    }
    if (!verify_record(rec)) throw RegistryError("zeta does not match H2(pk_p || pk_d || t)");
    return rec;
}

const BindingRecord& Registry::register_binding(const GroupElement& pk_p, const GroupElement& pk_d,
                                                std::uint64_t t) {
    ensure_open();
    if (group_->is_identity(pk_p) || group_->is_identity(pk_d)) {
        throw RegistryError("identity element is not a valid public key");
    }
    if (!group_->decode_element(pk_p.bytes()) || !group_->decode_element(pk_d.bytes())) {
        throw RegistryError("public key is not a member of the group");
    }
    insert({pk_p, pk_d, t, binding_commitment(pk_p, pk_d, t)});
    return records_.back();
}

const BindingRecord* Registry::find(const GroupElement& pk_p, const GroupElement& pk_d) const {
    ensure_open();
    auto it = index_.find({pk_p, pk_d});
    return it == index_.end() ? nullptr : &records_[it->second];
}

const std::vector<BindingRecord>& Registry::records() const {
    ensure_open();
    return records_;
}

void Registry::save(const std::filesystem::path& path) const {
    ensure_open();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RegistryError("cannot open " + path.string() + " for writing");
    for (const auto& rec : records_) out << record_to_json_line(rec) << '\n';
    if (!out) throw RegistryError("write to " + path.string() + " failed");
}

Registry Registry::load(const Group& group, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RegistryError("cannot open " + path.string());
    Registry reg(group);
    std::string line;
    std::size_t index = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            reg.insert(record_from_json_line(group, line));
        } catch (const RegistryError& e) {
            throw RegistryError("registry record " + std::to_string(index) + ": " + e.what());
        }
        ++index;
    }
    return reg;
}

void Registry::insert(BindingRecord rec) {
    auto key = std::make_pair(rec.pk_p, rec.pk_d);
    if (index_.count(key) != 0) throw RegistryError("pair already bound");
    index_.emplace(std::move(key), records_.size());
    records_.push_back(std::move(rec));
}

void Registry::ensure_open() const {
    if (sealed_) throw RegistryError("registry is sealed: the CA is not available during sessions");
}

} // namespace przk
