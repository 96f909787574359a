#ifndef PRZK_REGISTRATION_HPP
#define PRZK_REGISTRATION_HPP

#include "przk/group.hpp"
#include "przk/hash.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace przk {

class RegistryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// CA-issued binding of a physical entity to its twin:
// zeta = H2(enc(pk_p) || enc(pk_d) || u64_be(t)).
struct BindingRecord {
    GroupElement pk_p;
    GroupElement pk_d;
    std::uint64_t t = 0;
    Digest zeta{};

    friend bool operator==(const BindingRecord&, const BindingRecord&) = default;
};

Digest binding_commitment(const GroupElement& pk_p, const GroupElement& pk_d, std::uint64_t t);

// True iff the stored zeta matches the recomputed commitment.
bool verify_record(const BindingRecord& rec);

// One registry line: {"pk_p":hex,"pk_d":hex,"t":uint,"zeta":hex}.
std::string record_to_json_line(const BindingRecord& rec);
// Throws RegistryError on malformed JSON, bad encodings or a zeta mismatch.
BindingRecord record_from_json_line(const Group& group, const std::string& line);

// The credential authority's registry. Used only while provisioning: once
// sealed, every accessor throws, which is how the simulator proves sessions
// never consult the CA.
class Registry {
public:
    explicit Registry(const Group& group) : group_(&group) {}

    // Throws RegistryError for identity-element keys or an already-bound pair.
    const BindingRecord& register_binding(const GroupElement& pk_p, const GroupElement& pk_d, std::uint64_t t);

    const BindingRecord* find(const GroupElement& pk_p, const GroupElement& pk_d) const;
    const std::vector<BindingRecord>& records() const;
    std::size_t size() const { return records().size(); }

    void seal() { sealed_ = true; }
    bool sealed() const { return sealed_; }

    void save(const std::filesystem::path& path) const;
    // Every record is re-verified; a bad line is reported by its 0-based index.
    static Registry load(const Group& group, const std::filesystem::path& path);

    friend bool operator==(const Registry& a, const Registry& b) { return a.records_ == b.records_; }

private:
    void insert(BindingRecord rec);
    void ensure_open() const;

    const Group* group_;
    std::vector<BindingRecord> records_;
    std::map<std::pair<GroupElement, GroupElement>, std::size_t> index_;
    bool sealed_ = false;
};

} // namespace przk

#endif
