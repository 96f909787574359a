#include "przk/group.hpp"

#include <stdexcept>

namespace przk {

namespace {

std::uint32_t pow_mod(std::uint32_t base, std::uint32_t e, std::uint32_t m) {
    std::uint64_t result = 1 % m;
    std::uint64_t b = base % m;
    while (e > 0) {
        if (e & 1u) result = result * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(result);
}

} // namespace

Bytes ToyGroup::order() const { return u32_be(kOrder); }

std::uint32_t ToyGroup::value(const GroupElement& x) { return read_u32_be(x.bytes()); }
std::uint32_t ToyGroup::value(const Scalar& s) { return read_u32_be(s.bytes()); }

bool ToyGroup::is_member(std::uint32_t residue) {
    if (residue == 0 || residue >= kModulus) return false;
    return pow_mod(residue, kOrder, kModulus) == 1;
}

GroupElement ToyGroup::element(std::uint32_t residue) const {
    if (!is_member(residue)) {
        throw std::invalid_argument("residue " + std::to_string(residue) + " is not in the order-11 subgroup");
    }
    return make_element(u32_be(residue));
}

std::optional<Scalar> ToyGroup::decode_scalar(ByteView be) const {
    if (be.size() != 4) return std::nullopt;
    const std::uint32_t v = read_u32_be(be);
    if (v >= kOrder) return std::nullopt;
    return make_scalar(Bytes(be.begin(), be.end()));
}

Scalar ToyGroup::reduce(ByteView be) const {
    std::uint32_t r = 0;
    for (std::uint8_t b : be) r = (r * 256 + b) % kOrder;
    return make_scalar(u32_be(r));
}

Scalar ToyGroup::add(const Scalar& a, const Scalar& b) const {
    return make_scalar(u32_be((value(a) + value(b)) % kOrder));
}

Scalar ToyGroup::sub(const Scalar& a, const Scalar& b) const {
    return make_scalar(u32_be((value(a) + kOrder - value(b)) % kOrder));
}

Scalar ToyGroup::mul(const Scalar& a, const Scalar& b) const {
    return make_scalar(u32_be(value(a) * value(b) % kOrder));
}

Scalar ToyGroup::inverse(const Scalar& a) const {
    const std::uint32_t v = value(a);
    if (v == 0) throw std::domain_error("inverse of zero scalar");
    // q is prime: a^(q-2) = a^-1.
    return make_scalar(u32_be(pow_mod(v, kOrder - 2, kOrder)));
}

std::optional<GroupElement> ToyGroup::decode_element(ByteView enc) const {
    if (enc.size() != 4) return std::nullopt;
    const std::uint32_t v = read_u32_be(enc);
    if (!is_member(v)) return std::nullopt;
    return make_element(Bytes(enc.begin(), enc.end()));
}

GroupElement ToyGroup::exp(const GroupElement& base, const Scalar& e) const {
    return make_element(u32_be(pow_mod(value(base), value(e), kModulus)));
}

GroupElement ToyGroup::mul(const GroupElement& a, const GroupElement& b) const {
    return make_element(u32_be(value(a) * value(b) % kModulus));
}

const ToyGroup& toy_group() {
    static const ToyGroup group;
    return group;
}

} // namespace przk
