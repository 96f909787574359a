#include "przk/group.hpp"

#include <stdexcept>

namespace przk {

std::string_view to_string(GroupId id) {
    switch (id) {
    case GroupId::Toy: return "toy";
    case GroupId::P256: return "p256";
    }
    return "unknown";
}

GroupId parse_group_id(std::string_view name) {
    if (name == "toy") return GroupId::Toy;
    if (name == "p256" || name == "secp256r1" || name == "production") return GroupId::P256;
    throw std::invalid_argument("unknown group id '" + std::string(name) + "'");
}

Scalar Group::scalar(std::uint64_t v) const {
    return reduce(u64_be(v));
}

bool Group::is_zero(const Scalar& s) const {
    for (std::uint8_t b : s.bytes()) {
        if (b != 0) return false;
    }
    return true;
}

Scalar Group::random_scalar(Rng& rng) const {
    const std::size_t size = scalar_size();
    const std::size_t bits = order_bits();
    const std::size_t excess = size * 8 - bits;
    Bytes buf(size);
    for (;;) {
        rng.fill(buf);
        // Mask down to bit-length of q, then reject values >= q.
        for (std::size_t i = 0; i < excess / 8; ++i) buf[i] = 0;
        if (excess % 8 != 0) {
            buf[excess / 8] &= static_cast<std::uint8_t>(0xff >> (excess % 8));
        }
        if (auto s = decode_scalar(buf)) return *s;
    }
}

Scalar Group::random_nonzero_scalar(Rng& rng) const {
    for (;;) {
        Scalar s = random_scalar(rng);
        if (!is_zero(s)) return s;
    }
}

Scalar Group::scalar_from_bytes(ByteView be) const {
    auto s = decode_scalar(be);
    if (!s) throw DecodeError("not a canonical scalar encoding");
    return *s;
}

GroupElement Group::element_from_bytes(ByteView enc) const {
    auto e = decode_element(enc);
    if (!e) throw DecodeError("not a canonical group element encoding");
    return *e;
}

const Group& group_for(GroupId id) {
    switch (id) {
    case GroupId::Toy: return toy_group();
    case GroupId::P256: return p256_group();
    }
    throw std::invalid_argument("unknown group id");
}

} // namespace przk
