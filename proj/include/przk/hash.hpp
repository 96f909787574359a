#ifndef PRZK_HASH_HPP
#define PRZK_HASH_HPP

#include "przk/bytes.hpp"
#include "przk/group.hpp"

#include <array>
#include <cstdint>
#include <initializer_list>

namespace przk {

using Digest = std::array<std::uint8_t, 32>;

// Domain tags prepended to every hash input. Each field is then framed with a
// 4-byte big-endian length, so (a, b) and (a || b) never collide.
enum class HashDomain : std::uint8_t {
    H1 = 0x01,
    H2 = 0x02,
};

Digest sha256(ByteView data);

Digest tagged_hash(HashDomain domain, std::initializer_list<ByteView> fields);

// H1 as a 32-byte string (session keys) and reduced mod q (challenges,
// identity hashes). Both share the same tag, so h1() == reduce(h1_bytes()).
Digest h1_bytes(std::initializer_list<ByteView> fields);
Scalar h1(const Group& group, std::initializer_list<ByteView> fields);

Digest h2(std::initializer_list<ByteView> fields);

} // namespace przk

#endif
