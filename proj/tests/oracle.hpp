#ifndef PRZK_TESTS_ORACLE_HPP
#define PRZK_TESTS_ORACLE_HPP

// Reference values computed outside the library: plain modular arithmetic for
// the order-11 subgroup of Z_23^*, and SHA-256 digests produced by Python's
// hashlib over the documented framing (tag byte, then u32 BE length || field).

#include "przk/group.hpp"
#include "przk/hash.hpp"

#include <cstdint>
#include <string_view>

namespace oracle {

inline constexpr std::uint64_t kP = 23;
inline constexpr std::uint64_t kQ = 11;

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    for (std::uint64_t i = 0; i < e; ++i) r = r * base % m;
    return r;
}

inline std::uint64_t g_pow(std::uint64_t e) { return pow_mod(2, e, kP); }

inline std::uint64_t inv_mod_q(std::uint64_t a) {
    for (std::uint64_t x = 1; x < kQ; ++x) {
        if (a * x % kQ == 1) return x;
    }
    return 0;
}

// zeta for toy pk_p = 13, pk_d = 8, t = 1700000000.
inline constexpr std::string_view kToyZeta = "c59e7d58ab270f96a63d426627dcc6ad6cdb44d497d14ac0fef075d6bed3578b";
// H1_bytes(enc(9) || kToyZeta): session key for shared point 9.
inline constexpr std::string_view kToyKey9 = "8dfd041a535c56d65772946ba452151fa6e5951f2442c3f150fdac872a541d57";
// H1(enc(9) || kToyZeta || 16 zero bytes) mod 11.
inline constexpr std::uint32_t kToyChallengeAlpha9ZeroNonce = 4;
// H1 and H2 of no fields.
inline constexpr std::string_view kH1Empty = "4bf5122f344554c53bde2ebb8cd2b7e3d1600ad631c385a5d7cce23c7785459a";
inline constexpr std::string_view kH2Empty = "dbc1b4c900ffe48d575b5da5c638040125f65db0fe3e24494b76ea986457d986";
// S_p provisioned from seed "tl-001", and H1(S_p) reduced in both groups.
inline constexpr std::string_view kSpTl001 = "0155eaa4bcf476700a000bc8fb225475e1c6716ca2f3940714308f73fb90dfb4";
inline constexpr std::uint32_t kToyHspTl001 = 2;
inline constexpr std::string_view kP256HspTl001 = "a9ba49e2a590448d687e52edd9ca7f43dd2f6c959cfa1b303132328429ff5e1e";
// secp256r1 group order n.
inline constexpr std::string_view kP256Order = "ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551";
// SEC1 compressed encoding of the secp256r1 base point.
inline constexpr std::string_view kP256Generator =
    "036b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296";

inline std::string hex(const przk::Digest& d) { return przk::to_hex(d); }

} // namespace oracle

#endif
