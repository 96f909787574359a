#ifndef PRZK_GROUP_HPP
#define PRZK_GROUP_HPP

#include "przk/bytes.hpp"
#include "przk/rng.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace przk {

enum class GroupId : std::uint8_t { Toy, P256 };

std::string_view to_string(GroupId id);
// Accepts "toy", "p256", "secp256r1" and "production".
GroupId parse_group_id(std::string_view name);

// Element of Z_q, held in its canonical fixed-width big-endian encoding.
// Only a Group hands these out, so every Scalar in circulation is < q.
class Scalar {
public:
    Scalar() = default;
    const Bytes& bytes() const { return be_; }
    friend bool operator==(const Scalar&, const Scalar&) = default;
    friend auto operator<=>(const Scalar&, const Scalar&) = default;

private:
    friend class Group;
    explicit Scalar(Bytes be) : be_(std::move(be)) {}
    Bytes be_;
};

// Group member, held in its canonical encoding (4-byte residue for the toy
// group, SEC1 compressed point for P-256, where the identity is the single
// byte 0x00).
class GroupElement {
public:
    GroupElement() = default;
    const Bytes& bytes() const { return enc_; }
    friend bool operator==(const GroupElement&, const GroupElement&) = default;
    friend auto operator<=>(const GroupElement&, const GroupElement&) = default;

private:
    friend class Group;
    explicit GroupElement(Bytes enc) : enc_(std::move(enc)) {}
    Bytes enc_;
};

// A prime-order cyclic group G = <g> with its scalar field Z_q, written
// multiplicatively.
class Group {
public:
    virtual ~Group() = default;

    virtual GroupId id() const = 0;
    virtual std::size_t scalar_size() const = 0;
    virtual std::size_t order_bits() const = 0;
    // q as a big-endian byte string of scalar_size() bytes.
    virtual Bytes order() const = 0;

    // -- scalars ---------------------------------------------------------
    // Rejects anything that is not exactly scalar_size() bytes and < q.
    virtual std::optional<Scalar> decode_scalar(ByteView be) const = 0;
    // Interprets an arbitrary-length big-endian integer and reduces it mod q.
    virtual Scalar reduce(ByteView be) const = 0;
    virtual Scalar add(const Scalar& a, const Scalar& b) const = 0;
    virtual Scalar sub(const Scalar& a, const Scalar& b) const = 0;
    virtual Scalar mul(const Scalar& a, const Scalar& b) const = 0;
    // Throws std::domain_error on zero.
    virtual Scalar inverse(const Scalar& a) const = 0;

    Scalar scalar(std::uint64_t v) const;
    Scalar zero() const { return scalar(0); }
    bool is_zero(const Scalar& s) const;
    Scalar neg(const Scalar& a) const { return sub(zero(), a); }
    Scalar random_scalar(Rng& rng) const;
    Scalar random_nonzero_scalar(Rng& rng) const;

    // -- elements --------------------------------------------------------
    virtual GroupElement generator() const = 0;
    virtual GroupElement identity() const = 0;
    virtual std::optional<GroupElement> decode_element(ByteView enc) const = 0;
    virtual GroupElement exp(const GroupElement& base, const Scalar& e) const = 0;
    virtual GroupElement mul(const GroupElement& a, const GroupElement& b) const = 0;

    GroupElement exp_g(const Scalar& e) const { return exp(generator(), e); }
    bool is_identity(const GroupElement& x) const { return x == identity(); }

    // Throwing variants for trusted-format inputs (files, tests).
    Scalar scalar_from_bytes(ByteView be) const;
    GroupElement element_from_bytes(ByteView enc) const;

protected:
    static Scalar make_scalar(Bytes be) { return Scalar(std::move(be)); }
    static GroupElement make_element(Bytes enc) { return GroupElement(std::move(enc)); }
};

// Order-11 subgroup of Z_23^*, generated by 2. Small enough that discrete logs
// and every protocol transcript can be enumerated in tests.
class ToyGroup final : public Group {
public:
    static constexpr std::uint32_t kModulus = 23;
    static constexpr std::uint32_t kOrder = 11;
    static constexpr std::uint32_t kGenerator = 2;

    GroupId id() const override { return GroupId::Toy; }
    std::size_t scalar_size() const override { return 4; }
    std::size_t order_bits() const override { return 4; }
    Bytes order() const override;

    std::optional<Scalar> decode_scalar(ByteView be) const override;
    Scalar reduce(ByteView be) const override;
    Scalar add(const Scalar& a, const Scalar& b) const override;
    Scalar sub(const Scalar& a, const Scalar& b) const override;
    Scalar mul(const Scalar& a, const Scalar& b) const override;
    Scalar inverse(const Scalar& a) const override;

    GroupElement generator() const override { return element(kGenerator); }
    GroupElement identity() const override { return element(1); }
    std::optional<GroupElement> decode_element(ByteView enc) const override;
    GroupElement exp(const GroupElement& base, const Scalar& e) const override;
    GroupElement mul(const GroupElement& a, const GroupElement& b) const override;

    // Residue helpers for tests. element() throws for non-members.
    GroupElement element(std::uint32_t residue) const;
    static std::uint32_t value(const GroupElement& x);
    static std::uint32_t value(const Scalar& s);
    static bool is_member(std::uint32_t residue);
};

const ToyGroup& toy_group();
// secp256r1, via OpenSSL.
const Group& p256_group();
const Group& group_for(GroupId id);

} // namespace przk

#endif
