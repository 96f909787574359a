#include "przk/group.hpp"

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/obj_mac.h>

#include <algorithm>
#include <memory>
#include <stdexcept>

namespace przk {

namespace {

struct BnFree {
    void operator()(BIGNUM* p) const { BN_clear_free(p); }
};
struct BnCtxFree {
    void operator()(BN_CTX* p) const { BN_CTX_free(p); }
};
struct EcGroupFree {
    void operator()(EC_GROUP* p) const { EC_GROUP_free(p); }
};
struct EcPointFree {
    void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};

using BnPtr = std::unique_ptr<BIGNUM, BnFree>;
using EcPointPtr = std::unique_ptr<EC_POINT, EcPointFree>;

void check(int ok, const char* what) {
    if (ok != 1) throw std::runtime_error(std::string("OpenSSL failure: ") + what);
}

BN_CTX* thread_ctx() {
    thread_local std::unique_ptr<BN_CTX, BnCtxFree> ctx(BN_CTX_new());
    if (!ctx) throw std::runtime_error("BN_CTX_new failed");
    return ctx.get();
}

BnPtr bn_from(ByteView be) {
    BnPtr bn(BN_bin2bn(be.data(), static_cast<int>(be.size()), nullptr));
    if (!bn) throw std::runtime_error("BN_bin2bn failed");
    return bn;
}

BnPtr bn_new() {
    BnPtr bn(BN_new());
    if (!bn) throw std::runtime_error("BN_new failed");
    return bn;
}

class P256Group final : public Group {
public:
    P256Group() : group_(EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1)) {
        if (!group_) throw std::runtime_error("secp256r1 unavailable");
        order_ = bn_new();
        check(EC_GROUP_get_order(group_.get(), order_.get(), thread_ctx()), "EC_GROUP_get_order");
        generator_ = encode(EC_GROUP_get0_generator(group_.get()));
    }

    GroupId id() const override { return GroupId::P256; }
    std::size_t scalar_size() const override { return 32; }
    std::size_t order_bits() const override { return static_cast<std::size_t>(BN_num_bits(order_.get())); }
    Bytes order() const override { return to_scalar_bytes(order_.get()); }

    std::optional<Scalar> decode_scalar(ByteView be) const override {
        if (be.size() != 32) return std::nullopt;
        auto bn = bn_from(be);
        if (BN_cmp(bn.get(), order_.get()) >= 0) return std::nullopt;
        return make_scalar(Bytes(be.begin(), be.end()));
    }

    Scalar reduce(ByteView be) const override {
        auto bn = bn_from(be);
        auto r = bn_new();
        check(BN_nnmod(r.get(), bn.get(), order_.get(), thread_ctx()), "BN_nnmod");
        return make_scalar(to_scalar_bytes(r.get()));
    }

    Scalar add(const Scalar& a, const Scalar& b) const override {
        auto x = bn_from(a.bytes()), y = bn_from(b.bytes()), r = bn_new();
        check(BN_mod_add(r.get(), x.get(), y.get(), order_.get(), thread_ctx()), "BN_mod_add");
        return make_scalar(to_scalar_bytes(r.get()));
    }

    Scalar sub(const Scalar& a, const Scalar& b) const override {
        auto x = bn_from(a.bytes()), y = bn_from(b.bytes()), r = bn_new();
        check(BN_mod_sub(r.get(), x.get(), y.get(), order_.get(), thread_ctx()), "BN_mod_sub");
        return make_scalar(to_scalar_bytes(r.get()));
    }

    Scalar mul(const Scalar& a, const Scalar& b) const override {
        auto x = bn_from(a.bytes()), y = bn_from(b.bytes()), r = bn_new();
        check(BN_mod_mul(r.get(), x.get(), y.get(), order_.get(), thread_ctx()), "BN_mod_mul");
        return make_scalar(to_scalar_bytes(r.get()));
    }

    Scalar inverse(const Scalar& a) const override {
        if (is_zero(a)) throw std::domain_error("inverse of zero scalar");
        auto x = bn_from(a.bytes()), r = bn_new();
        if (BN_mod_inverse(r.get(), x.get(), order_.get(), thread_ctx()) == nullptr) {
            throw std::runtime_error("BN_mod_inverse failed");
        }
        return make_scalar(to_scalar_bytes(r.get()));
    }

    GroupElement generator() const override { return make_element(generator_); }
    GroupElement identity() const override { return make_element(Bytes{0x00}); }

    std::optional<GroupElement> decode_element(ByteView enc) const override {
        // Canonical form is compressed (33 bytes) or the 1-byte identity.
        if (enc.size() == 1) {
            if (enc[0] != 0x00) return std::nullopt;
            return identity();
        }
        if (enc.size() != 33 || (enc[0] != 0x02 && enc[0] != 0x03)) return std::nullopt;
        EcPointPtr p(EC_POINT_new(group_.get()));
        if (!p) throw std::runtime_error("EC_POINT_new failed");
        if (EC_POINT_oct2point(group_.get(), p.get(), enc.data(), enc.size(), thread_ctx()) != 1) {
            return std::nullopt;
        }
        // oct2point rejects x >= p and off-curve x; re-encode to be certain.
        Bytes canonical = encode(p.get());
        if (!std::equal(canonical.begin(), canonical.end(), enc.begin(), enc.end())) return std::nullopt;
        return make_element(std::move(canonical));
    }

    GroupElement exp(const GroupElement& base, const Scalar& e) const override {
        auto k = bn_from(e.bytes());
        EcPointPtr r(EC_POINT_new(group_.get()));
        if (!r) throw std::runtime_error("EC_POINT_new failed");
        if (base.bytes() == generator_) {
            check(EC_POINT_mul(group_.get(), r.get(), k.get(), nullptr, nullptr, thread_ctx()), "EC_POINT_mul(g)");
        } else {
            EcPointPtr b = decode(base);
            check(EC_POINT_mul(group_.get(), r.get(), nullptr, b.get(), k.get(), thread_ctx()), "EC_POINT_mul");
        }
        return make_element(encode(r.get()));
    }

    GroupElement mul(const GroupElement& a, const GroupElement& b) const override {
        EcPointPtr x = decode(a), y = decode(b);
        EcPointPtr r(EC_POINT_new(group_.get()));
        if (!r) throw std::runtime_error("EC_POINT_new failed");
        check(EC_POINT_add(group_.get(), r.get(), x.get(), y.get(), thread_ctx()), "EC_POINT_add");
        return make_element(encode(r.get()));
    }

private:
    Bytes encode(const EC_POINT* p) const {
        if (EC_POINT_is_at_infinity(group_.get(), p) == 1) return Bytes{0x00};
        Bytes out(33);
        const std::size_t n = EC_POINT_point2oct(group_.get(), p, POINT_CONVERSION_COMPRESSED, out.data(),
                                                 out.size(), thread_ctx());
        if (n != 33) throw std::runtime_error("EC_POINT_point2oct failed");
        return out;
    }

    EcPointPtr decode(const GroupElement& x) const {
        EcPointPtr p(EC_POINT_new(group_.get()));
        if (!p) throw std::runtime_error("EC_POINT_new failed");
        const Bytes& enc = x.bytes();
        if (enc.size() == 1) {
            check(EC_POINT_set_to_infinity(group_.get(), p.get()), "EC_POINT_set_to_infinity");
        } else {
            check(EC_POINT_oct2point(group_.get(), p.get(), enc.data(), enc.size(), thread_ctx()),
                  "EC_POINT_oct2point");
        }
        return p;
    }

    static Bytes to_scalar_bytes(const BIGNUM* bn) {
        Bytes out(32);
        if (BN_bn2binpad(bn, out.data(), static_cast<int>(out.size())) != 32) {
            throw std::runtime_error("BN_bn2binpad failed");
        }
        return out;
    }

    std::unique_ptr<EC_GROUP, EcGroupFree> group_;
    BnPtr order_;
    Bytes generator_;
};

} // namespace

const Group& p256_group() {
    static const P256Group group;
    return group;
}

} // namespace przk
