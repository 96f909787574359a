#include "przk/hash.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace przk {

namespace {

struct MdCtxFree {
    void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
};

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new()) {
        if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
            throw std::runtime_error("SHA-256 init failed");
        }
    }

    void update(ByteView data) {
        if (EVP_DigestUpdate(ctx_.get(), data.data(), data.size()) != 1) {
            throw std::runtime_error("SHA-256 update failed");
        }
    }

    Digest finish() {
        Digest out{};
        unsigned int len = 0;
        if (EVP_DigestFinal_ex(ctx_.get(), out.data(), &len) != 1 || len != out.size()) {
            throw std::runtime_error("SHA-256 final failed");
        }
        return out;
    }

private:
    std::unique_ptr<EVP_MD_CTX, MdCtxFree> ctx_;
};

} // namespace

Digest sha256(ByteView data) {
    Sha256 h;
    h.update(data);
    return h.finish();
}

Digest tagged_hash(HashDomain domain, std::initializer_list<ByteView> fields) {
    Sha256 h;
    const std::uint8_t tag = static_cast<std::uint8_t>(domain);
    h.update(ByteView(&tag, 1));
    for (ByteView field : fields) {
        const Bytes len = u32_be(static_cast<std::uint32_t>(field.size()));
        h.update(len);
        h.update(field);
    }
    return h.finish();
}

Digest h1_bytes(std::initializer_list<ByteView> fields) {
    return tagged_hash(HashDomain::H1, fields);
}

Scalar h1(const Group& group, std::initializer_list<ByteView> fields) {
    return group.reduce(h1_bytes(fields));
}

Digest h2(std::initializer_list<ByteView> fields) {
    return tagged_hash(HashDomain::H2, fields);
}

} // namespace przk
