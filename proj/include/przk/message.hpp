#ifndef PRZK_MESSAGE_HPP
#define PRZK_MESSAGE_HPP

#include "przk/bytes.hpp"
#include "przk/group.hpp"

#include <cstdint>
#include <string_view>
#include <variant>

namespace przk::protocol {

enum class MessageTag : std::uint8_t {
    Commit = 0x01,
    Challenge = 0x02,
    Response = 0x03,
    IdentityProof = 0x04,
    Verdict = 0x05,
};

enum class Reason : std::uint8_t {
    Ok = 0,
    BadProof = 1,
    BadIdentity = 2,
    DegenerateCommitment = 3,
    OutOfOrder = 4,
    Timeout = 5,
    Malformed = 6,
};

std::string_view to_string(Reason r);
std::string_view to_string(MessageTag t);

struct Commit {
    GroupElement alpha;
    friend bool operator==(const Commit&, const Commit&) = default;
};

struct Challenge {
    Scalar c;
    friend bool operator==(const Challenge&, const Challenge&) = default;
};

struct Response {
    Scalar z;
    friend bool operator==(const Response&, const Response&) = default;
};

struct IdentityProof {
    Scalar h_sp;
    GroupElement r_p_pub;
    friend bool operator==(const IdentityProof&, const IdentityProof&) = default;
};

struct Verdict {
    bool accept = false;
    Reason reason = Reason::Ok;
    friend bool operator==(const Verdict&, const Verdict&) = default;
};

using Message = std::variant<Commit, Challenge, Response, IdentityProof, Verdict>;

MessageTag tag_of(const Message& m);

// Frame: tag (1 byte) || payload length (u32 BE) || fields in declaration
// order, each in its group's canonical encoding. Verdict is accept (0/1) ||
// reason.
Bytes encode(const Message& m);

// Throws DecodeError on unknown tags, length mismatches, non-canonical fields
// or elements outside the group.
Message decode(const Group& group, ByteView frame);

} // namespace przk::protocol

#endif
