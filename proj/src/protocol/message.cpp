#include "przk/message.hpp"

#include <type_traits>

namespace przk::protocol {

std::string_view to_string(Reason r) {
    switch (r) {
    case Reason::Ok: return "ok";
    case Reason::BadProof: return "bad_proof";
    case Reason::BadIdentity: return "bad_identity";
    case Reason::DegenerateCommitment: return "degenerate_commitment";
    case Reason::OutOfOrder: return "out_of_order";
    case Reason::Timeout: return "timeout";
    case Reason::Malformed: return "malformed";
    }
    return "unknown";
}

std::string_view to_string(MessageTag t) {
    switch (t) {
    case MessageTag::Commit: return "Commit";
    case MessageTag::Challenge: return "Challenge";
    case MessageTag::Response: return "Response";
    case MessageTag::IdentityProof: return "IdentityProof";
    case MessageTag::Verdict: return "Verdict";
    }
    return "Unknown";
}

MessageTag tag_of(const Message& m) {
    return static_cast<MessageTag>(m.index() + 1);
}

Bytes encode(const Message& m) {
    Bytes payload;
    auto put = [&payload](const Bytes& b) { payload.insert(payload.end(), b.begin(), b.end()); };
    std::visit(
        [&](const auto& msg) {
            using T = std::decay_t<decltype(msg)>;
            if constexpr (std::is_same_v<T, Commit>) {
                put(msg.alpha.bytes());
            } else if constexpr (std::is_same_v<T, Challenge>) {
                put(msg.c.bytes());
            } else if constexpr (std::is_same_v<T, Response>) {
                put(msg.z.bytes());
            } else if constexpr (std::is_same_v<T, IdentityProof>) {
                put(msg.h_sp.bytes());
                put(msg.r_p_pub.bytes());
            } else {
                payload.push_back(msg.accept ? 1 : 0);
                payload.push_back(static_cast<std::uint8_t>(msg.reason));
            }
        },
        m);

    Bytes frame;
    frame.reserve(5 + payload.size());
    frame.push_back(static_cast<std::uint8_t>(tag_of(m)));
    append_u32_be(frame, static_cast<std::uint32_t>(payload.size()));
    frame.insert(frame.end(), payload.begin(), payload.end());
    return frame;
}

namespace {

Scalar scalar_field(const Group& group, ByteView b) {
    auto s = group.decode_scalar(b);
    if (!s) throw DecodeError("non-canonical scalar");
    return *s;
}

GroupElement element_field(const Group& group, ByteView b) {
    auto e = group.decode_element(b);
    if (!e) throw DecodeError("not a group element");
    return *e;
}

} // namespace

Message decode(const Group& group, ByteView frame) {
    if (frame.size() < 5) throw DecodeError("frame shorter than header");
    const std::uint8_t tag = frame[0];
    const std::uint32_t len = read_u32_be(frame.subspan(1, 4));
    if (frame.size() - 5 != len) throw DecodeError("payload length mismatch");
    const ByteView payload = frame.subspan(5);
    const std::size_t ss = group.scalar_size();

    switch (static_cast<MessageTag>(tag)) {
    case MessageTag::Commit:
        return Commit{element_field(group, payload)};
    case MessageTag::Challenge:
        return Challenge{scalar_field(group, payload)};
    case MessageTag::Response:
        return Response{scalar_field(group, payload)};
    case MessageTag::IdentityProof:
        if (payload.size() <= ss) throw DecodeError("identity proof too short");
        return IdentityProof{scalar_field(group, payload.first(ss)), element_field(group, payload.subspan(ss))};
    case MessageTag::Verdict: {
        if (payload.size() != 2) throw DecodeError("verdict payload must be 2 bytes");
        if (payload[0] > 1) throw DecodeError("verdict accept flag must be 0 or 1");
        if (payload[1] > static_cast<std::uint8_t>(Reason::Malformed)) throw DecodeError("unknown verdict reason");
        const bool accept = payload[0] == 1;
        const auto reason = static_cast<Reason>(payload[1]);
        if (accept != (reason == Reason::Ok)) throw DecodeError("verdict flag and reason disagree");
        return Verdict{accept, reason};
    }
    }
    throw DecodeError("unknown message tag " + std::to_string(tag));
}

} // namespace przk::protocol
