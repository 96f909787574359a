#include "przk/endpoint.hpp"

namespace przk::protocol {

namespace {

bool terminal(Phase p) { return p == Phase::KeyEstablished || p == Phase::Failed; }

template <typename Session, typename Deliver>
std::vector<Bytes> handle_frame(Session& session, const Group& group, ByteView frame, Deliver deliver) {
    if (session.phase() == Phase::Failed) return {};
    std::optional<Message> reply;
    try {
        reply = deliver(decode(group, frame));
    } catch (const DecodeError&) {
        session.fail(Reason::Malformed);
        reply = Verdict{false, Reason::Malformed};
    }
    if (!reply) return {};
    return {encode(*reply)};
}

} // namespace

std::vector<Bytes> TwinEndpoint::start(double now) {
    std::vector<Bytes> out{encode(session_.commit(rng_))};
    note_time(now);
    return out;
}

std::vector<Bytes> TwinEndpoint::receive(ByteView frame, double now) {
    auto out = handle_frame(session_, session_.group(), frame, [this](const Message& m) { return session_.receive(m); });
    note_time(now);
    return out;
}

void TwinEndpoint::timeout(double now) {
    session_.timeout();
    note_time(now);
}

bool TwinEndpoint::finished() const { return terminal(session_.phase()); }

void TwinEndpoint::note_time(double now) {
    if (!decided_at_ && terminal(session_.phase())) decided_at_ = now;
}

std::vector<Bytes> EntityEndpoint::receive(ByteView frame, double now) {
    auto out = handle_frame(session_, session_.group(), frame,
                            [this](const Message& m) { return session_.receive(m, rng_); });
    note_time(now);
    return out;
}

void EntityEndpoint::timeout(double now) {
    session_.timeout();
    note_time(now);
}

bool EntityEndpoint::finished() const { return terminal(session_.phase()); }

void EntityEndpoint::note_time(double now) {
    if (!decided_at_ && terminal(session_.phase())) decided_at_ = now;
    if (!confirmed_at_ && session_.confirmed() && session_.phase() == Phase::KeyEstablished) confirmed_at_ = now;
}

} // namespace przk::protocol
