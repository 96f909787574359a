#include "przk/channel.hpp"

#include <queue>
#include <string>

namespace przk::sim {

namespace {

struct Pending {
    double at_ms;
    std::size_t seq;
    Role from;
    Role to;
    double sent_at_ms;
    double delay_ms;
    Bytes frame;
    bool tampered;
};

struct Later {
    bool operator()(const Pending& a, const Pending& b) const {
        if (a.at_ms != b.at_ms) return a.at_ms > b.at_ms;
        return a.seq > b.seq;
    }
};

} // namespace

ChannelLog run_channel(Endpoint& twin, Endpoint& entity, const LatencyFn& latency, const Interceptor& interceptor,
                       std::size_t max_deliveries) {
    std::priority_queue<Pending, std::vector<Pending>, Later> queue;
    std::size_t next_seq = 0;
    ChannelLog log;

    auto send = [&](Role from, std::vector<Bytes> frames, double now) {
        for (Bytes& frame : frames) {
            const std::size_t seq = next_seq++;
            const bool tampered = interceptor ? interceptor(seq, from, frame) : false;
            const double delay = latency();
            const Role to = from == Role::Twin ? Role::Entity : Role::Twin;
            queue.push({now + delay, seq, from, to, now, delay, std::move(frame), tampered});
        }
    };

    send(Role::Twin, twin.start(0.0), 0.0);
    send(Role::Entity, entity.start(0.0), 0.0);

    double now = 0.0;
    while (!queue.empty()) {
        if (log.deliveries.size() >= max_deliveries) {
            throw DeadlockError("channel exceeded " + std::to_string(max_deliveries) + " deliveries");
        }
        Pending p = queue.top();
        queue.pop();
        now = p.at_ms;
        Endpoint& target = p.to == Role::Twin ? twin : entity;
        auto replies = target.receive(p.frame, now);
        log.deliveries.push_back({p.seq, p.from, p.to, p.sent_at_ms, p.delay_ms, now, std::move(p.frame), p.tampered});
        send(p.to, std::move(replies), now);
    }

    twin.timeout(now);
    entity.timeout(now);
    if (!twin.finished() || !entity.finished()) {
        throw DeadlockError("session drained without reaching a terminal state");
    }
    log.end_ms = now;
    return log;
}

protocol::Transcript transcript_of(const Group& group, const ChannelLog& log) {
    protocol::Transcript t;
    for (const Delivery& d : log.deliveries) {
        try {
            t.record(protocol::decode(group, d.frame), d.delivered_at_ms);
        } catch (const DecodeError&) {
        }
    }
    return t;
}

} // namespace przk::sim
