#ifndef PRZK_CHANNEL_HPP
#define PRZK_CHANNEL_HPP

#include "przk/bytes.hpp"
#include "przk/endpoint.hpp"
#include "przk/proof.hpp"

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace przk::sim {

using protocol::Endpoint;
using protocol::Role;

class DeadlockError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Delivery {
    std::size_t seq = 0;  // send order, 0-based
    Role from = Role::Twin;
    Role to = Role::Entity;
    double sent_at_ms = 0;
    double delay_ms = 0;
    double delivered_at_ms = 0;
    Bytes frame;          // as delivered (after any interception)
    bool tampered = false;
};

struct ChannelLog {
    std::vector<Delivery> deliveries;
    double end_ms = 0;
};

// Draws the one-way delay for the next frame.
using LatencyFn = std::function<double()>;

// Sees every frame before delivery and may rewrite it in place. Returns true
// if it modified the frame.
using Interceptor = std::function<bool(std::size_t seq, Role from, Bytes& frame)>;

inline LatencyFn zero_latency() {
    return [] { return 0.0; };
}

// Discrete-event run of one session between a twin-side and an entity-side
// endpoint. Frames are delivered in (delivery time, send order). When the
// queue drains, every endpoint gets timeout(); if one is still unfinished the
// run throws DeadlockError.
ChannelLog run_channel(Endpoint& twin, Endpoint& entity, const LatencyFn& latency,
                       const Interceptor& interceptor = nullptr, std::size_t max_deliveries = 64);

// Decodes the delivered frames into the public transcript an eavesdropper
// would record. Undecodable frames are skipped.
protocol::Transcript transcript_of(const Group& group, const ChannelLog& log);

} // namespace przk::sim

#endif
