#ifndef PRZK_ENDPOINT_HPP
#define PRZK_ENDPOINT_HPP

#include "przk/bytes.hpp"
#include "przk/group.hpp"
#include "przk/rng.hpp"
#include "przk/session.hpp"

#include <optional>
#include <vector>

namespace przk::protocol {

enum class Role : std::uint8_t { Twin, Entity };

// A party attached to a simulated channel. Frames in, frames out; `now` is
// virtual time in milliseconds.
class Endpoint {
public:
    virtual ~Endpoint() = default;

    virtual std::vector<Bytes> start(double /*now*/) { return {}; }
    virtual std::vector<Bytes> receive(ByteView frame, double now) = 0;
    // Called once the channel has drained with no further deliveries.
    virtual void timeout(double /*now*/) {}
    // True when the party no longer needs input to reach a verdict.
    virtual bool finished() const = 0;
};

// Honest D. Opens the session with a Commit.
class TwinEndpoint final : public Endpoint {
public:
    TwinEndpoint(TwinSession session, Rng rng) : session_(std::move(session)), rng_(std::move(rng)) {}

    std::vector<Bytes> start(double now) override;
    std::vector<Bytes> receive(ByteView frame, double now) override;
    void timeout(double now) override;
    bool finished() const override;

    const TwinSession& session() const { return session_; }
    // Virtual time at which D reached KeyEstablished or Failed.
    std::optional<double> decided_at() const { return decided_at_; }

private:
    void note_time(double now);

    TwinSession session_;
    Rng rng_;
    std::optional<double> decided_at_;
};

// Honest P.
class EntityEndpoint final : public Endpoint {
public:
    EntityEndpoint(EntitySession session, Rng rng) : session_(std::move(session)), rng_(std::move(rng)) {}

    std::vector<Bytes> receive(ByteView frame, double now) override;
    void timeout(double now) override;
    bool finished() const override;

    const EntitySession& session() const { return session_; }
    std::optional<double> decided_at() const { return decided_at_; }
    // Virtual time at which D's accepting Verdict reached P.
    std::optional<double> confirmed_at() const { return confirmed_at_; }

private:
    void note_time(double now);

    EntitySession session_;
    Rng rng_;
    std::optional<double> decided_at_;
    std::optional<double> confirmed_at_;
};

} // namespace przk::protocol

#endif
