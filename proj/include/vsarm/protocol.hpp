#pragma once

#include "vsarm/simulator.hpp"

#include <string>
#include <string_view>
#include <variant>

namespace vsarm {

// Client -> server messages:
//   {"type":"knob","id":1..4,"dir":+1|-1}
//   {"type":"button","id":1..4}
//   {"type":"pressure","segment":int,"psi":number}
//   {"type":"load","point":"tip"|"connector","newtons":number}
//   {"type":"reset"}
struct ProtocolError {
    std::string reason;
};

std::variant<Event, ProtocolError> parse_client_message(std::string_view text);

/// Server -> client state broadcast.
std::string state_message(const SessionState& state, const SimConfig& cfg);

std::string error_message(std::string_view reason);

/// Client message for an event; the inverse of parse_client_message.
std::string client_message(const Event& ev);

// One client's session: owns its state and answers each inbound message with
// exactly one outbound message (state or error). Transport-independent.
class TeleopSession {
public:
    explicit TeleopSession(SimConfig cfg);

    /// State message sent when a client connects.
    std::string greeting() const;
    std::string handle(std::string_view message);

    const SessionState& state() const { return state_; }

private:
    SimConfig cfg_;
    SessionState state_;
};

}  // namespace vsarm
