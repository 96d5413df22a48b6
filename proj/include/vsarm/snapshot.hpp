#pragma once

#include "vsarm/simulator.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace vsarm {

class SnapshotError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Canonical single-line JSON record of a session state. Includes a "derived"
/// block (tendons, tip, capacity) recomputed from the state on every call.
std::string snapshot_serialize(const SessionState& state, const SimConfig& cfg);

/// Parses a record written by snapshot_serialize. The derived block is ignored.
SessionState snapshot_parse(std::string_view text);

/// {"snapshots":[...],"errors":[...]} with one snapshot per line.
std::string trajectory_serialize(const Trajectory& t, const SimConfig& cfg);

}  // namespace vsarm
