#pragma once

#include "vsarm/simulator.hpp"

#include <memory>
#include <string>

namespace vsarm {

// WebSocket endpoint for the teleoperation protocol. Every connection gets
// its own TeleopSession; messages on one connection are handled in arrival
// order. All I/O runs on the thread that calls run().
class TeleopServer {
public:
    explicit TeleopServer(SimConfig cfg);
    ~TeleopServer();
    TeleopServer(const TeleopServer&) = delete;
    TeleopServer& operator=(const TeleopServer&) = delete;

    /// Binds and starts accepting. Port 0 picks a free port; returns the bound port.
    unsigned short listen(const std::string& address, unsigned short port);

    /// Blocks until stop() is called.
    void run();

    /// Safe to call from any thread.
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace vsarm
