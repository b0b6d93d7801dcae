#pragma once

#include "gazegrasp/config.hpp"

#include <nlohmann/json_fwd.hpp>

#include <memory>
#include <optional>
#include <string>
#include <variant>

namespace gazegrasp {

// Client -> server messages of wire protocol v1.
struct GazeMessage {
  double t = 0.0;  // client timestamp; the session restamps on arrival
  Pixel px;
};
struct ResetMessage {};
struct InjectFaultMessage {
  FaultConfig faults;
  bool spike_now = false;  // force_spike given without "t"
};
using ClientMessage = std::variant<GazeMessage, ResetMessage, InjectFaultMessage>;

// Throws ParseError describing what is wrong with the frame.
ClientMessage parse_client_message(std::string_view frame, const Scene& scene);
std::string error_frame(const std::string& message);

// Live mode: one authoritative session ticking in real time, streamed to every connected
// WebSocket client as snapshot frames. Network threads talk to the tick loop only through
// an ordered inbound queue; each client receives immutable copies of the snapshot text.
class LiveServer {
 public:
  // Binds immediately; throws Error if the port cannot be bound. Port 0 picks a free port.
  LiveServer(SessionConfig cfg, unsigned short port);
  ~LiveServer();
  LiveServer(const LiveServer&) = delete;
  LiveServer& operator=(const LiveServer&) = delete;

  unsigned short port() const;

  void start();  // spawns network and tick threads
  void stop();   // idempotent
  void wait();   // blocks until stop()

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gazegrasp
