// Copyright 2026 The XRL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Websocket bridge between a live simulation and its operator consoles.
//
// The simulation loop is the only writer. It publishes telemetry into a
// latest-value cell and drains client commands once per central period;
// the socket side runs on its own I/O thread and never holds anything the
// simulation waits on. Slow clients skip frames but never see them out of
// order.

#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "xrl/config.hpp"
#include "xrl/protocol.hpp"
#include "xrl/scenario.hpp"

namespace xrl {

/// A command read from one client, or the error to send back to it.
struct InboundCommand {
  std::uint64_t session = 0;
  std::optional<CommandMessage> command;
  Ack rejection;  // used when `command` is empty
};

/// Bounded multi-producer queue drained by the simulation loop.
class CommandQueue {
 public:
  explicit CommandQueue(std::size_t capacity) : capacity_(capacity) {}
  /// False when the queue is full; the caller rejects the command.
  bool push(InboundCommand command);
  /// Everything queued, in arrival order.
  std::vector<InboundCommand> drain();

 private:
  std::size_t capacity_;
  std::mutex mutex_;
  std::vector<InboundCommand> items_;
};

/// Latest published telemetry message. Publishing swaps a pointer; readers
/// take a reference-counted copy and never block the publisher.
class SnapshotCell {
 public:
  struct Value {
    std::uint64_t serial = 0;  // increases with every publish
    std::string text;
  };

  void publish(std::string text);
  std::shared_ptr<const Value> latest() const;

 private:
  std::shared_ptr<const Value> value_;
  std::uint64_t serial_ = 0;  // publisher side only
};

struct BridgeOptions {
  std::string host = "127.0.0.1";
  unsigned short port = 8765;  // 0 picks a free port
  std::size_t command_capacity = 256;
  std::ostream* log = nullptr;  // connects, disconnects, rejected frames
};

class BridgeServer {
 public:
  explicit BridgeServer(BridgeOptions options);
  ~BridgeServer();
  BridgeServer(const BridgeServer&) = delete;
  BridgeServer& operator=(const BridgeServer&) = delete;

  /// Binds the listening socket and starts the I/O thread. Throws
  /// std::runtime_error when the address cannot be bound.
  void start();
  void stop();
  /// Bound port (useful with port 0).
  unsigned short port() const { return port_; }
  std::size_t clients() const { return clients_.load(); }

  /// Broadcasts a frame to every client, latest-only.
  void publish(const TelemetryFrame& frame);
  /// Sends a heartbeat to every client.
  void heartbeat(double t, bool paused, bool finished);
  std::vector<InboundCommand> drain_commands() { return commands_.drain(); }
  void send_ack(std::uint64_t session, const Ack& ack);

  struct Impl;

 private:
  BridgeOptions options_;
  CommandQueue commands_;
  SnapshotCell cell_;
  std::unique_ptr<Impl> impl_;
  std::thread io_thread_;
  std::atomic<std::size_t> clients_{0};
  unsigned short port_ = 0;
};

struct ServeOptions {
  BridgeOptions bridge;
  bool pace = true;                // advance at wall-clock speed
  double max_wall_seconds = 0.0;   // 0 runs until `stop` is set
  std::ostream* trace = nullptr;
  const std::atomic<bool>* stop = nullptr;
};

/// Runs a live session behind a bridge until stopped. Returns the final
/// summary of the current run.
RunSummary serve(const ScenarioConfig& config, const ServeOptions& options);

}  // namespace xrl
