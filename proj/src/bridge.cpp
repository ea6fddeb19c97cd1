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


#include "xrl/bridge.hpp"

#include <chrono>
#include <deque>
#include <map>
#include <ostream>
#include <stdexcept>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "xrl/live.hpp"

namespace xrl {

namespace beast = boost::beast;
namespace net = boost::asio;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

bool CommandQueue::push(InboundCommand command) {
  std::lock_guard lock(mutex_);
  if (items_.size() >= capacity_) return false;
  items_.push_back(std::move(command));
  return true;
}

std::vector<InboundCommand> CommandQueue::drain() {
  std::vector<InboundCommand> out;
  std::lock_guard lock(mutex_);
  out.swap(items_);
  return out;
}

void SnapshotCell::publish(std::string text) {
  auto v = std::make_shared<Value>();
  v->serial = ++serial_;
  v->text = std::move(text);
  std::atomic_store(&value_, std::shared_ptr<const Value>(std::move(v)));
}

std::shared_ptr<const SnapshotCell::Value> SnapshotCell::latest() const {
  return std::atomic_load(&value_);
}

namespace {

class Session;

}  // namespace

// Everything below runs on the I/O thread.
struct BridgeServer::Impl {
  net::io_context ioc{1};
  tcp::acceptor acceptor{ioc};
  std::map<std::uint64_t, std::weak_ptr<Session>> sessions;
  std::uint64_t next_id = 0;
  BridgeServer* owner = nullptr;

  void accept();
  void log(const std::string& line) const {
    if (owner->options_.log != nullptr) *owner->options_.log << "bridge: " << line << std::endl;
  }
};

namespace {

class Session : public std::enable_shared_from_this<Session> {
 public:
  Session(tcp::socket socket, std::uint64_t id, BridgeServer::Impl& impl, CommandQueue& commands,
          const SnapshotCell& cell, std::atomic<std::size_t>& clients)
      : ws_(std::move(socket)), id_(id), impl_(impl), commands_(commands), cell_(cell),
        clients_(clients) {}

  void run() {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) { self->on_accept(ec); });
  }

  void enqueue(std::string text) {
    if (!open_) return;
    control_.push_back(std::move(text));
    pump();
  }

  // Sends the latest frame if it is newer than the last one sent.
  void pump() {
    if (!open_ || writing_) return;
    if (!control_.empty()) {
      out_ = std::move(control_.front());
      control_.pop_front();
    } else {
      const auto frame = cell_.latest();
      if (!frame || frame->serial <= sent_serial_) return;
      sent_serial_ = frame->serial;
      out_ = frame->text;
    }
    writing_ = true;
    ws_.text(true);
    ws_.async_write(net::buffer(out_), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->writing_ = false;
      if (ec) return self->close(ec);
      self->pump();
    });
  }

  void shutdown() {
    if (!open_) return;
    beast::error_code ignored;
    beast::get_lowest_layer(ws_).socket().close(ignored);
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) {
      impl_.log("handshake failed: " + ec.message());
      return;
    }
    open_ = true;
    ++clients_;
    impl_.log("client " + std::to_string(id_) + " connected");
    pump();
    read();
  }

  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->close(ec);
      self->on_message(beast::buffers_to_string(self->buffer_.data()));
      self->buffer_.consume(self->buffer_.size());
      self->read();
    });
  }

  void on_message(const std::string& text) {
    InboundCommand in;
    in.session = id_;
    std::string client;
    std::uint64_t seq = 0;
    try {
      in.command = decode_command(text, &client, &seq);
    } catch (const ValidationError& e) {
      impl_.log("client " + std::to_string(id_) + " sent an invalid command: " + e.what());
      enqueue(encode_ack({client, seq, false, e.what()}));
      return;
    }
    if (!commands_.push(in)) {
      enqueue(encode_ack({client, seq, false, "command queue full"}));
    }
  }

  void close(beast::error_code ec) {
    if (!open_) return;
    open_ = false;
    --clients_;
    if (ec != websocket::error::closed && ec != net::error::operation_aborted) {
      impl_.log("client " + std::to_string(id_) + " disconnected: " + ec.message());
    } else {
      impl_.log("client " + std::to_string(id_) + " closed");
    }
    impl_.sessions.erase(id_);
  }

  websocket::stream<beast::tcp_stream> ws_;
  std::uint64_t id_;
  BridgeServer::Impl& impl_;
  CommandQueue& commands_;
  const SnapshotCell& cell_;
  std::atomic<std::size_t>& clients_;
  beast::flat_buffer buffer_;
  std::deque<std::string> control_;  // acks and heartbeats, sent before frames
  std::string out_;
  std::uint64_t sent_serial_ = 0;
  bool writing_ = false;
  bool open_ = false;
};

}  // namespace

void BridgeServer::Impl::accept() {
  acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
    if (ec) {
      if (ec != net::error::operation_aborted) log("accept failed: " + ec.message());
      if (!acceptor.is_open()) return;
    } else {
      const std::uint64_t id = ++next_id;
      auto s = std::make_shared<Session>(std::move(socket), id, *this, owner->commands_,
                                         owner->cell_, owner->clients_);
      sessions[id] = s;
      s->run();
    }
    accept();
  });
}

BridgeServer::BridgeServer(BridgeOptions options)
    : options_(std::move(options)), commands_(options_.command_capacity),
      impl_(std::make_unique<Impl>()) {
  impl_->owner = this;
}

BridgeServer::~BridgeServer() { stop(); }

void BridgeServer::start() {
  Impl& im = *impl_;
  beast::error_code ec;
  const tcp::endpoint endpoint(net::ip::make_address(options_.host, ec), options_.port);
  if (ec) throw std::runtime_error("bad bridge address '" + options_.host + "': " + ec.message());
  im.acceptor.open(endpoint.protocol(), ec);
  if (!ec) im.acceptor.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) im.acceptor.bind(endpoint, ec);
  if (!ec) im.acceptor.listen(net::socket_base::max_listen_connections, ec);
  if (ec) {
    throw std::runtime_error("cannot listen on " + options_.host + ":" +
                             std::to_string(options_.port) + ": " + ec.message());
  }
  port_ = im.acceptor.local_endpoint().port();
  im.accept();
  io_thread_ = std::thread([&im] { im.ioc.run(); });
}

void BridgeServer::stop() {
  if (!io_thread_.joinable()) return;
  Impl& im = *impl_;
  net::post(im.ioc, [&im] {
    beast::error_code ignored;
    im.acceptor.close(ignored);
    for (auto& [id, weak] : im.sessions) {
      if (auto s = weak.lock()) s->shutdown();
    }
  });
  // Give the sessions a moment to unwind before the context stops.
  std::this_thread::sleep_for(std::chrono::milliseconds(20));
  im.ioc.stop();
  io_thread_.join();
}

void BridgeServer::publish(const TelemetryFrame& frame) {
  cell_.publish(encode_telemetry(frame));
  Impl& im = *impl_;
  net::post(im.ioc, [&im] {
    for (auto& [id, weak] : im.sessions) {
      if (auto s = weak.lock()) s->pump();
    }
  });
}

void BridgeServer::heartbeat(double t, bool paused, bool finished) {
  Impl& im = *impl_;
  net::post(im.ioc, [&im, text = encode_heartbeat(t, paused, finished)] {
    for (auto& [id, weak] : im.sessions) {
      if (auto s = weak.lock()) s->enqueue(text);
    }
  });
}

void BridgeServer::send_ack(std::uint64_t session, const Ack& ack) {
  Impl& im = *impl_;
  net::post(im.ioc, [&im, session, text = encode_ack(ack)] {
    const auto it = im.sessions.find(session);
    if (it == im.sessions.end()) return;
    if (auto s = it->second.lock()) s->enqueue(text);
  });
}

RunSummary serve(const ScenarioConfig& config, const ServeOptions& options) {
  using clock = std::chrono::steady_clock;
  LiveSession live(config, options.trace);
  BridgeServer server(options.bridge);
  server.start();
  if (options.bridge.log != nullptr) {
    *options.bridge.log << "bridge: listening on ws://" << options.bridge.host << ":"
                        << server.port() << std::endl;
  }

  const auto wall_start = clock::now();
  // Pacing anchor: wall time at which sim time `anchor_t` was reached.
  auto anchor_wall = wall_start;
  double anchor_t = live.time();
  auto last_heartbeat = wall_start;
  bool idle = false;
  bool final_published = false;
  server.publish(live.next_frame());

  std::vector<TelemetryFrame> frames;
  while (options.stop == nullptr || !options.stop->load()) {
    const auto now = clock::now();
    if (options.max_wall_seconds > 0.0 &&
        std::chrono::duration<double>(now - wall_start).count() >= options.max_wall_seconds) {
      break;
    }

    for (const InboundCommand& in : server.drain_commands()) {
      const Ack ack = in.command ? live.apply(*in.command) : in.rejection;
      server.send_ack(in.session, ack);
      if (in.command && ack.ok && in.command->kind == CommandKind::kReset) {
        final_published = false;
        server.publish(live.next_frame());
      }
    }

    const bool running = !live.paused() && !live.finished();
    if (!running) {
      if (live.finished() && !final_published) {
        server.publish(live.next_frame());
        final_published = true;
      }
      if (!idle || clock::now() - last_heartbeat >= std::chrono::seconds(1)) {
        server.heartbeat(live.time(), live.paused(), live.finished());
        last_heartbeat = clock::now();
      }
      idle = true;
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
      continue;
    }
    if (idle) {
      idle = false;
      anchor_wall = clock::now();
      anchor_t = live.time();
    }

    frames.clear();
    live.run_period(&frames);
    if (!frames.empty()) server.publish(frames.back());
    if (options.pace) {
      const auto due = anchor_wall + std::chrono::duration_cast<clock::duration>(
                                         std::chrono::duration<double>(live.time() - anchor_t));
      std::this_thread::sleep_until(due);
    }
  }
  server.stop();
  return live.simulation().current_summary();
}

}  // namespace xrl
