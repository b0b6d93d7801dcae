#include "gazegrasp/server.hpp"

#include "gazegrasp/session.hpp"
#include "json_util.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <iostream>
#include <mutex>
#include <thread>

namespace gazegrasp {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

ClientMessage parse_client_message(std::string_view frame, const Scene& scene) {
  const auto doc = json_util::parse(frame, "message");
  if (!doc.is_object()) throw ParseError("message: expected object");
  const auto type = json_util::require<std::string>(doc, "type");
  if (type == "gaze") {
    GazeMessage g;
    g.t = json_util::require<double>(doc, "t");
    g.px.u = json_util::require<double>(doc, "u");
    g.px.v = json_util::require<double>(doc, "v");
    return g;
  }
  if (type == "reset") return ResetMessage{};
  if (type == "inject_fault") {
    InjectFaultMessage m;
    auto body = doc;
    if (const auto it = body.find("force_spike"); it != body.end() && it->is_object() && !it->contains("t")) {
      (*it)["t"] = 0.0;
      m.spike_now = true;
    }
    m.faults = faults_from_json(body);
    for (const auto& id : m.faults.grasp_fail_on)
      if (!scene.find(id)) throw ParseError("inject_fault: unknown object id '" + id + "'");
    return m;
  }
  throw ParseError("message: unknown type '" + type + "'");
}

std::string error_frame(const std::string& message) {
  return nlohmann::json{{"v", 1}, {"type", "error"}, {"message", message}}.dump();
}

namespace {

class Connection;

struct Hub {
  virtual ~Hub() = default;
  virtual void on_message(const std::shared_ptr<Connection>& c, std::string text) = 0;
};

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, Hub& hub) : ws_(std::move(socket)), hub_(hub) {}

  void run() {
    ws_.text(true);
    ws_.async_accept(beast::bind_front_handler(&Connection::on_accept, shared_from_this()));
  }

  void send(std::shared_ptr<const std::string> frame, bool droppable) {
    net::post(ws_.get_executor(), [self = shared_from_this(), frame = std::move(frame), droppable] {
      if (!self->open_) return;
      // Slow readers skip snapshots rather than grow the queue without bound.
      if (droppable && self->outbox_.size() >= kMaxQueued) return;
      self->outbox_.push_back(frame);
      if (self->outbox_.size() == 1) self->write_next();
    });
  }

  void close() {
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

 private:
  static constexpr std::size_t kMaxQueued = 16;

  void on_accept(beast::error_code ec) {
    if (ec) return;
    open_ = true;
    read_next();
  }

  void read_next() { ws_.async_read(buffer_, beast::bind_front_handler(&Connection::on_read, shared_from_this())); }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return;
    auto text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    hub_.on_message(shared_from_this(), std::move(text));
    read_next();
  }

  void write_next() {
    ws_.async_write(net::buffer(*outbox_.front()), beast::bind_front_handler(&Connection::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) return;
    outbox_.pop_front();
    if (!outbox_.empty()) write_next();
  }

  websocket::stream<beast::tcp_stream> ws_;
  Hub& hub_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const std::string>> outbox_;
  bool open_ = false;
};

}  // namespace

struct LiveServer::Impl : Hub {
  Impl(SessionConfig cfg, unsigned short port) : session(std::move(cfg)), acceptor(ioc) {
    beast::error_code ec;
    const tcp::endpoint ep(net::ip::address_v4::any(), port);
    acceptor.open(ep.protocol(), ec);
    if (!ec) acceptor.set_option(net::socket_base::reuse_address(true), ec);
    if (!ec) acceptor.bind(ep, ec);
    if (!ec) acceptor.listen(net::socket_base::max_listen_connections, ec);
    if (ec) throw Error("cannot listen on port " + std::to_string(port) + ": " + ec.message());
    bound_port = acceptor.local_endpoint().port();
  }

  void on_message(const std::shared_ptr<Connection>& c, std::string text) override {
    try {
      auto msg = parse_client_message(text, session_scene());
      std::lock_guard lock(session_mu);
      inbound.push_back(std::move(msg));
    } catch (const Error& e) {
      c->send(std::make_shared<const std::string>(error_frame(e.what())), false);
    }
  }

  const Scene& session_scene() const { return session.config().scene; }

  void accept_next() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      auto c = std::make_shared<Connection>(std::move(socket), *this);
      {
        std::lock_guard lock(clients_mu);
        clients.push_back(c);
      }
      c->run();
      accept_next();
    });
  }

  void broadcast(const std::shared_ptr<const std::string>& frame) {
    std::lock_guard lock(clients_mu);
    std::erase_if(clients, [](const auto& w) { return w.expired(); });
    for (const auto& w : clients)
      if (auto c = w.lock()) c->send(frame, true);
  }

  void apply(const ClientMessage& msg) {
    std::visit(
        [this](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, GazeMessage>) {
            session.push_live_gaze(m.px);
          } else if constexpr (std::is_same_v<T, ResetMessage>) {
            session.reset();
          } else {
            FaultConfig f = m.faults;
            if (f.force_spike && m.spike_now) f.force_spike->t = session.clock() + session.config().dt / 2;
            session.inject_faults(f);
          }
        },
        msg);
  }

  void tick_loop() {
    using clock = std::chrono::steady_clock;
    const auto period = std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(session.config().dt));
    auto next = clock::now();
    while (running) {
      next += period;
      std::shared_ptr<const std::string> frame;
      try {
        std::lock_guard lock(session_mu);
        while (!inbound.empty()) {
          apply(inbound.front());
          inbound.pop_front();
        }
        session.tick();
        frame = std::make_shared<const std::string>(session.snapshot().dump());
      } catch (const std::exception& e) {
        std::cerr << "session stopped: " << e.what() << "\n";
        running = false;
        break;
      }
      broadcast(frame);
      std::this_thread::sleep_until(next);
    }
    std::lock_guard lock(stop_mu);
    stopped = true;
    stop_cv.notify_all();
  }

  Session session;
  std::mutex session_mu;
  unsigned short bound_port = 0;
  std::deque<ClientMessage> inbound;

  net::io_context ioc;
  tcp::acceptor acceptor;
  std::mutex clients_mu;
  std::vector<std::weak_ptr<Connection>> clients;

  std::atomic<bool> running{false};
  std::thread net_thread;
  std::thread tick_thread;
  std::mutex stop_mu;
  std::condition_variable stop_cv;
  bool stopped = false;
};

LiveServer::LiveServer(SessionConfig cfg, unsigned short port) : impl_(std::make_unique<Impl>(std::move(cfg), port)) {}

LiveServer::~LiveServer() { stop(); }

unsigned short LiveServer::port() const { return impl_->bound_port; }

void LiveServer::start() {
  if (impl_->running.exchange(true)) return;
  impl_->accept_next();
  impl_->net_thread = std::thread([this] { impl_->ioc.run(); });
  impl_->tick_thread = std::thread([this] { impl_->tick_loop(); });
}

void LiveServer::stop() {
  if (!impl_) return;
  impl_->running = false;
  if (impl_->tick_thread.joinable()) impl_->tick_thread.join();
  // Closing every socket aborts the pending operations, so the network thread runs dry.
  net::post(impl_->ioc, [impl = impl_.get()] {
    beast::error_code ec;
    impl->acceptor.close(ec);
    std::lock_guard lock(impl->clients_mu);
    for (const auto& w : impl->clients)
      if (auto c = w.lock()) c->close();
  });
  if (impl_->net_thread.joinable()) impl_->net_thread.join();
  std::lock_guard lock(impl_->stop_mu);
  impl_->stopped = true;
  impl_->stop_cv.notify_all();
}

void LiveServer::wait() {
  std::unique_lock lock(impl_->stop_mu);
  impl_->stop_cv.wait(lock, [this] { return impl_->stopped; });
}

}  // namespace gazegrasp
