#include "gazegrasp/scripted_user.hpp"
#include "gazegrasp/server.hpp"
#include "gazegrasp/session.hpp"

#include <doctest.h>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <nlohmann/json.hpp>

#include <chrono>

using namespace gazegrasp;
namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

SessionConfig config() { return load_session_config(std::string(GAZEGRASP_DATA_DIR) + "/session.json"); }

class Client {
 public:
  explicit Client(unsigned short port) : ws_(ioc_) {
    tcp::resolver resolver(ioc_);
    net::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
    ws_.handshake("127.0.0.1:" + std::to_string(port), "/");
    ws_.text(true);
  }
  ~Client() {
    beast::error_code ec;
    ws_.close(websocket::close_code::normal, ec);
  }

  void send(const std::string& text) { ws_.write(net::buffer(text)); }

  nlohmann::json read() {
    beast::flat_buffer buf;
    ws_.read(buf);
    return nlohmann::json::parse(beast::buffers_to_string(buf.data()));
  }

  // Reads frames until one of the given type shows up.
  nlohmann::json read_until(const std::string& type, int max_frames = 600) {
    for (int i = 0; i < max_frames; ++i) {
      auto j = read();
      if (j["type"] == type) return j;
    }
    return nullptr;
  }

 private:
  net::io_context ioc_;
  websocket::stream<tcp::socket> ws_;
};

}  // namespace

TEST_CASE("client message parsing") {
  const auto scene = config().scene;
  const auto g = parse_client_message(R"({"type":"gaze","t":1.5,"u":100,"v":200})", scene);
  REQUIRE(std::holds_alternative<GazeMessage>(g));
  CHECK(std::get<GazeMessage>(g).px == Pixel{100, 200});
  CHECK(std::holds_alternative<ResetMessage>(parse_client_message(R"({"type":"reset"})", scene)));

  const auto now = parse_client_message(R"({"type":"inject_fault","force_spike":{"force":[0,0,60]}})", scene);
  REQUIRE(std::holds_alternative<InjectFaultMessage>(now));
  CHECK(std::get<InjectFaultMessage>(now).spike_now);
  CHECK(std::get<InjectFaultMessage>(now).faults.force_spike->force == Vec3(0, 0, 60));

  const auto later =
      parse_client_message(R"({"type":"inject_fault","force_spike":{"t":3,"force":[0,0,60]},"grasp_fail_on":["cup"]})",
                           scene);
  CHECK_FALSE(std::get<InjectFaultMessage>(later).spike_now);
  CHECK(std::get<InjectFaultMessage>(later).faults.force_spike->t == 3.0);
  CHECK(std::get<InjectFaultMessage>(later).faults.grasp_fail_on == std::vector<std::string>{"cup"});

  CHECK_THROWS_AS(parse_client_message("not json", scene), ParseError);
  CHECK_THROWS_AS(parse_client_message("[1,2]", scene), ParseError);
  CHECK_THROWS_AS(parse_client_message(R"({"type":"dance"})", scene), ParseError);
  CHECK_THROWS_AS(parse_client_message(R"({"type":"gaze","t":1,"u":"left","v":2})", scene), ParseError);
  CHECK_THROWS_AS(parse_client_message(R"({"type":"inject_fault","grasp_fail_on":["plate"]})", scene), ParseError);

  const auto err = nlohmann::json::parse(error_frame("bad"));
  CHECK(err["v"] == 1);
  CHECK(err["type"] == "error");
  CHECK(err["message"] == "bad");
}

TEST_CASE("live server streams snapshots and answers bad frames") {
  LiveServer server(config(), 0);
  REQUIRE(server.port() != 0);
  server.start();

  Client client(server.port());
  const auto first = client.read_until("snapshot");
  REQUIRE_FALSE(first.is_null());
  CHECK(first["v"] == 1);
  CHECK(first.contains("wrist"));
  CHECK(first.contains("hand_state"));
  CHECK(first["magnet_on"] == true);

  client.send("{\"type\":");
  const auto err = client.read_until("error");
  REQUIRE_FALSE(err.is_null());
  CHECK(err["v"] == 1);

  // The session keeps running after the bad frame.
  const auto after = client.read_until("snapshot");
  REQUIRE_FALSE(after.is_null());
  CHECK(after["t"].get<double>() > first["t"].get<double>());

  SUBCASE("busy port") { CHECK_THROWS_AS(LiveServer(config(), server.port()), Error); }

  SUBCASE("held gaze on the orange produces a plan") {
    Session probe(config());
    probe.tick();
    const auto px = choose_fixation_pixel(probe, "orange", std::nullopt);
    REQUIRE(px);
    bool planned = false;
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(5);
    for (int i = 0; !planned && std::chrono::steady_clock::now() < deadline; ++i) {
      client.send(nlohmann::json{{"type", "gaze"}, {"t", i / 60.0}, {"u", px->u}, {"v", px->v}}.dump());
      const auto snap = client.read_until("snapshot");
      for (const auto& e : snap["last_events"]) planned = planned || e["kind"] == "Parse";
      if (!snap["plan"].is_null()) planned = true;
    }
    CHECK(planned);
  }

  server.stop();
  server.stop();
}
