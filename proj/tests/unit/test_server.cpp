#include "vsarm/server.hpp"

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <thread>

using namespace vsarm;
using nlohmann::json;

namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
using tcp = asio::ip::tcp;

class Client {
public:
    explicit Client(unsigned short port) : ws_(ioc_) {
        tcp::resolver resolver(ioc_);
        asio::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
        ws_.handshake("127.0.0.1", "/");
    }
    ~Client() {
        beast::error_code ec;
        ws_.close(beast::websocket::close_code::normal, ec);
    }

    json receive() {
        beast::flat_buffer buf;
        ws_.read(buf);
        return json::parse(beast::buffers_to_string(buf.data()));
    }

    json exchange(const std::string& text) {
        ws_.text(true);
        ws_.write(asio::buffer(text));
        return receive();
    }

    json exchange_binary(const std::string& bytes) {
        ws_.binary(true);
        ws_.write(asio::buffer(bytes));
        return receive();
    }

private:
    asio::io_context ioc_;
    beast::websocket::stream<tcp::socket> ws_;
};

class ServerFixture : public ::testing::Test {
protected:
    void SetUp() override {
        port_ = server_.listen("127.0.0.1", 0);
        thread_ = std::thread([this] { server_.run(); });
    }
    void TearDown() override {
        server_.stop();
        thread_.join();
    }

    TeleopServer server_{SimConfig{}};
    unsigned short port_ = 0;
    std::thread thread_;
};

}  // namespace

TEST_F(ServerFixture, GreetsAndStepsInOrder) {
    ASSERT_NE(port_, 0);
    Client c(port_);
    const auto hello = c.receive();
    EXPECT_EQ(hello["type"], "state");
    EXPECT_EQ(hello["seq"], 0);

    const auto s1 = c.exchange(R"({"type":"knob","id":1,"dir":1})");
    EXPECT_EQ(s1["seq"], 1);
    EXPECT_NEAR(s1["bend_deg"][0][0].get<double>(), 3.62972742961835, 1e-10);

    const auto err = c.exchange(R"({"type":"knob","id":9,"dir":1})");
    EXPECT_EQ(err["type"], "error");

    const auto jam = c.exchange(R"({"type":"pressure","segment":1,"psi":12.5})");
    EXPECT_EQ(jam["seq"], 2);
    EXPECT_EQ(jam["pressures_psi"][0], 12.5);
    EXPECT_EQ(jam["jammed"][0], true);

    EXPECT_EQ(c.exchange_binary("\x01\x02")["type"], "error");
    EXPECT_EQ(c.exchange(R"({"type":"reset"})")["seq"], 3);
}

TEST_F(ServerFixture, SessionsAreIndependent) {
    Client a(port_);
    Client b(port_);
    a.receive();
    b.receive();
    EXPECT_EQ(a.exchange(R"({"type":"knob","id":2,"dir":-1})")["seq"], 1);
    EXPECT_EQ(a.exchange(R"({"type":"knob","id":2,"dir":-1})")["seq"], 2);
    const auto sb = b.exchange(R"({"type":"knob","id":3,"dir":1})");
    EXPECT_EQ(sb["seq"], 1);
    EXPECT_EQ(sb["bend_deg"][0][1], 0.0);
}
