#include "vsarm/server.hpp"

#include "vsarm/protocol.hpp"

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

namespace vsarm {
namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

class Connection : public std::enable_shared_from_this<Connection> {
public:
    Connection(tcp::socket socket, const SimConfig& cfg) : ws_(std::move(socket)), session_(cfg) {}

    void start() {
        ws_.text(true);
        ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
            if (ec) return;
            self->send(self->session_.greeting());
        });
    }

private:
    void send(std::string message) {
        outbound_ = std::move(message);
        ws_.async_write(asio::buffer(outbound_),
                        [self = shared_from_this()](beast::error_code ec, std::size_t) {
                            if (ec) return;
                            self->receive();
                        });
    }

    void receive() {
        buffer_.clear();
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) return;  // closed or broken; the session ends with the connection
            if (!self->ws_.got_text()) {
                self->send(error_message("binary frames are not supported"));
                return;
            }
            self->send(self->session_.handle(beast::buffers_to_string(self->buffer_.data())));
        });
    }

    websocket::stream<beast::tcp_stream> ws_;
    beast::flat_buffer buffer_;
    std::string outbound_;
    TeleopSession session_;
};

}  // namespace

struct TeleopServer::Impl {
    explicit Impl(SimConfig c) : cfg(std::move(c)), acceptor(ioc) {}

    void accept() {
        acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
            if (ec) return;
            std::make_shared<Connection>(std::move(socket), cfg)->start();
            accept();
        });
    }

    SimConfig cfg;
    asio::io_context ioc;
    tcp::acceptor acceptor;
};

TeleopServer::TeleopServer(SimConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {
    validate(impl_->cfg);
}

TeleopServer::~TeleopServer() = default;

unsigned short TeleopServer::listen(const std::string& address, unsigned short port) {
    const tcp::endpoint endpoint(asio::ip::make_address(address), port);
    auto& acc = impl_->acceptor;
    acc.open(endpoint.protocol());
    acc.set_option(asio::socket_base::reuse_address(true));
    acc.bind(endpoint);
    acc.listen(asio::socket_base::max_listen_connections);
    impl_->accept();
    return acc.local_endpoint().port();
}

void TeleopServer::run() { impl_->ioc.run(); }

void TeleopServer::stop() { impl_->ioc.stop(); }

}  // namespace vsarm
