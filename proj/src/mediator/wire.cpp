#include "maat/mediator/wire.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <stdexcept>
#include <vector>

namespace maat::wire {

namespace {

void close_fd(int fd) {
    if (fd >= 0) ::close(fd);
}

bool read_line(int fd, std::string& line) {
    line.clear();
    char c;
    while (true) {
        ssize_t n = ::recv(fd, &c, 1, 0);
        if (n <= 0) return !line.empty();
        if (c == '\n') return true;
        line.push_back(c);
        if (line.size() > 1 << 20) return false;  // 1 MiB envelope cap
    }
}

bool write_all(int fd, const std::string& data) {
    std::size_t sent = 0;
    while (sent < data.size()) {
        ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n <= 0) return false;
        sent += static_cast<std::size_t>(n);
    }
    return true;
}

}  // namespace

TcpServer::TcpServer(Agent& agent, int port) : agent_(agent), port_(port) {}

TcpServer::~TcpServer() { stop(); }

void TcpServer::start() {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw std::runtime_error("socket() failed");
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(static_cast<std::uint16_t>(port_));
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
        close_fd(listen_fd_);
        throw std::runtime_error("bind() failed on port " + std::to_string(port_));
    }
    if (port_ == 0) {
        socklen_t len = sizeof(addr);
        ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
        port_ = ntohs(addr.sin_port);
    }
    if (::listen(listen_fd_, 16) < 0) {
        close_fd(listen_fd_);
        throw std::runtime_error("listen() failed");
    }
    running_ = true;
    thread_ = std::thread([this] { serve(); });
}

void TcpServer::stop() {
    if (!running_.exchange(false)) return;
    ::shutdown(listen_fd_, SHUT_RDWR);
    close_fd(listen_fd_);
    if (thread_.joinable()) thread_.join();
    listen_fd_ = -1;
}

void TcpServer::serve() {
    while (running_) {
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (!running_) break;
            continue;
        }
        handle_connection(fd);
    }
}

void TcpServer::handle_connection(int fd) {
    std::string line;
    while (running_ && read_line(fd, line)) {
        if (line.empty()) continue;
        nlohmann::json reply;
        try {
            reply = agent_.handle_line(line);
        } catch (const std::exception& e) {
            reply = {{"type", "ERROR"},
                     {"msg_id", nullptr},
                     {"body", {{"message", e.what()}}}};
        }
        if (!write_all(fd, reply.dump() + "\n")) break;
    }
    close_fd(fd);
}

nlohmann::json tcp_request(const std::string& host, int port,
                           const nlohmann::json& envelope) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0) {
        throw std::runtime_error("cannot resolve " + host);
    }
    int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    if (fd < 0) {
        ::freeaddrinfo(res);
        throw std::runtime_error("socket() failed");
    }
    if (::connect(fd, res->ai_addr, res->ai_addrlen) < 0) {
        ::freeaddrinfo(res);
        close_fd(fd);
        throw std::runtime_error("cannot connect to " + host + ":" + std::to_string(port));
    }
    ::freeaddrinfo(res);
    if (!write_all(fd, envelope.dump() + "\n")) {
        close_fd(fd);
        throw std::runtime_error("write failed");
    }
    std::string line;
    if (!read_line(fd, line)) {
        close_fd(fd);
        throw std::runtime_error("no reply from agent");
    }
    close_fd(fd);
    return nlohmann::json::parse(line);
}

std::pair<std::string, int> parse_endpoint(const std::string& endpoint) {
    auto colon = endpoint.rfind(':');
    if (colon == std::string::npos || colon + 1 >= endpoint.size()) {
        throw std::invalid_argument("endpoint must be host:port, got " + endpoint);
    }
    int port = std::stoi(endpoint.substr(colon + 1));
    return {endpoint.substr(0, colon), port};
}

}  // namespace maat::wire
