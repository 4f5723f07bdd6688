#pragma once

#include <atomic>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "maat/mediator/agent.hpp"

namespace maat::wire {

// In-process transport: the same envelope contract as the TCP server,
// without a socket. Used for deterministic tests and the scenario runner.
class InProcTransport {
  public:
    explicit InProcTransport(Agent& agent) : agent_(agent) {}

    nlohmann::json request(const nlohmann::json& envelope) {
        return agent_.handle_envelope(envelope);
    }

    Agent::ParentLink as_parent_link() {
        return [this](const nlohmann::json& env) { return request(env); };
    }

  private:
    Agent& agent_;
};

// Newline-delimited JSON over TCP. One request line in, one reply line out.
class TcpServer {
  public:
    TcpServer(Agent& agent, int port);
    ~TcpServer();

    void start();
    void stop();
    int port() const { return port_; }

  private:
    void serve();
    void handle_connection(int fd);

    Agent& agent_;
    int port_;
    int listen_fd_ = -1;
    std::thread thread_;
    std::atomic<bool> running_{false};
};

// Connects, sends one envelope line, reads one reply line. Throws
// std::runtime_error on connection failure.
nlohmann::json tcp_request(const std::string& host, int port,
                           const nlohmann::json& envelope);

// Splits "host:port"; throws std::invalid_argument on bad syntax.
std::pair<std::string, int> parse_endpoint(const std::string& endpoint);

}  // namespace maat::wire
