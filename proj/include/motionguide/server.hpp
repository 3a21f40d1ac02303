#pragma once

#include <atomic>
#include <cstdint>
#include <istream>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "motionguide/protocol.hpp"

namespace motionguide {

/// Runs one connection over a line stream (stdin/stdout mode).
void serve_stdio(std::istream& in, std::ostream& out, ServerContext& ctx);

/// Newline-delimited JSON over TCP, one thread per connection.
class TcpServer {
public:
    explicit TcpServer(ServerContext& ctx) : ctx_(ctx) {}
    ~TcpServer();
    TcpServer(const TcpServer&) = delete;
    TcpServer& operator=(const TcpServer&) = delete;

    /// Binds and listens; port 0 picks a free port. Returns the bound port.
    /// Throws Error when the address cannot be used.
    std::uint16_t listen(const std::string& host, std::uint16_t port);

    /// Accept loop; returns after `stop()` once every connection finished.
    void run();
    void stop();

private:
    void handle_client(int fd);

    ServerContext& ctx_;
    int listen_fd_ = -1;
    std::atomic<bool> stopping_{false};
    std::mutex mu_;
    std::vector<std::thread> workers_;
    std::vector<int> client_fds_;
};

/// Minimal blocking line client used by tests and tools.
class LineClient {
public:
    LineClient(const std::string& host, std::uint16_t port);
    ~LineClient();
    LineClient(const LineClient&) = delete;
    LineClient& operator=(const LineClient&) = delete;

    void send_line(const std::string& line);
    /// Next line without its terminator; false on EOF.
    bool read_line(std::string& line);
    void close();

private:
    int fd_ = -1;
    std::string buffer_;
};

}  // namespace motionguide
