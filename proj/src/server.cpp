#include "motionguide/server.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "motionguide/error.hpp"

namespace motionguide {

namespace {

bool send_all(int fd, const std::string& data) {
    std::size_t sent = 0;
    while (sent < data.size()) {
        const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) return false;
        sent += static_cast<std::size_t>(n);
    }
    return true;
}

/// Reads the next '\n'-terminated line from fd into `line`; false on EOF.
/// A final unterminated fragment is still returned.
bool recv_line(int fd, std::string& buffer, std::string& line) {
    for (;;) {
        if (auto nl = buffer.find('\n'); nl != std::string::npos) {
            line.assign(buffer, 0, nl);
            buffer.erase(0, nl + 1);
            return true;
        }
        char chunk[4096];
        const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) {
            if (buffer.empty()) return false;
            line = std::move(buffer);
            buffer.clear();
            return true;
        }
        buffer.append(chunk, static_cast<std::size_t>(n));
    }
}

sockaddr_in resolve(const std::string& host, std::uint16_t port) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    const std::string h = host.empty() || host == "localhost" ? "127.0.0.1" : host;
    if (::inet_pton(AF_INET, h.c_str(), &addr.sin_addr) != 1) throw Error("invalid IPv4 address '" + host + "'");
    return addr;
}

}  // namespace

void serve_stdio(std::istream& in, std::ostream& out, ServerContext& ctx) {
    Connection conn(ctx);
    std::string line;
    while (!conn.closed() && std::getline(in, line)) {
        if (auto reply = conn.handle(line)) out << *reply << '\n' << std::flush;
    }
    conn.finish();
}

TcpServer::~TcpServer() {
    stop();
    for (auto& t : workers_)
        if (t.joinable()) t.join();
    if (listen_fd_ >= 0) ::close(listen_fd_);
}

std::uint16_t TcpServer::listen(const std::string& host, std::uint16_t port) {
    const sockaddr_in addr = resolve(host, port);
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw Error(std::string("socket: ") + std::strerror(errno));
    int yes = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    if (::bind(listen_fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0)
        throw Error("cannot bind " + host + ":" + std::to_string(port) + ": " + std::strerror(errno));
    if (::listen(listen_fd_, 128) != 0) throw Error(std::string("listen: ") + std::strerror(errno));
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    return ntohs(bound.sin_port);
}

void TcpServer::run() {
    if (listen_fd_ < 0) throw Error("server is not listening");
    while (!stopping_) {
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (errno == EINTR) continue;
            break;  // listening socket shut down
        }
        std::lock_guard lock(mu_);
        if (stopping_) {
            ::close(fd);
            break;
        }
        client_fds_.push_back(fd);
        workers_.emplace_back([this, fd] { handle_client(fd); });
    }
    std::vector<std::thread> workers;
    {
        std::lock_guard lock(mu_);
        workers.swap(workers_);
    }
    for (auto& t : workers) t.join();
}

void TcpServer::stop() {
    if (stopping_.exchange(true)) return;
    if (listen_fd_ >= 0) ::shutdown(listen_fd_, SHUT_RDWR);
    std::lock_guard lock(mu_);
    for (int fd : client_fds_) ::shutdown(fd, SHUT_RDWR);
}

void TcpServer::handle_client(int fd) {
    {
        Connection conn(ctx_);
        std::string buffer, line;
        while (!conn.closed() && recv_line(fd, buffer, line)) {
            if (auto reply = conn.handle(line))
                if (!send_all(fd, *reply + "\n")) break;
        }
        conn.finish();
    }
    std::lock_guard lock(mu_);
    std::erase(client_fds_, fd);
    ::close(fd);
}

LineClient::LineClient(const std::string& host, std::uint16_t port) {
    const sockaddr_in addr = resolve(host, port);
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw Error(std::string("socket: ") + std::strerror(errno));
    if (::connect(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
        const std::string why = std::strerror(errno);
        ::close(fd_);
        fd_ = -1;
        throw Error("cannot connect to " + host + ":" + std::to_string(port) + ": " + why);
    }
}

LineClient::~LineClient() { close(); }

void LineClient::send_line(const std::string& line) {
    if (fd_ < 0 || !send_all(fd_, line + "\n")) throw Error("connection lost");
}

bool LineClient::read_line(std::string& line) { return fd_ >= 0 && recv_line(fd_, buffer_, line); }

void LineClient::close() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
}

}  // namespace motionguide
