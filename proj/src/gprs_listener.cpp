/*
 * gprs_listener.cpp
 *
 * This source file is part of the succor project.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "succor/gateway.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <iostream>

namespace succor {

namespace {

constexpr int kPollMs = 100;
constexpr int kReplyTimeoutMs = 5000;

sockaddr_in resolve(const wire::Endpoint& ep) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(ep.port);
    if (ep.host.empty() || ep.host == "*") {
        addr.sin_addr.s_addr = htonl(INADDR_ANY);
        return addr;
    }
    if (inet_pton(AF_INET, ep.host.c_str(), &addr.sin_addr) == 1) return addr;

    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (getaddrinfo(ep.host.c_str(), nullptr, &hints, &res) != 0 || res == nullptr)
        throw Error(Errc::Io, "cannot resolve host " + ep.host);
    addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
    freeaddrinfo(res);
    return addr;
}

std::string errno_text() { return std::strerror(errno); }

} // namespace

struct GprsListener::Connection {
    int fd = -1;
    std::mutex write_mu;
    std::atomic<bool> open{true};
    std::atomic<bool> done{false};
    std::thread worker;
};

GprsListener::GprsListener(wire::Endpoint bind_to, Handler handler)
    : bind_to_(std::move(bind_to)), handler_(std::move(handler)) {}

GprsListener::~GprsListener() { stop(); }

void GprsListener::start() {
    auto addr = resolve(bind_to_);
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw Error(Errc::Io, "socket: " + errno_text());
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
        ::listen(listen_fd_, 64) != 0) {
        auto msg = errno_text();
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw Error(Errc::Io, "cannot listen on " + bind_to_.to_string() + ": " + msg);
    }
    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    bound_port_ = ntohs(bound.sin_port);

    running_ = true;
    accept_thread_ = std::thread([this] { accept_loop(); });
}

void GprsListener::stop() {
    if (!running_.exchange(false)) return;
    if (accept_thread_.joinable()) accept_thread_.join();

    std::vector<std::shared_ptr<Connection>> conns;
    {
        std::lock_guard lock(mu_);
        conns.swap(connections_);
        terminals_.clear();
    }
    for (auto& c : conns) ::shutdown(c->fd, SHUT_RDWR);
    for (auto& c : conns)
        if (c->worker.joinable()) c->worker.join();
    for (auto& c : conns) ::close(c->fd);
    ::close(listen_fd_);
    listen_fd_ = -1;
}

void GprsListener::accept_loop() {
    while (running_) {
        pollfd pfd{listen_fd_, POLLIN, 0};
        int ready = ::poll(&pfd, 1, kPollMs);

        // Reap finished connections.
        {
            std::lock_guard lock(mu_);
            for (auto it = connections_.begin(); it != connections_.end();) {
                if ((*it)->done) {
                    (*it)->worker.join();
                    ::close((*it)->fd);
                    it = connections_.erase(it);
                } else {
                    ++it;
                }
            }
        }
        if (ready <= 0) continue;

        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) continue;
        auto conn = std::make_shared<Connection>();
        conn->fd = fd;
        std::lock_guard lock(mu_);
        connections_.push_back(conn);
        conn->worker = std::thread([this, conn] { serve_connection(conn); });
    }
}

bool GprsListener::write_all(int fd, std::string_view data) {
    while (!data.empty()) {
        auto n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
        if (n <= 0) return false;
        data.remove_prefix(static_cast<std::size_t>(n));
    }
    return true;
}

void GprsListener::serve_connection(std::shared_ptr<Connection> conn) {
    LineBuffer lines;
    char buf[1024];
    while (running_ && conn->open) {
        pollfd pfd{conn->fd, POLLIN, 0};
        int ready = ::poll(&pfd, 1, kPollMs);
        if (ready < 0) break;
        if (ready == 0) continue;
        auto n = ::recv(conn->fd, buf, sizeof(buf), 0);
        if (n <= 0) break;

        for (auto& line : lines.feed(std::string_view(buf, static_cast<std::size_t>(n)))) {
            std::string reply;
            if (line.overlong) {
                reply = wire::encode_err(Errc::TooLong);
                ++rejected_;
            } else {
                try {
                    auto req = wire::parse_request(line.text, Transport::Gprs);
                    {
                        std::lock_guard lock(mu_);
                        terminals_[req.child_id] = conn;
                    }
                    auto id = handler_(req);
                    reply = wire::encode_ack(id);
                    ++accepted_;
                } catch (const Error& e) {
                    reply = wire::encode_err(e.code());
                    ++rejected_;
                } catch (const std::exception& e) {
                    std::clog << "gprs handler failed: " << e.what() << "\n";
                    reply = wire::encode_err(Errc::Io);
                    ++rejected_;
                }
            }
            reply.push_back('\n');
            std::lock_guard wlock(conn->write_mu);
            if (!write_all(conn->fd, reply)) conn->open = false;
        }
    }
    conn->open = false;
    conn->done = true;
}

void GprsListener::deliver_control(std::string_view terminal_id, std::string_view line) {
    std::shared_ptr<Connection> conn;
    {
        std::lock_guard lock(mu_);
        auto it = terminals_.find(terminal_id);
        if (it == terminals_.end())
            throw Error(Errc::UnknownTerminal, "terminal " + std::string(terminal_id) + " never connected");
        conn = it->second.lock();
    }
    if (!conn || !conn->open)
        throw Error(Errc::Undeliverable, "terminal " + std::string(terminal_id) + " is offline");
    std::string framed(line);
    framed.push_back('\n');
    std::lock_guard wlock(conn->write_mu);
    if (!write_all(conn->fd, framed)) {
        conn->open = false;
        throw Error(Errc::Undeliverable, "write to terminal " + std::string(terminal_id) + " failed");
    }
}

GprsTerminal::GprsTerminal(std::string child_id, wire::Endpoint endpoint)
    : child_id_(std::move(child_id)), endpoint_(std::move(endpoint)) {}

GprsTerminal::~GprsTerminal() { close(); }

void GprsTerminal::close() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
    inbuf_.clear();
}

void GprsTerminal::ensure_connected() {
    if (fd_ >= 0) return;
    auto addr = resolve(endpoint_);
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw Error(Errc::Io, "socket: " + errno_text());
    if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        auto msg = errno_text();
        close();
        throw Error(Errc::Io, "connect to " + endpoint_.to_string() + ": " + msg);
    }
}

std::optional<std::string> GprsTerminal::read_line(int timeout_ms) {
    while (true) {
        auto nl = inbuf_.find('\n');
        if (nl != std::string::npos) {
            std::string line = inbuf_.substr(0, nl);
            inbuf_.erase(0, nl + 1);
            return line;
        }
        pollfd pfd{fd_, POLLIN, 0};
        if (::poll(&pfd, 1, timeout_ms) <= 0) return std::nullopt;
        char buf[512];
        auto n = ::recv(fd_, buf, sizeof(buf), 0);
        if (n <= 0) {
            close();
            return std::nullopt;
        }
        inbuf_.append(buf, static_cast<std::size_t>(n));
    }
}

void GprsTerminal::apply_control(const std::string& line) {
    if (auto ep = wire::parse_setaddr(line)) pending_endpoint_ = *ep;
}

std::string GprsTerminal::send_line(std::string_view line) {
    ensure_connected();
    std::string framed(line);
    framed.push_back('\n');
    const char* p = framed.data();
    std::size_t left = framed.size();
    while (left > 0) {
        auto n = ::send(fd_, p, left, MSG_NOSIGNAL);
        if (n <= 0) {
            close();
            throw Error(Errc::Io, "send to " + endpoint_.to_string() + " failed");
        }
        p += n;
        left -= static_cast<std::size_t>(n);
    }
    while (true) {
        auto reply = read_line(kReplyTimeoutMs);
        if (!reply) throw Error(Errc::Io, "no reply from " + endpoint_.to_string());
        if (reply->rfind("ACK ", 0) == 0 || reply->rfind("ERR ", 0) == 0) {
            if (pending_endpoint_) {
                close();
                endpoint_ = *pending_endpoint_;
                pending_endpoint_.reset();
            }
            return *reply;
        }
        apply_control(*reply);
    }
}

std::string GprsTerminal::send_request(const EmergencyRequest& req) {
    return send_line(wire::encode_request(req));
}

void GprsTerminal::poll_control(int timeout_ms) {
    if (fd_ < 0) return;
    while (auto line = read_line(timeout_ms)) {
        apply_control(*line);
        timeout_ms = 0;
    }
    if (pending_endpoint_) {
        close();
        endpoint_ = *pending_endpoint_;
        pending_endpoint_.reset();
    }
}

} // namespace succor
