// SPDX-License-Identifier: Apache-2.0
//
// mimosim - TDMA massive MIMO channel sounding and capacity simulation toolkit
// Copyright (C) 2026 mimosim contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "mimosim/harness/net.hpp"

#include "mimosim/harness/protocol.hpp"
#include "mimosim/util.hpp"

#include <arpa/inet.h>
#include <cerrno>
#include <cstring>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <stdexcept>
#include <sys/socket.h>
#include <unistd.h>

namespace mimosim::net
{

namespace
{

sockaddr_in make_addr(const std::string &host, std::uint16_t port)
{
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
        throw std::invalid_argument("not an IPv4 address: '" + host + "'");
    return addr;
}

} // namespace

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string &endpoint)
{
    const auto colon = endpoint.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == endpoint.size())
        throw std::invalid_argument("endpoint must be 'host:port': '" + endpoint + "'");
    const std::size_t port = parse_size(endpoint.substr(colon + 1));
    if (port > 65535)
        throw std::invalid_argument("port out of range in endpoint '" + endpoint + "'");
    return {endpoint.substr(0, colon), static_cast<std::uint16_t>(port)};
}

TcpStream::~TcpStream()
{
    close();
}

TcpStream::TcpStream(TcpStream &&other) noexcept
    : fd_(other.fd_), eof_(other.eof_), buffer_(std::move(other.buffer_))
{
    other.fd_ = -1;
}

TcpStream &TcpStream::operator=(TcpStream &&other) noexcept
{
    if (this != &other)
    {
        close();
        fd_ = other.fd_;
        eof_ = other.eof_;
        buffer_ = std::move(other.buffer_);
        other.fd_ = -1;
    }
    return *this;
}

void TcpStream::close()
{
    if (fd_ >= 0)
    {
        ::close(fd_);
        fd_ = -1;
    }
}

TcpStream TcpStream::connect(const std::string &endpoint)
{
    const auto [host, port] = parse_endpoint(endpoint);
    const sockaddr_in addr = make_addr(host, port);

    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0)
        throw ConnectionError("cannot create socket: " + std::string(std::strerror(errno)));
    if (::connect(fd, reinterpret_cast<const sockaddr *>(&addr), sizeof(addr)) != 0)
    {
        const int err = errno;
        ::close(fd);
        throw ConnectionError("cannot connect to unit endpoint " + endpoint + ": " +
                              std::strerror(err));
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return TcpStream(fd);
}

void TcpStream::send_line(const std::string &line)
{
    std::string framed = line;
    framed.push_back('\n');
    std::size_t sent = 0;
    while (sent < framed.size())
    {
        const ssize_t n =
            ::send(fd_, framed.data() + sent, framed.size() - sent, MSG_NOSIGNAL);
        if (n < 0)
        {
            if (errno == EINTR)
                continue;
            throw ConnectionError("send failed: " + std::string(std::strerror(errno)));
        }
        sent += static_cast<std::size_t>(n);
    }
}

std::optional<std::string> TcpStream::pop_line()
{
    const auto nl = buffer_.find('\n');
    if (nl == std::string::npos)
        return std::nullopt;
    std::string line = buffer_.substr(0, nl);
    buffer_.erase(0, nl + 1);
    return line;
}

bool TcpStream::read_available()
{
    char chunk[4096];
    while (true)
    {
        const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
        if (n > 0)
        {
            buffer_.append(chunk, static_cast<std::size_t>(n));
            return true;
        }
        if (n == 0)
        {
            eof_ = true;
            return false;
        }
        if (errno == EINTR)
            continue;
        eof_ = true; // treat hard errors as peer loss
        return false;
    }
}

std::optional<std::string> TcpStream::recv_line(int timeout_ms)
{
    while (true)
    {
        if (auto line = pop_line())
            return line;
        if (eof_)
            return std::nullopt;

        pollfd pfd{fd_, POLLIN, 0};
        const int rc = ::poll(&pfd, 1, timeout_ms);
        if (rc < 0)
        {
            if (errno == EINTR)
                continue;
            throw ConnectionError("poll failed: " + std::string(std::strerror(errno)));
        }
        if (rc == 0)
            return std::nullopt; // timeout
        if (!read_available())
            return std::nullopt; // EOF
    }
}

TcpListener::~TcpListener()
{
    if (fd_ >= 0)
        ::close(fd_);
}

TcpListener::TcpListener(TcpListener &&other) noexcept
    : fd_(other.fd_), port_(other.port_), host_(std::move(other.host_))
{
    other.fd_ = -1;
}

TcpListener &TcpListener::operator=(TcpListener &&other) noexcept
{
    if (this != &other)
    {
        if (fd_ >= 0)
            ::close(fd_);
        fd_ = other.fd_;
        port_ = other.port_;
        host_ = std::move(other.host_);
        other.fd_ = -1;
    }
    return *this;
}

TcpListener TcpListener::bind(const std::string &host, std::uint16_t port)
{
    sockaddr_in addr = make_addr(host, port);

    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0)
        throw ConnectionError("cannot create socket: " + std::string(std::strerror(errno)));
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, reinterpret_cast<const sockaddr *>(&addr), sizeof(addr)) != 0 ||
        ::listen(fd, 8) != 0)
    {
        const int err = errno;
        ::close(fd);
        throw ConnectionError("cannot listen on " + host + ":" + std::to_string(port) + ": " +
                              std::strerror(err));
    }

    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    if (::getsockname(fd, reinterpret_cast<sockaddr *>(&bound), &len) != 0)
    {
        const int err = errno;
        ::close(fd);
        throw ConnectionError("getsockname failed: " + std::string(std::strerror(err)));
    }

    TcpListener l;
    l.fd_ = fd;
    l.port_ = ntohs(bound.sin_port);
    l.host_ = host;
    return l;
}

std::optional<TcpStream> TcpListener::accept(int timeout_ms)
{
    while (true)
    {
        pollfd pfd{fd_, POLLIN, 0};
        const int rc = ::poll(&pfd, 1, timeout_ms);
        if (rc < 0)
        {
            if (errno == EINTR)
                continue;
            throw ConnectionError("poll failed: " + std::string(std::strerror(errno)));
        }
        if (rc == 0)
            return std::nullopt;
        const int cfd = ::accept(fd_, nullptr, nullptr);
        if (cfd < 0)
        {
            if (errno == EINTR)
                continue;
            throw ConnectionError("accept failed: " + std::string(std::strerror(errno)));
        }
        const int one = 1;
        ::setsockopt(cfd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        return TcpStream(cfd);
    }
}

std::string TcpListener::endpoint() const
{
    return host_ + ":" + std::to_string(port_);
}

} // namespace mimosim::net
