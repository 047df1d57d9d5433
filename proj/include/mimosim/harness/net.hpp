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
//
// Minimal line-oriented TCP wrappers for the control-plane emulation. One
// JSON document per '\n'-terminated line.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace mimosim::net
{

/// Connected stream socket with a line buffer. Move-only RAII over the fd.
class TcpStream
{
  public:
    TcpStream() = default;
    explicit TcpStream(int fd) : fd_(fd) {}
    ~TcpStream();
    TcpStream(TcpStream &&other) noexcept;
    TcpStream &operator=(TcpStream &&other) noexcept;
    TcpStream(const TcpStream &) = delete;
    TcpStream &operator=(const TcpStream &) = delete;

    /// Connects to "host:port". Throws ConnectionError naming the endpoint.
    static TcpStream connect(const std::string &endpoint);

    /// Sends line + '\n'. Throws ConnectionError on failure.
    void send_line(const std::string &line);

    /// Next complete line, waiting up to timeout_ms (-1 = forever).
    /// nullopt on timeout or EOF; check eof() to tell them apart.
    std::optional<std::string> recv_line(int timeout_ms);

    /// Pops a buffered line without touching the socket.
    std::optional<std::string> pop_line();

    /// One nonblocking-ish read after poll() said the fd is ready.
    /// Returns false on EOF (also sets eof()).
    bool read_available();

    bool eof() const { return eof_; }
    bool valid() const { return fd_ >= 0; }
    int fd() const { return fd_; }
    void close();

  private:
    int fd_ = -1;
    bool eof_ = false;
    std::string buffer_;
};

/// Listening socket; port 0 binds an ephemeral port.
class TcpListener
{
  public:
    TcpListener() = default;
    ~TcpListener();
    TcpListener(TcpListener &&other) noexcept;
    TcpListener &operator=(TcpListener &&other) noexcept;
    TcpListener(const TcpListener &) = delete;
    TcpListener &operator=(const TcpListener &) = delete;

    static TcpListener bind(const std::string &host, std::uint16_t port);

    /// Waits up to timeout_ms for a client (-1 = forever); nullopt on timeout.
    std::optional<TcpStream> accept(int timeout_ms);

    std::uint16_t port() const { return port_; }
    std::string endpoint() const;
    bool valid() const { return fd_ >= 0; }

  private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
    std::string host_;
};

/// Splits "host:port"; throws std::invalid_argument on malformed input.
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string &endpoint);

} // namespace mimosim::net
