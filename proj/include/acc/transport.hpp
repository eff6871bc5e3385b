#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <sys/types.h>

namespace acc {

/// A bidirectional line channel. receive_line returns nullopt on timeout and
/// throws ProtocolError when the peer has closed the channel.
class LineTransport {
public:
    virtual ~LineTransport() = default;
    virtual void send_line(std::string_view line) = 0;
    virtual std::optional<std::string> receive_line(std::chrono::milliseconds timeout) = 0;
};

// Buffered line reads from a file descriptor with a poll-based deadline.
class FdLineReader {
public:
    explicit FdLineReader(int fd = -1) : fd_(fd) {}
    void reset(int fd) {
        fd_ = fd;
        buffer_.clear();
    }
    std::optional<std::string> read_line(std::chrono::milliseconds timeout);

private:
    int fd_;
    std::string buffer_;
};

/// Runs `command` through /bin/sh -c and talks to its stdin/stdout. The child
/// inherits stderr. Destruction closes stdin, waits briefly, then kills.
class ProcessTransport final : public LineTransport {
public:
    explicit ProcessTransport(const std::string& command);
    ~ProcessTransport() override;
    ProcessTransport(const ProcessTransport&) = delete;
    ProcessTransport& operator=(const ProcessTransport&) = delete;

    void send_line(std::string_view line) override;
    std::optional<std::string> receive_line(std::chrono::milliseconds timeout) override;

private:
    pid_t pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    FdLineReader reader_;
};

/// Same line format over a TCP stream.
class TcpTransport final : public LineTransport {
public:
    TcpTransport(const std::string& host, std::uint16_t port);
    ~TcpTransport() override;
    TcpTransport(const TcpTransport&) = delete;
    TcpTransport& operator=(const TcpTransport&) = delete;

    void send_line(std::string_view line) override;
    std::optional<std::string> receive_line(std::chrono::milliseconds timeout) override;

private:
    int fd_ = -1;
    FdLineReader reader_;
};

}  // namespace acc
