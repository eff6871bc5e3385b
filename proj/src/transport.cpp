#include "acc/transport.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <mutex>
#include <thread>

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include "acc/error.hpp"

namespace acc {
namespace {

void ignore_sigpipe_once() {
    static std::once_flag flag;
    std::call_once(flag, [] { std::signal(SIGPIPE, SIG_IGN); });
}

void write_all(int fd, std::string_view data) {
    while (!data.empty()) {
        const ssize_t n = ::write(fd, data.data(), data.size());
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw ProtocolError(std::string("backend transport closed: ") + std::strerror(errno));
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

}  // namespace

std::optional<std::string> FdLineReader::read_line(std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
        const auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            return line;
        }
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            return std::nullopt;
        }
        pollfd pfd{fd_, POLLIN, 0};
        const int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
        if (rc < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw ProtocolError(std::string("poll failed: ") + std::strerror(errno));
        }
        if (rc == 0) {
            return std::nullopt;
        }
        char chunk[4096];
        const ssize_t n = ::read(fd_, chunk, sizeof chunk);
        if (n < 0) {
            if (errno == EINTR || errno == EAGAIN) {
                continue;
            }
            throw ProtocolError(std::string("backend read failed: ") + std::strerror(errno));
        }
        if (n == 0) {
            throw ProtocolError("backend closed its output");
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

ProcessTransport::ProcessTransport(const std::string& command) {
    ignore_sigpipe_once();
    int in_pipe[2];
    int out_pipe[2];
    if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
        throw ProtocolError("pipe failed");
    }
    if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        throw ProtocolError("pipe failed");
    }
    pid_ = ::fork();
    if (pid_ < 0) {
        for (const int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) {
            ::close(fd);
        }
        throw ProtocolError("fork failed");
    }
    if (pid_ == 0) {
        ::dup2(in_pipe[0], STDIN_FILENO);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    reader_.reset(from_child_);
}

ProcessTransport::~ProcessTransport() {
    if (to_child_ >= 0) {
        ::close(to_child_);
    }
    if (from_child_ >= 0) {
        ::close(from_child_);
    }
    if (pid_ > 0) {
        int status = 0;
        for (int i = 0; i < 50; ++i) {
            if (::waitpid(pid_, &status, WNOHANG) == pid_) {
                return;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
        ::kill(pid_, SIGKILL);
        ::waitpid(pid_, &status, 0);
    }
}

void ProcessTransport::send_line(std::string_view line) {
    std::string data(line);
    data.push_back('\n');
    write_all(to_child_, data);
}

std::optional<std::string> ProcessTransport::receive_line(std::chrono::milliseconds timeout) {
    return reader_.read_line(timeout);
}

TcpTransport::TcpTransport(const std::string& host, std::uint16_t port) {
    ignore_sigpipe_once();
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* found = nullptr;
    const std::string service = std::to_string(port);
    if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &found) != 0) {
        throw ProtocolError("cannot resolve " + host);
    }
    for (addrinfo* ai = found; ai != nullptr; ai = ai->ai_next) {
        fd_ = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
        if (fd_ < 0) {
            continue;
        }
        if (::connect(fd_, ai->ai_addr, ai->ai_addrlen) == 0) {
            break;
        }
        ::close(fd_);
        fd_ = -1;
    }
    ::freeaddrinfo(found);
    if (fd_ < 0) {
        throw ProtocolError("cannot connect to " + host + ":" + service);
    }
    reader_.reset(fd_);
}

TcpTransport::~TcpTransport() {
    if (fd_ >= 0) {
        ::close(fd_);
    }
}

void TcpTransport::send_line(std::string_view line) {
    std::string data(line);
    data.push_back('\n');
    write_all(fd_, data);
}

std::optional<std::string> TcpTransport::receive_line(std::chrono::milliseconds timeout) {
    return reader_.read_line(timeout);
}

}  // namespace acc
