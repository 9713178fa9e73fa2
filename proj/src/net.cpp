#include "cyclsteg/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <utility>

#include "cyclsteg/error.hpp"

namespace cyclsteg {

namespace {

std::string errno_text() { return std::strerror(errno); }

struct AddrInfoList {
  addrinfo* head = nullptr;
  ~AddrInfoList() {
    if (head != nullptr) freeaddrinfo(head);
  }
};

AddrInfoList resolve(const Endpoint& ep, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  AddrInfoList list;
  const std::string port = std::to_string(ep.port);
  const int rc = getaddrinfo(ep.host.empty() ? nullptr : ep.host.c_str(), port.c_str(), &hints,
                             &list.head);
  if (rc != 0) {
    throw Error(ErrorCode::ConnectionFailed,
                "cannot resolve " + ep.to_string() + ": " + gai_strerror(rc));
  }
  return list;
}

}  // namespace

Endpoint Endpoint::parse(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon + 1 == text.size()) {
    throw Error(ErrorCode::InvalidSpec, "endpoint must be host:port, got '" + text + "'");
  }
  unsigned port = 0;
  const char* first = text.data() + colon + 1;
  const char* last = text.data() + text.size();
  const auto [end, ec] = std::from_chars(first, last, port);
  if (ec != std::errc{} || end != last || port > 0xFFFF) {
    throw Error(ErrorCode::InvalidSpec, "bad port in '" + text + "'");
  }
  return Endpoint{text.substr(0, colon), static_cast<std::uint16_t>(port)};
}

std::string Endpoint::to_string() const { return host + ":" + std::to_string(port); }

TcpStream TcpStream::connect(const Endpoint& to) {
  const auto list = resolve(to, false);
  std::string last_error = "no addresses";
  for (addrinfo* ai = list.head; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) {
      last_error = errno_text();
      continue;
    }
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) return TcpStream(fd);
    last_error = errno_text();
    ::close(fd);
  }
  throw Error(ErrorCode::ConnectionFailed, "connect to " + to.to_string() + ": " + last_error);
}

TcpStream::TcpStream(TcpStream&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}

TcpStream& TcpStream::operator=(TcpStream&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

TcpStream::~TcpStream() { close(); }

void TcpStream::close() noexcept {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void TcpStream::write_all(std::span<const std::uint8_t> bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::ConnectionFailed, "send: " + errno_text());
    }
    sent += static_cast<std::size_t>(n);
  }
}

void TcpStream::read_exact(std::span<std::uint8_t> out) {
  std::size_t got = 0;
  while (got < out.size()) {
    const ssize_t n = ::recv(fd_, out.data() + got, out.size() - got, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::ConnectionFailed, "recv: " + errno_text());
    }
    if (n == 0) {
      throw Error(ErrorCode::TruncatedMessage, "peer closed after " + std::to_string(got) +
                                                   " of " + std::to_string(out.size()) +
                                                   " bytes");
    }
    got += static_cast<std::size_t>(n);
  }
}

TcpListener TcpListener::bind(const Endpoint& at) {
  const auto list = resolve(at, true);
  std::string last_error = "no addresses";
  for (addrinfo* ai = list.head; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) {
      last_error = errno_text();
      continue;
    }
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
      return TcpListener(fd);
    }
    last_error = errno_text();
    ::close(fd);
  }
  throw Error(ErrorCode::ConnectionFailed, "listen on " + at.to_string() + ": " + last_error);
}

TcpListener::TcpListener(TcpListener&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}

TcpListener& TcpListener::operator=(TcpListener&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::uint16_t TcpListener::port() const {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    throw Error(ErrorCode::ConnectionFailed, "getsockname: " + errno_text());
  }
  return ntohs(addr.sin_port);
}

TcpStream TcpListener::accept() {
  for (;;) {
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd >= 0) return TcpStream(fd);
    if (errno != EINTR) throw Error(ErrorCode::ConnectionFailed, "accept: " + errno_text());
  }
}

void SpanReader::read_exact(std::span<std::uint8_t> out) {
  if (remaining() < out.size()) {
    throw Error(ErrorCode::TruncatedMessage, "stream ended after " + std::to_string(remaining()) +
                                                 " of " + std::to_string(out.size()) + " bytes");
  }
  std::memcpy(out.data(), bytes_.data() + pos_, out.size());
  pos_ += out.size();
}

}  // namespace cyclsteg
