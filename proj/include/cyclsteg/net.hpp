#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace cyclsteg {

/// "host:port". Host may be a name or a dotted IPv4 address.
struct Endpoint {
  std::string host;
  std::uint16_t port = 0;

  /// Throws Error(InvalidSpec) on malformed text.
  static Endpoint parse(const std::string& text);
  std::string to_string() const;
};

/// Source of bytes that either fills the whole buffer or throws
/// Error(TruncatedMessage).
class ByteReader {
 public:
  virtual ~ByteReader() = default;
  virtual void read_exact(std::span<std::uint8_t> out) = 0;
};

/// Connected TCP socket. Move-only; closes on destruction.
class TcpStream final : public ByteReader {
 public:
  /// Throws Error(ConnectionFailed).
  static TcpStream connect(const Endpoint& to);

  explicit TcpStream(int fd) noexcept : fd_(fd) {}
  TcpStream(TcpStream&& other) noexcept;
  TcpStream& operator=(TcpStream&& other) noexcept;
  TcpStream(const TcpStream&) = delete;
  TcpStream& operator=(const TcpStream&) = delete;
  ~TcpStream() override;

  void write_all(std::span<const std::uint8_t> bytes);
  void read_exact(std::span<std::uint8_t> out) override;
  void close() noexcept;

 private:
  int fd_ = -1;
};

/// Listening TCP socket. Port 0 binds an ephemeral port; see port().
class TcpListener {
 public:
  /// Throws Error(ConnectionFailed) if the address cannot be bound.
  static TcpListener bind(const Endpoint& at);

  TcpListener(TcpListener&& other) noexcept;
  TcpListener& operator=(TcpListener&& other) noexcept;
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;
  ~TcpListener();

  std::uint16_t port() const;
  TcpStream accept();

 private:
  explicit TcpListener(int fd) noexcept : fd_(fd) {}
  int fd_ = -1;
};

/// Adapts an in-memory buffer (file-drop mode, tests).
class SpanReader final : public ByteReader {
 public:
  explicit SpanReader(std::span<const std::uint8_t> bytes) noexcept : bytes_(bytes) {}
  void read_exact(std::span<std::uint8_t> out) override;
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace cyclsteg
