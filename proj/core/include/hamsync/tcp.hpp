#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "hamsync/transport.hpp"

namespace hamsync {

/// Framed TCP transport. Each message on the wire is a 4-byte big-endian
/// payload bit count followed by ceil(bits/8) payload bytes, LSB-first;
/// padding bits in the last byte are ignored on receipt.
class TcpEndpoint final : public Endpoint {
 public:
  explicit TcpEndpoint(int fd, std::chrono::milliseconds receive_timeout = std::chrono::seconds(30));
  ~TcpEndpoint() override;
  TcpEndpoint(const TcpEndpoint&) = delete;
  TcpEndpoint& operator=(const TcpEndpoint&) = delete;

  void send(const Word& payload) override;
  Word receive() override;
  bool pending() override;

 private:
  void write_all(const std::uint8_t* data, std::size_t size);
  void read_all(std::uint8_t* data, std::size_t size);

  int fd_;
  std::chrono::milliseconds timeout_;
};

/// Encodes one frame; exposed for wire-format tests.
std::vector<std::uint8_t> encode_frame(const Word& payload);

struct TcpEndpointSpec {
  enum class Mode { Listen, Connect };
  Mode mode = Mode::Connect;
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  /// "HOST:PORT"
  static TcpEndpointSpec parse(Mode mode, std::string_view host_port);
};

class TcpListener {
 public:
  TcpListener(const std::string& host, std::uint16_t port);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  /// The bound port (useful with port 0).
  std::uint16_t port() const noexcept { return port_; }
  std::unique_ptr<TcpEndpoint> accept(std::chrono::milliseconds receive_timeout = std::chrono::seconds(30));

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

std::unique_ptr<TcpEndpoint> tcp_connect(const std::string& host, std::uint16_t port,
                                         std::chrono::milliseconds retry_for = std::chrono::seconds(5));

/// One side of a TCP connection: listens and accepts a single peer, or connects.
std::unique_ptr<Endpoint> tcp_channel(const TcpEndpointSpec& spec);

/// Both ends of a fresh localhost connection, usable with run_protocol.
std::unique_ptr<DuplexChannel> tcp_loopback_channel();

}  // namespace hamsync
