#include "hamsync/tcp.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <thread>

#include "hamsync/errors.hpp"

namespace hamsync {

namespace {

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

sockaddr_in resolve(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* result = nullptr;
  if (int rc = ::getaddrinfo(host.c_str(), nullptr, &hints, &result); rc != 0) {
    throw TransportError("cannot resolve '" + host + "': " + ::gai_strerror(rc));
  }
  sockaddr_in addr{};
  std::memcpy(&addr, result->ai_addr, sizeof(addr));
  ::freeaddrinfo(result);
  addr.sin_port = htons(port);
  return addr;
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

}  // namespace

std::vector<std::uint8_t> encode_frame(const Word& payload) {
  const auto bits = static_cast<std::uint32_t>(payload.size());
  std::vector<std::uint8_t> frame = {static_cast<std::uint8_t>(bits >> 24), static_cast<std::uint8_t>(bits >> 16),
                                     static_cast<std::uint8_t>(bits >> 8), static_cast<std::uint8_t>(bits)};
  auto body = pack_bits(payload);
  frame.insert(frame.end(), body.begin(), body.end());
  return frame;
}

TcpEndpoint::TcpEndpoint(int fd, std::chrono::milliseconds receive_timeout) : fd_(fd), timeout_(receive_timeout) {
  set_nodelay(fd_);
}

TcpEndpoint::~TcpEndpoint() {
  if (fd_ >= 0) ::close(fd_);
}

void TcpEndpoint::write_all(const std::uint8_t* data, std::size_t size) {
  while (size > 0) {
    ssize_t n = ::send(fd_, data, size, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("send"));
    }
    data += n;
    size -= static_cast<std::size_t>(n);
  }
}

void TcpEndpoint::read_all(std::uint8_t* data, std::size_t size) {
  while (size > 0) {
    pollfd p{fd_, POLLIN, 0};
    int ready = ::poll(&p, 1, static_cast<int>(timeout_.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("poll"));
    }
    if (ready == 0) throw TransportError("receive timed out");
    ssize_t n = ::recv(fd_, data, size, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("recv"));
    }
    if (n == 0) throw TransportError("connection closed by peer");
    data += n;
    size -= static_cast<std::size_t>(n);
  }
}

void TcpEndpoint::send(const Word& payload) {
  auto frame = encode_frame(payload);
  write_all(frame.data(), frame.size());
}

Word TcpEndpoint::receive() {
  std::uint8_t header[4];
  read_all(header, 4);
  const std::uint32_t bits = (std::uint32_t{header[0]} << 24) | (std::uint32_t{header[1]} << 16) |
                             (std::uint32_t{header[2]} << 8) | std::uint32_t{header[3]};
  if (bits > Word::kMaxBits) throw TransportError("frame exceeds maximum word length");
  std::vector<std::uint8_t> body((bits + 7) / 8);
  read_all(body.data(), body.size());
  return unpack_bits(body, bits);
}

bool TcpEndpoint::pending() {
  pollfd p{fd_, POLLIN, 0};
  if (::poll(&p, 1, 0) <= 0) return false;
  std::uint8_t byte;
  return ::recv(fd_, &byte, 1, MSG_PEEK | MSG_DONTWAIT) > 0;
}

TcpEndpointSpec TcpEndpointSpec::parse(Mode mode, std::string_view host_port) {
  auto colon = host_port.rfind(':');
  if (colon == std::string_view::npos) throw ContractViolation("expected HOST:PORT, got '" + std::string(host_port) + "'");
  TcpEndpointSpec spec;
  spec.mode = mode;
  spec.host = std::string(host_port.substr(0, colon));
  if (spec.host.empty()) spec.host = "127.0.0.1";
  auto port_text = host_port.substr(colon + 1);
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), value);
  if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || value > 65535) {
    throw ContractViolation("invalid port in '" + std::string(host_port) + "'");
  }
  spec.port = static_cast<std::uint16_t>(value);
  return spec;
}

TcpListener::TcpListener(const std::string& host, std::uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw TransportError(errno_text("socket"));
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = resolve(host, port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    std::string msg = errno_text("bind");
    ::close(fd_);
    throw TransportError(msg);
  }
  if (::listen(fd_, 1) < 0) {
    std::string msg = errno_text("listen");
    ::close(fd_);
    throw TransportError(msg);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpEndpoint> TcpListener::accept(std::chrono::milliseconds receive_timeout) {
  for (;;) {
    int fd = ::accept(fd_, nullptr, nullptr);
    if (fd >= 0) return std::make_unique<TcpEndpoint>(fd, receive_timeout);
    if (errno != EINTR) throw TransportError(errno_text("accept"));
  }
}

std::unique_ptr<TcpEndpoint> tcp_connect(const std::string& host, std::uint16_t port,
                                         std::chrono::milliseconds retry_for) {
  const sockaddr_in addr = resolve(host, port);
  const auto deadline = std::chrono::steady_clock::now() + retry_for;
  for (;;) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw TransportError(errno_text("socket"));
    if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) == 0) {
      return std::make_unique<TcpEndpoint>(fd);
    }
    const int err = errno;
    ::close(fd);
    if (err != ECONNREFUSED || std::chrono::steady_clock::now() >= deadline) {
      errno = err;
      throw TransportError(errno_text(("connect to " + host + ":" + std::to_string(port)).c_str()));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
}

std::unique_ptr<Endpoint> tcp_channel(const TcpEndpointSpec& spec) {
  if (spec.mode == TcpEndpointSpec::Mode::Listen) {
    TcpListener listener(spec.host, spec.port);
    return listener.accept();
  }
  return tcp_connect(spec.host, spec.port);
}

namespace {

class TcpPairChannel final : public DuplexChannel {
 public:
  TcpPairChannel() {
    TcpListener listener("127.0.0.1", 0);
    std::unique_ptr<TcpEndpoint> client;
    std::exception_ptr connect_error;
    std::thread connector([&] {
      try {
        client = tcp_connect("127.0.0.1", listener.port());
      } catch (...) {
        connect_error = std::current_exception();
      }
    });
    connector.join();
    if (connect_error) std::rethrow_exception(connect_error);
    // The kernel completes the handshake from the backlog.
    bob_ = listener.accept();
    alice_ = std::move(client);
  }

  Endpoint& alice() override { return *alice_; }
  Endpoint& bob() override { return *bob_; }

 private:
  std::unique_ptr<TcpEndpoint> alice_;
  std::unique_ptr<TcpEndpoint> bob_;
};

}  // namespace

std::unique_ptr<DuplexChannel> tcp_loopback_channel() { return std::make_unique<TcpPairChannel>(); }

}  // namespace hamsync
