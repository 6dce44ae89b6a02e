#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hamsync/word.hpp"

namespace hamsync {

enum class Direction { AliceToBob, BobToAlice };

std::string to_string(Direction d);

struct Message {
  Direction direction = Direction::AliceToBob;
  Word payload;
  std::size_t round_index = 1;
};

/// Ordered log of protocol messages. A round is a maximal run of messages in
/// one direction, so rounds() == direction alternations + 1 (0 when empty).
/// Only payload bits are counted; framing never appears here.
class Transcript {
 public:
  void record(Direction direction, Word payload);

  const std::vector<Message>& messages() const noexcept { return messages_; }
  std::size_t total_bits() const noexcept { return total_bits_; }
  std::size_t rounds() const noexcept { return messages_.empty() ? 0 : messages_.back().round_index; }
  std::size_t bits(Direction direction) const;
  /// Bits sent in the given 1-based round.
  std::size_t round_bits(std::size_t round) const;

 private:
  std::vector<Message> messages_;
  std::size_t total_bits_ = 0;
};

using Diagnostics = std::map<std::string, std::string>;

/// Result of one Alice/Bob run. Either `recovered` is set or
/// `reported_failure` is true, never both.
struct ProtocolOutcome {
  std::optional<Word> recovered;
  bool reported_failure = false;
  Transcript transcript;
  Diagnostics diagnostics;
};

/// What a party wants to do after being woken up.
struct Step {
  std::vector<Word> send;
  bool done = false;
};

/// Resumable protocol participant. The driver calls start() once, then
/// receive() for every incoming message until a Step reports done.
class Party {
 public:
  virtual ~Party() = default;
  virtual Step start() = 0;
  virtual Step receive(const Word& message) = 0;
};

struct Verdict {
  std::optional<Word> recovered;
  Diagnostics diagnostics;
};

/// The party that produces the answer (Bob).
class ReceivingParty : public Party {
 public:
  virtual Verdict verdict() const = 0;
};

struct PartyPair {
  std::unique_ptr<Party> alice;
  std::unique_ptr<ReceivingParty> bob;
};

/// One side of a duplex channel. Calls into one endpoint must be externally
/// synchronized.
class Endpoint {
 public:
  virtual ~Endpoint() = default;
  virtual void send(const Word& payload) = 0;
  /// Blocks until a message arrives.
  virtual Word receive() = 0;
  /// True when a message is waiting to be received.
  virtual bool pending() = 0;
  /// This side will send nothing more in the current run.
  virtual void finish_run() {}
};

class DuplexChannel {
 public:
  virtual ~DuplexChannel() = default;
  virtual Endpoint& alice() = 0;
  virtual Endpoint& bob() = 0;
  /// Called by run_protocol before a run starts.
  virtual void begin_run() {}
};

/// In-process FIFO queue pair. receive() blocks; if both sides wait on empty
/// queues, or wait on a side that already finished, it throws ExecutionError.
std::unique_ptr<DuplexChannel> loopback_channel();

/// Thread-safe transcript shared by the two drivers of one run.
class TranscriptRecorder {
 public:
  void record(Direction direction, const Word& payload);
  Transcript take();

 private:
  std::mutex mutex_;
  Transcript transcript_;
};

enum class Role { Alice, Bob };

/// Drive one party to completion over one endpoint. Outgoing messages are
/// recorded; incoming ones too when `record_incoming` (used when the peer
/// lives in another process).
void run_party(Party& party, Endpoint& endpoint, Role role, TranscriptRecorder& recorder,
               bool record_incoming = false);

/// Run Alice on a worker thread and Bob on the calling thread over `channel`.
/// Party exceptions and deadlocks surface as ExecutionError; socket failures
/// as TransportError.
ProtocolOutcome run_protocol(Party& alice, ReceivingParty& bob, DuplexChannel& channel);
ProtocolOutcome run_protocol(PartyPair& parties, DuplexChannel& channel);

/// Convenience: fresh loopback channel.
ProtocolOutcome run_protocol(PartyPair& parties);

/// Bob's half of a run whose Alice is remote (separate process).
ProtocolOutcome run_bob_remote(ReceivingParty& bob, Endpoint& endpoint);
/// Alice's half of a run whose Bob is remote; returns the local view.
Transcript run_alice_remote(Party& alice, Endpoint& endpoint);

}  // namespace hamsync
