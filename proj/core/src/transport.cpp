#include "hamsync/transport.hpp"

#include <condition_variable>
#include <deque>
#include <exception>
#include <thread>

#include "hamsync/errors.hpp"

namespace hamsync {

std::string to_string(Direction d) { return d == Direction::AliceToBob ? "alice->bob" : "bob->alice"; }

void Transcript::record(Direction direction, Word payload) {
  std::size_t round = 1;
  if (!messages_.empty()) {
    const Message& last = messages_.back();
    round = last.direction == direction ? last.round_index : last.round_index + 1;
  }
  total_bits_ += payload.size();
  messages_.push_back(Message{direction, std::move(payload), round});
}

std::size_t Transcript::bits(Direction direction) const {
  std::size_t total = 0;
  for (const auto& m : messages_) {
    if (m.direction == direction) total += m.payload.size();
  }
  return total;
}

std::size_t Transcript::round_bits(std::size_t round) const {
  std::size_t total = 0;
  for (const auto& m : messages_) {
    if (m.round_index == round) total += m.payload.size();
  }
  return total;
}

namespace {

struct LoopbackState {
  std::mutex mutex;
  std::condition_variable cv;
  std::deque<Word> inbox[2];
  bool waiting[2] = {false, false};
  bool finished[2] = {false, false};
  bool deadlocked = false;
};

class LoopbackEndpoint final : public Endpoint {
 public:
  LoopbackEndpoint(std::shared_ptr<LoopbackState> state, int side) : state_(std::move(state)), side_(side) {}

  void send(const Word& payload) override {
    std::lock_guard lock(state_->mutex);
    state_->inbox[other()].push_back(payload);
    state_->cv.notify_all();
  }

  Word receive() override {
    std::unique_lock lock(state_->mutex);
    auto& s = *state_;
    s.waiting[side_] = true;
    for (;;) {
      if (!s.inbox[side_].empty()) {
        Word w = std::move(s.inbox[side_].front());
        s.inbox[side_].pop_front();
        s.waiting[side_] = false;
        return w;
      }
      if (s.deadlocked) {
        s.waiting[side_] = false;
        throw ExecutionError("deadlock: both parties are waiting for a message");
      }
      if (s.finished[other()]) {
        s.waiting[side_] = false;
        throw ExecutionError("deadlock: waiting on a party that already finished");
      }
      if (s.waiting[other()] && s.inbox[other()].empty()) {
        s.deadlocked = true;
        s.waiting[side_] = false;
        s.cv.notify_all();
        throw ExecutionError("deadlock: both parties are waiting for a message");
      }
      s.cv.wait(lock);
    }
  }

  bool pending() override {
    std::lock_guard lock(state_->mutex);
    return !state_->inbox[side_].empty();
  }

  void finish_run() override {
    std::lock_guard lock(state_->mutex);
    state_->finished[side_] = true;
    state_->cv.notify_all();
  }

 private:
  int other() const { return 1 - side_; }

  std::shared_ptr<LoopbackState> state_;
  int side_;
};

class LoopbackChannel final : public DuplexChannel {
 public:
  LoopbackChannel() : state_(std::make_shared<LoopbackState>()), alice_(state_, 0), bob_(state_, 1) {}

  Endpoint& alice() override { return alice_; }
  Endpoint& bob() override { return bob_; }

  void begin_run() override {
    std::lock_guard lock(state_->mutex);
    for (int side = 0; side < 2; ++side) {
      state_->inbox[side].clear();
      state_->waiting[side] = false;
      state_->finished[side] = false;
    }
    state_->deadlocked = false;
  }

 private:
  std::shared_ptr<LoopbackState> state_;
  LoopbackEndpoint alice_;
  LoopbackEndpoint bob_;
};

Direction outgoing(Role role) { return role == Role::Alice ? Direction::AliceToBob : Direction::BobToAlice; }
Direction incoming(Role role) { return role == Role::Alice ? Direction::BobToAlice : Direction::AliceToBob; }
const char* name(Role role) { return role == Role::Alice ? "alice" : "bob"; }

template <typename F>
Step call_party(Role role, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw ExecutionError(std::string(name(role)) + " raised: " + e.what());
  }
}

/// Keeps the first error raised by either driver.
class FirstError {
 public:
  void offer(std::exception_ptr e) {
    std::lock_guard lock(mutex_);
    if (!error_) error_ = std::move(e);
  }
  void rethrow_if_set() {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

}  // namespace

std::unique_ptr<DuplexChannel> loopback_channel() { return std::make_unique<LoopbackChannel>(); }

void TranscriptRecorder::record(Direction direction, const Word& payload) {
  std::lock_guard lock(mutex_);
  transcript_.record(direction, payload);
}

Transcript TranscriptRecorder::take() {
  std::lock_guard lock(mutex_);
  return std::exchange(transcript_, Transcript{});
}

void run_party(Party& party, Endpoint& endpoint, Role role, TranscriptRecorder& recorder, bool record_incoming) {
  auto flush = [&](const Step& step) {
    for (const Word& payload : step.send) {
      if (payload.empty()) throw InvariantError(std::string(name(role)) + " tried to send an empty message");
      recorder.record(outgoing(role), payload);
      endpoint.send(payload);
    }
  };

  Step step = call_party(role, [&] { return party.start(); });
  flush(step);
  while (!step.done) {
    Word message = endpoint.receive();
    if (record_incoming) recorder.record(incoming(role), message);
    step = call_party(role, [&] { return party.receive(message); });
    flush(step);
  }
  endpoint.finish_run();
}

ProtocolOutcome run_protocol(Party& alice, ReceivingParty& bob, DuplexChannel& channel) {
  channel.begin_run();
  TranscriptRecorder recorder;
  FirstError first_error;

  std::thread alice_thread([&] {
    try {
      run_party(alice, channel.alice(), Role::Alice, recorder);
    } catch (...) {
      first_error.offer(std::current_exception());
      channel.alice().finish_run();
    }
  });
  try {
    run_party(bob, channel.bob(), Role::Bob, recorder);
  } catch (...) {
    first_error.offer(std::current_exception());
    channel.bob().finish_run();
  }
  alice_thread.join();
  first_error.rethrow_if_set();

  if (channel.alice().pending() || channel.bob().pending()) {
    throw ExecutionError("protocol finished with unconsumed messages on the channel");
  }

  ProtocolOutcome outcome;
  Verdict verdict = bob.verdict();
  outcome.recovered = std::move(verdict.recovered);
  outcome.reported_failure = !outcome.recovered.has_value();
  outcome.diagnostics = std::move(verdict.diagnostics);
  outcome.transcript = recorder.take();
  return outcome;
}

ProtocolOutcome run_protocol(PartyPair& parties, DuplexChannel& channel) {
  return run_protocol(*parties.alice, *parties.bob, channel);
}

ProtocolOutcome run_protocol(PartyPair& parties) {
  auto channel = loopback_channel();
  return run_protocol(parties, *channel);
}

ProtocolOutcome run_bob_remote(ReceivingParty& bob, Endpoint& endpoint) {
  TranscriptRecorder recorder;
  run_party(bob, endpoint, Role::Bob, recorder, /*record_incoming=*/true);
  ProtocolOutcome outcome;
  Verdict verdict = bob.verdict();
  outcome.recovered = std::move(verdict.recovered);
  outcome.reported_failure = !outcome.recovered.has_value();
  outcome.diagnostics = std::move(verdict.diagnostics);
  outcome.transcript = recorder.take();
  return outcome;
}

Transcript run_alice_remote(Party& alice, Endpoint& endpoint) {
  TranscriptRecorder recorder;
  run_party(alice, endpoint, Role::Alice, recorder, /*record_incoming=*/true);
  return recorder.take();
}

}  // namespace hamsync
