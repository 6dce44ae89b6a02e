#include <gtest/gtest.h>

#include "hamsync/errors.hpp"
#include "hamsync/hashing.hpp"
#include "hamsync/syncdet.hpp"
#include "hamsync/transport.hpp"

using namespace hamsync;

TEST(Transcript, RoundsCountDirectionChanges) {
  Transcript t;
  EXPECT_EQ(t.rounds(), 0u);
  t.record(Direction::AliceToBob, Word(3));
  t.record(Direction::AliceToBob, Word(2));
  EXPECT_EQ(t.rounds(), 1u);
  t.record(Direction::BobToAlice, Word(5));
  t.record(Direction::AliceToBob, Word(1));
  EXPECT_EQ(t.rounds(), 3u);
  EXPECT_EQ(t.total_bits(), 11u);
  EXPECT_EQ(t.bits(Direction::AliceToBob), 6u);
  EXPECT_EQ(t.bits(Direction::BobToAlice), 5u);
  EXPECT_EQ(t.round_bits(1), 5u);
  EXPECT_EQ(t.round_bits(2), 5u);
  EXPECT_EQ(t.round_bits(3), 1u);
}

namespace {

/// Scripted party: sends `first` on start, then replies to each message with
/// the next entry of `replies`, finishing after the last.
class Scripted final : public ReceivingParty {
 public:
  Scripted(std::vector<Word> first, std::vector<std::vector<Word>> replies, bool done_at_start = false)
      : first_(std::move(first)), replies_(std::move(replies)), done_at_start_(done_at_start) {}

  Step start() override { return Step{first_, done_at_start_ || replies_.empty()}; }
  Step receive(const Word& m) override {
    last_ = m;
    auto out = replies_.at(next_++);
    return Step{out, next_ == replies_.size()};
  }
  Verdict verdict() const override { return Verdict{last_, {}}; }

 private:
  std::vector<Word> first_;
  std::vector<std::vector<Word>> replies_;
  bool done_at_start_;
  std::size_t next_ = 0;
  std::optional<Word> last_;
};

class Throwing final : public Party {
 public:
  Step start() override { throw std::runtime_error("boom"); }
  Step receive(const Word&) override { return {}; }
};

}  // namespace

TEST(Loopback, ThreeRoundExchange) {
  Scripted alice({Word(4)}, {{Word(6)}});
  Scripted bob({}, {{Word(5)}, {}});
  auto ch = loopback_channel();
  const auto outcome = run_protocol(alice, bob, *ch);
  EXPECT_EQ(outcome.transcript.total_bits(), 15u);
  EXPECT_EQ(outcome.transcript.rounds(), 3u);
  ASSERT_TRUE(outcome.recovered);
  EXPECT_EQ(outcome.recovered->size(), 6u);
}

TEST(Loopback, DeadlockIsDetected) {
  Scripted alice({}, {{}});
  Scripted bob({}, {{}});
  auto ch = loopback_channel();
  EXPECT_THROW(run_protocol(alice, bob, *ch), ExecutionError);
}

TEST(Loopback, PartyExceptionSurfacesAsExecutionError) {
  Throwing alice;
  Scripted bob({}, {{}});
  auto ch = loopback_channel();
  try {
    run_protocol(alice, bob, *ch);
    FAIL() << "expected ExecutionError";
  } catch (const ExecutionError& e) {
    EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
  }
}

TEST(Loopback, UnconsumedMessageIsAnError) {
  Scripted alice({Word(1), Word(1)}, {}, true);
  Scripted bob({}, {{}});
  auto ch = loopback_channel();
  EXPECT_THROW(run_protocol(alice, bob, *ch), ExecutionError);
}

TEST(Loopback, ChannelIsReusableAcrossRuns) {
  auto ch = loopback_channel();
  for (int i = 0; i < 5; ++i) {
    Scripted alice({Word(2)}, {}, true);
    Scripted bob({}, {{}});
    EXPECT_EQ(run_protocol(alice, bob, *ch).transcript.total_bits(), 2u);
  }
}

TEST(Loopback, ProtocolRoundCounts) {
  std::vector<Word> candidates{Word::from_string("0001"), Word::from_string("0110"), Word::from_string("1111")};
  EXPECT_EQ(hashing::nba_protocol(candidates[1], candidates).transcript.rounds(), 2u);

  const auto code = syncdet::DecodingCode::make(gf2::hamming_7_4());
  const syncdet::SyncInstance inst(Word::from_string("1011001"), Word::from_string("1011000"),
                                   Bounds(Rational(1, 7), 7));
  const auto outcome = syncdet::syndrome_sync(code, inst);
  EXPECT_EQ(outcome.transcript.total_bits(), 3u);
  EXPECT_EQ(outcome.transcript.rounds(), 1u);
}
