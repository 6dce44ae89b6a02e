#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "hamsync/errors.hpp"
#include "hamsync/word.hpp"
#include "oracles.hpp"

using namespace hamsync;

TEST(Word, FromStringPutsCharIAtBitI) {
  const Word w = Word::from_string("0110");
  EXPECT_EQ(w.size(), 4u);
  EXPECT_FALSE(w.bit(0));
  EXPECT_TRUE(w.bit(1));
  EXPECT_TRUE(w.bit(2));
  EXPECT_FALSE(w.bit(3));
  EXPECT_EQ(w.to_string(), "0110");
  EXPECT_EQ(w.to_uint(), 6u);
}

TEST(Word, RejectsBadInput) {
  EXPECT_THROW(Word::from_string("01x"), ContractViolation);
  EXPECT_THROW(Word::from_uint(16, 4), ContractViolation);
  EXPECT_THROW(Word(Word::kMaxBits + 1), ContractViolation);
  Word w(3);
  EXPECT_THROW(w.bit(3), ContractViolation);
  EXPECT_THROW(w.slice(2, 2), ContractViolation);
}

TEST(Word, HammingDistance) {
  EXPECT_EQ(hamming_distance(Word::from_string("0000"), Word::from_string("0000")), 0u);
  EXPECT_EQ(hamming_distance(Word::from_string("1010"), Word::from_string("0101")), 4u);
  EXPECT_EQ(hamming_distance(Word::from_string("1100"), Word::from_string("1000")), 1u);
  EXPECT_THROW(hamming_distance(Word(3), Word(4)), ContractViolation);
}

TEST(Word, DistanceMatchesPopcountAcrossLimbs) {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const Word a = random_word(200, rng);
    const Word b = random_word(200, rng);
    std::size_t d = 0;
    for (std::size_t i = 0; i < 200; ++i) d += a.bit(i) != b.bit(i);
    EXPECT_EQ(hamming_distance(a, b), d);
    EXPECT_EQ((a ^ b).weight(), d);
  }
}

TEST(Word, ModMatchesLsbFirstInteger) {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const Word w = random_word(130, rng);
    for (std::uint64_t q : {2ull, 3ull, 97ull, 1000003ull}) {
      // Horner from the most significant bit.
      std::uint64_t r = 0;
      for (std::size_t i = w.size(); i-- > 0;) r = (2 * r + (w.bit(i) ? 1 : 0)) % q;
      EXPECT_EQ(w.mod(q), r);
    }
  }
}

TEST(Word, LexicographicOrderComparesLowIndicesFirst) {
  EXPECT_LT(Word::from_string("0111"), Word::from_string("1000"));
  EXPECT_LT(Word::from_string("1000"), Word::from_string("1001"));
  EXPECT_LT(Word(3), Word(4));
  EXPECT_EQ(Word::from_string("101") <=> Word::from_string("101"), std::strong_ordering::equal);
}

TEST(Word, SliceAssignResize) {
  const Word w = Word::from_string("1101001110");
  EXPECT_EQ(w.slice(2, 5).to_string(), "01001");
  Word v(10);
  v.assign(3, Word::from_string("111"));
  EXPECT_EQ(v.to_string(), "0001110000");
  EXPECT_EQ(w.resized(4).to_string(), "1101");
  EXPECT_EQ(w.resized(12).to_string(), "110100111000");
}

TEST(Word, RandomWordWithinRespectsRadius) {
  Rng rng(3);
  const Word y = random_word(40, rng);
  std::set<std::size_t> seen;
  for (int t = 0; t < 2000; ++t) {
    const auto d = hamming_distance(random_word_within(y, 4, rng), y);
    EXPECT_LE(d, 4u);
    seen.insert(d);
  }
  EXPECT_EQ(seen.size(), 5u);
}

TEST(Word, BallEnumerationCountsMatchVolume) {
  for (std::size_t n : {1u, 5u, 9u}) {
    for (std::size_t r = 0; r <= n; ++r) {
      std::set<Word> visited;
      std::size_t last_distance = 0;
      const Word center = Word::from_uint((1u << n) - 1, n);
      for_each_in_ball(center, r, [&](const Word& w) {
        const auto d = hamming_distance(w, center);
        EXPECT_GE(d, last_distance);
        last_distance = d;
        visited.insert(w);
      });
      EXPECT_EQ(visited.size(), oracle::ball_volume_by_scan(r, n));
    }
  }
}

TEST(Word, CeilLog2) {
  EXPECT_EQ(ceil_log2(0), 0u);
  EXPECT_EQ(ceil_log2(1), 0u);
  EXPECT_EQ(ceil_log2(2), 1u);
  EXPECT_EQ(ceil_log2(3), 2u);
  EXPECT_EQ(ceil_log2(1024), 10u);
  EXPECT_EQ(ceil_log2(1025), 11u);
  EXPECT_EQ(width_for(256), 9u);
  EXPECT_EQ(width_for(255), 8u);
}

TEST(Word, BitWriterReaderRoundTrip) {
  BitWriter out;
  out.put(5, 3);
  out.put(Word::from_string("1001"));
  out.put(0x1234, 16);
  const Word packed = out.finish();
  EXPECT_EQ(packed.size(), 23u);
  BitReader in(packed);
  EXPECT_EQ(in.get(3), 5u);
  EXPECT_EQ(in.get_word(4).to_string(), "1001");
  EXPECT_EQ(in.get(16), 0x1234u);
  EXPECT_EQ(in.remaining(), 0u);
  EXPECT_THROW(in.get(1), ContractViolation);
}

TEST(Word, SerializationRoundTripAndLayout) {
  const Word w = Word::from_string("1000000011");
  const auto bytes = serialize(w);
  ASSERT_EQ(bytes.size(), 8u + 2u);
  EXPECT_EQ(bytes[0], 10);
  for (int i = 1; i < 8; ++i) EXPECT_EQ(bytes[i], 0);
  EXPECT_EQ(bytes[8], 0x01);
  EXPECT_EQ(bytes[9], 0x03);
  EXPECT_EQ(deserialize(bytes), w);

  std::stringstream ss;
  Rng rng(1);
  const Word big = random_word(1000, rng);
  write_word(ss, big);
  EXPECT_EQ(read_word(ss), big);
}

TEST(Word, EmptyWord) {
  const Word e(0);
  EXPECT_TRUE(e.empty());
  EXPECT_EQ(e.weight(), 0u);
  EXPECT_EQ(deserialize(serialize(e)), e);
}
