#include <gtest/gtest.h>

#include <map>

#include "hamsync/errors.hpp"
#include "hamsync/probproto.hpp"
#include "oracles.hpp"

using namespace hamsync;
using namespace hamsync::prob;

TEST(NextPrime, Values) {
  EXPECT_EQ(next_prime_at_least(7), 7u);
  EXPECT_EQ(next_prime_at_least(8), 11u);
  EXPECT_EQ(next_prime_at_least(2048), 2053u);
  for (std::uint64_t n = 2; n < 3000; ++n) EXPECT_EQ(next_prime_at_least(n), oracle::next_prime(n));
  EXPECT_THROW(next_prime_at_least(1), ContractViolation);
}

TEST(AffinePermutation, KnownImages) {
  const AffinePermutation id(7, 1, 0);
  for (std::uint64_t i = 0; i < 7; ++i) EXPECT_EQ(id(i), i);
  const AffinePermutation p(5, 2, 3);
  const std::vector<std::uint64_t> expected{3, 0, 2, 4, 1};
  for (std::uint64_t i = 0; i < 5; ++i) {
    EXPECT_EQ(p(i), expected[i]);
    EXPECT_EQ(p.preimage(p(i)), i);
  }
  EXPECT_THROW(AffinePermutation(6, 1, 0), ContractViolation);
  EXPECT_THROW(AffinePermutation(5, 0, 0), ContractViolation);
  EXPECT_EQ(AffinePermutation(2053, 1, 0).wire_bits(), 24u);
}

TEST(AffinePermutation, ApplyInvertRoundTrip) {
  Rng rng(6);
  for (int t = 0; t < 10000; ++t) {
    const std::uint64_t p = oracle::next_prime(2 + rng() % 200);
    const auto perm = AffinePermutation::sample(p, rng);
    const Word w = random_word(static_cast<std::size_t>(p), rng);
    const Word moved = perm.apply(w);
    EXPECT_EQ(perm.invert(moved), w);
    const std::uint64_t i = rng() % p;
    EXPECT_EQ(moved.bit(i), w.bit(perm(i)));
  }
}

TEST(AffinePermutation, PairwiseIndependenceIsExact) {
  for (std::uint64_t p : {5u, 7u, 11u, 13u}) {
    const std::uint64_t family = p * (p - 1);
    for (std::uint64_t i = 0; i < p; ++i) {
      for (std::uint64_t j = 0; j < p; ++j) {
        std::map<std::uint64_t, std::uint64_t> single;
        std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> pair;
        for (std::uint64_t a = 1; a < p; ++a) {
          for (std::uint64_t b = 0; b < p; ++b) {
            const AffinePermutation f(p, a, b);
            ++single[f(i)];
            if (i != j) ++pair[{f(i), f(j)}];
          }
        }
        // Pr[π(i) = x] = 1/p: each x hit (p-1) times out of p(p-1).
        ASSERT_EQ(single.size(), p);
        for (const auto& [x, c] : single) EXPECT_EQ(c * p, family);
        if (i == j) continue;
        // Pr[π(i) = x, π(j) = y] = 1/(p(p-1)): every ordered pair exactly once.
        ASSERT_EQ(pair.size(), family);
        for (const auto& [xy, c] : pair) EXPECT_EQ(c, 1u);
      }
    }
  }
}

TEST(BlockView, PaddingAndJoin) {
  const Word w = Word::from_string("1101101");
  const BlockView view(w, 3);
  EXPECT_EQ(view.block_count(), 3u);
  EXPECT_EQ(view.block(0).to_string(), "110");
  EXPECT_EQ(view.block(2).to_string(), "100");
  std::vector<Word> blocks;
  for (std::size_t i = 0; i < 3; ++i) blocks.push_back(view.block(i));
  EXPECT_EQ(BlockView::join(blocks, 7), w);
}

TEST(DangerousBlocks, Boundaries) {
  Rng rng(1);
  const Word x = random_word(11, rng);
  const AffinePermutation perm(11, 3, 4);
  EXPECT_EQ(dangerous_blocks(x, x, perm, 3, Rational(0, 1)), 0u);
  Word y = x;
  y.flip(0);
  y.flip(5);
  // Threshold 0: the blocks holding a difference.
  const BlockView diff(perm.apply(x ^ y), 3);
  std::size_t with_diff = 0;
  for (std::size_t i = 0; i < diff.block_count(); ++i) with_diff += diff.block(i).weight() > 0;
  EXPECT_EQ(dangerous_blocks(x, y, perm, 3, Rational(0, 1)), with_diff);
  EXPECT_EQ(dangerous_blocks(x, y, perm, 3, Rational(1, 1)), 0u);
}

TEST(OneRound, RecoversAndReportsCollisions) {
  Rng rng(19);
  const auto code = std::make_shared<const gf2::LinearCode>(gf2::random_linear_code(14, 5, rng));
  const Bounds bounds(Rational(3, 14), 14);
  std::size_t detected = 0, wrong = 0;
  for (int t = 0; t < 300; ++t) {
    const Word x = random_word(14, rng);
    const syncdet::SyncInstance inst(x, random_word_within(x, 3, rng), bounds);
    const auto outcome = one_round_prob_sync(code, 3, inst, 16, rng);
    EXPECT_EQ(outcome.transcript.rounds(), 1u);
    if (outcome.reported_failure) {
      ++detected;
    } else if (outcome.recovered != x) {
      ++wrong;
    }
  }
  EXPECT_EQ(wrong, 0u);
  EXPECT_LE(detected, 300u / 16 + 15);
}

TEST(OneRound, SingleCandidateAlwaysSucceeds) {
  Rng rng(2);
  const auto code = std::make_shared<const gf2::LinearCode>(gf2::random_linear_code(12, 4, rng));
  for (int t = 0; t < 50; ++t) {
    const Word x = random_word(12, rng);
    const auto outcome =
        one_round_prob_sync(code, 0, syncdet::SyncInstance(x, x, Bounds(Rational(0, 1), 12)), 4, rng);
    EXPECT_EQ(outcome.recovered, x);
  }
}

TEST(Composite, ParamValidation) {
  const Bounds b(Rational(1, 20), 2048);
  ProbParams p;
  EXPECT_NO_THROW(p.validate(b));
  EXPECT_EQ(p.inner_radius(b.alpha), 2u);
  p.k = 7;  // 2^7 = 128 < m + s
  EXPECT_THROW(p.validate(b), ConfigError);
  p = ProbParams{};
  p.delta = Rational(1, 2);
  EXPECT_THROW(p.validate(b), ConfigError);
  p = ProbParams{};
  p.inner_dim = 11;
  EXPECT_THROW(p.validate(b), ConfigError);
}

TEST(Composite, EqualWordsAndSmallDistance) {
  Rng rng(23);
  ProbParams params;
  params.k = 8;
  params.s = 16;
  params.inner_dim = 3;
  const Bounds bounds(Rational(1, 20), 400);
  for (int t = 0; t < 10; ++t) {
    const Word x = random_word(400, rng);
    const auto same = composite_prob_sync(syncdet::SyncInstance(x, x, bounds), params, rng);
    EXPECT_EQ(same.recovered, x);
    EXPECT_EQ(same.diagnostics.at("dangerous_blocks"), "0");
    EXPECT_EQ(same.diagnostics.at("rs_corrections"), "0");
    EXPECT_EQ(same.transcript.rounds(), 1u);

    const auto near = composite_prob_sync(syncdet::SyncInstance(x, random_word_within(x, 20, rng), bounds), params, rng);
    ASSERT_TRUE(near.recovered) << near.diagnostics.at("failure");
    EXPECT_EQ(near.recovered, x);
  }
}

TEST(Composite, BitAccountingAddsUp) {
  Rng rng(29);
  ProbParams params;
  params.k = 8;
  params.s = 16;
  params.inner_dim = 3;
  for (auto finish : {InnerFinish::Nearest, InnerFinish::Nba}) {
    params.inner_finish = finish;
    const Word x = random_word(400, rng);
    const auto outcome = composite_prob_sync(
        syncdet::SyncInstance(x, random_word_within(x, 20, rng), Bounds(Rational(1, 20), 400)), params, rng);
    const auto& d = outcome.diagnostics;
    std::size_t sum = 0;
    for (const char* key : {"bits_permutation", "bits_matrix", "bits_syndromes", "bits_nba", "bits_rs"}) {
      sum += std::stoull(d.at(key));
    }
    EXPECT_EQ(sum, outcome.transcript.total_bits());
    // p = 401, m = 51 blocks of 8 bits, H is 5 x 8.
    EXPECT_EQ(d.at("bits_permutation"), "18");
    EXPECT_EQ(d.at("bits_matrix"), "40");
    EXPECT_EQ(d.at("bits_syndromes"), std::to_string(51 * 5));
    EXPECT_EQ(d.at("bits_rs"), std::to_string(16 * 8));
    EXPECT_EQ(outcome.transcript.rounds(), finish == InnerFinish::Nba ? 3u : 1u);
    EXPECT_EQ(d.at("stages"), "3");
  }
}
