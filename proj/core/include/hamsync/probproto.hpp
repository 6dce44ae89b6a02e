#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "hamsync/bounds.hpp"
#include "hamsync/gf2codes.hpp"
#include "hamsync/syncdet.hpp"
#include "hamsync/transport.hpp"
#include "hamsync/word.hpp"

namespace hamsync::prob {

/// Smallest prime >= n (n >= 2).
std::uint64_t next_prime_at_least(std::uint64_t n);

/// i -> (a i + b) mod p on [0, p), p prime.
struct AffinePermutation {
  std::uint64_t p = 2;
  std::uint64_t a = 1;
  std::uint64_t b = 0;

  AffinePermutation() = default;
  AffinePermutation(std::uint64_t p_, std::uint64_t a_, std::uint64_t b_);

  /// a uniform on [1, p-1], b uniform on [0, p-1].
  static AffinePermutation sample(std::uint64_t p, Rng& rng);

  std::uint64_t operator()(std::uint64_t i) const;
  std::uint64_t preimage(std::uint64_t j) const;

  /// Word of length p with out(i) = w(π(i)).
  Word apply(const Word& w) const;
  /// Inverse of apply().
  Word invert(const Word& w) const;

  /// Bits used to send (a, b): 2 ceil(log2 p).
  std::size_t wire_bits() const { return 2 * ceil_log2(p); }
};

/// A padded word cut into blocks of k bits; the last block is zero-padded.
class BlockView {
 public:
  BlockView(Word word, std::size_t k);

  std::size_t block_size() const noexcept { return k_; }
  std::size_t block_count() const noexcept { return m_; }
  const Word& word() const noexcept { return word_; }
  Word block(std::size_t i) const;

  /// Concatenate blocks and truncate to `length` bits.
  static Word join(std::span<const Word> blocks, std::size_t length);

 private:
  Word word_;
  std::size_t k_;
  std::size_t m_;
};

/// Blocks (after permuting both padded words) that differ in at least
/// threshold * k positions. Blocks with no difference are never dangerous.
std::size_t dangerous_blocks(const Word& xp, const Word& yp, const AffinePermutation& perm, std::size_t k,
                             const Rational& threshold);

/// n / (s k^2 delta^2), the bound on Pr[dangerous blocks >= s/2].
double dangerous_block_bound(std::size_t n, std::size_t s, std::size_t k, double delta);

// ---------------------------------------------------------------------------

/// Alice sends (syndrome, q, x mod q) in one message, q a random prime among
/// the first a L^2 n primes where L is the list-size cap. Bob reports failure
/// if q collides on his candidate list.
PartyPair make_one_round_parties(std::shared_ptr<const gf2::LinearCode> code, std::size_t radius, std::size_t a,
                                 Word x, Word y, std::uint64_t alice_seed);
ProtocolOutcome one_round_prob_sync(std::shared_ptr<const gf2::LinearCode> code, std::size_t radius,
                                    const syncdet::SyncInstance& instance, std::size_t a, Rng& rng,
                                    DuplexChannel* channel = nullptr);

// ---------------------------------------------------------------------------

/// How Bob settles a block whose inner candidate list has several entries.
enum class InnerFinish {
  /// Take the candidate closest to his own block (no extra messages).
  Nearest,
  /// Run NBA per block (two more rounds).
  Nba,
};

std::string_view to_string(InnerFinish f);
InnerFinish parse_inner_finish(std::string_view text);

struct ProbParams {
  std::size_t k = 11;
  std::size_t s = 64;
  Rational delta{3, 20};
  /// Dimension of the inner random [k, inner_dim] code.
  std::size_t inner_dim = 5;
  InnerFinish inner_finish = InnerFinish::Nearest;

  /// Throws ConfigError when the parameters do not fit n and alpha.
  void validate(const Bounds& bounds) const;
  /// floor((alpha + delta) k).
  std::size_t inner_radius(const Rational& alpha) const;
};

/// Parties for the three-stage protocol: shared permutation, inner list
/// decoding per block, outer Reed-Solomon correction over GF(2^k).
PartyPair make_composite_parties(const Bounds& bounds, const ProbParams& params, Word x, Word y,
                                 std::uint64_t alice_seed);
ProtocolOutcome composite_prob_sync(const syncdet::SyncInstance& instance, const ProbParams& params, Rng& rng,
                                    DuplexChannel* channel = nullptr);

}  // namespace hamsync::prob
