#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hamsync/transport.hpp"
#include "hamsync/word.hpp"

namespace hamsync::hashing {

/// All primes <= limit, ascending.
struct PrimeTable {
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> primes;
};

PrimeTable sieve_primes(std::uint64_t limit);

/// Deterministic for the full 64-bit range.
bool is_prime(std::uint64_t n);

/// x -> x mod q, q prime.
struct ModHash {
  std::uint64_t q = 2;

  std::uint64_t operator()(const Word& x) const { return x.mod(q); }
  std::uint64_t operator()(std::uint64_t x) const { return x % q; }
};

bool is_injective(const ModHash& hash, std::span<const Word> set);
bool is_injective(const ModHash& hash, std::span<const std::uint64_t> set);

/// max(2, k^2 n): the range the injective prime is guaranteed to lie in.
std::uint64_t injective_prime_bound(std::size_t k, std::size_t n);

/// Smallest prime q <= k^2 n with x mod q injective on `set`.
/// Throws InvariantError if no such prime exists.
ModHash find_injective_prime(std::span<const Word> set);
ModHash find_injective_prime(std::span<const std::uint64_t> set, std::size_t n);

/// h_s(x) = (s x mod v) mod 2k^2.
struct SecondaryHash {
  std::uint64_t v = 2;
  std::uint64_t s = 0;
  std::size_t k = 1;

  std::uint64_t range() const { return 2 * static_cast<std::uint64_t>(k) * k; }
  std::uint64_t operator()(std::uint64_t x) const;
};

bool is_injective(const SecondaryHash& hash, std::span<const std::uint64_t> set);

/// Draw s uniformly from [0, v-1] until h_s is injective on `reduced`.
/// `max_draws` == 0 means the default cap of 64k. Throws ProbabilisticFailure
/// when the cap is hit.
SecondaryHash find_secondary_hash(std::span<const std::uint64_t> reduced, std::uint64_t v, std::size_t k, Rng& rng,
                                  std::size_t max_draws = 0);

/// The first a*n*k^2 primes. `upper()` is the smallest A with at least that
/// many primes in [1, A].
class PrimeRange {
 public:
  PrimeRange(std::size_t n, std::size_t k, std::size_t a);

  std::uint64_t upper() const noexcept { return primes_->back(); }
  std::size_t count() const noexcept { return primes_->size(); }
  ModHash sample(Rng& rng) const;

 private:
  std::shared_ptr<const std::vector<std::uint64_t>> primes_;
};

ModHash random_prime_hash(const PrimeRange& range, Rng& rng);
ModHash random_prime_hash(std::size_t n, std::size_t k, std::size_t a, Rng& rng);

// ---------------------------------------------------------------------------
// NBA: Bob holds k candidates, Alice holds one of them.

/// Field width for q and x mod q: ceil(log2(k^2 n + 1)).
std::size_t nba_width(std::size_t k, std::size_t n);

/// Bob's first move. An empty candidate list still yields a valid modulus.
ModHash nba_challenge(std::span<const Word> candidates);

/// The unique candidate with the given residue, if any.
std::optional<Word> nba_resolve(std::span<const Word> candidates, const ModHash& hash, std::uint64_t residue);

/// Parties for the two-round NBA protocol. `k_cap` fixes the field width;
/// it must be >= the number of candidates.
PartyPair make_nba_parties(Word alice_word, std::vector<Word> bob_candidates, std::size_t k_cap);

ProtocolOutcome nba_protocol(const Word& alice_word, std::span<const Word> bob_candidates);

/// Width of one round-2 value in the multi-word protocol: ceil(log2(2k^2)).
std::size_t multi_nba_value_width(std::size_t k);

PartyPair make_multi_nba_parties(std::vector<Word> alice_words, std::vector<Word> bob_candidates,
                                 std::uint64_t bob_seed);

ProtocolOutcome multi_nba_protocol(std::span<const Word> alice_words, std::span<const Word> bob_candidates, Rng& rng);

}  // namespace hamsync::hashing
