#include "hamsync/hashing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "hamsync/errors.hpp"

namespace hamsync::hashing {

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

template <typename Hash, typename T>
bool injective_impl(const Hash& hash, std::span<const T> set) {
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(set.size() * 2);
  for (const auto& x : set) {
    if (!seen.insert(hash(x)).second) return false;
  }
  return true;
}

template <typename T>
ModHash smallest_injective_prime(std::span<const T> set, std::size_t n) {
  require(!set.empty(), "injective prime search needs a non-empty set");
  const std::uint64_t bound = injective_prime_bound(set.size(), n);
  for (std::uint64_t q : sieve_primes(bound).primes) {
    ModHash h{q};
    if (injective_impl(h, set)) return h;
  }
  throw InvariantError("no injective prime below k^2 n; the input set has duplicates or exceeds n bits");
}

}  // namespace

PrimeTable sieve_primes(std::uint64_t limit) {
  require(limit >= 2, "sieve limit must be at least 2");
  std::vector<bool> composite(limit + 1, false);
  PrimeTable table{limit, {}};
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    table.primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return table;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1U) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

bool is_injective(const ModHash& hash, std::span<const Word> set) { return injective_impl(hash, set); }
bool is_injective(const ModHash& hash, std::span<const std::uint64_t> set) { return injective_impl(hash, set); }

std::uint64_t injective_prime_bound(std::size_t k, std::size_t n) {
  return std::max<std::uint64_t>(2, static_cast<std::uint64_t>(k) * k * n);
}

ModHash find_injective_prime(std::span<const Word> set) {
  require(!set.empty(), "injective prime search needs a non-empty set");
  const std::size_t n = set.front().size();
  for (const auto& w : set) require(w.size() == n, "candidate words differ in length");
  return smallest_injective_prime(set, n);
}

ModHash find_injective_prime(std::span<const std::uint64_t> set, std::size_t n) {
  for (auto x : set) require(n >= 64 || (x >> n) == 0, "set element exceeds n bits");
  return smallest_injective_prime(set, n);
}

std::uint64_t SecondaryHash::operator()(std::uint64_t x) const { return mul_mod(s, x % v, v) % range(); }

bool is_injective(const SecondaryHash& hash, std::span<const std::uint64_t> set) { return injective_impl(hash, set); }

SecondaryHash find_secondary_hash(std::span<const std::uint64_t> reduced, std::uint64_t v, std::size_t k, Rng& rng,
                                  std::size_t max_draws) {
  require(reduced.size() == k, "reduced set size must equal k");
  require(is_prime(v), "secondary hash modulus must be prime");
  for (auto x : reduced) require(x < v, "reduced element outside [0, v-1]");
  if (max_draws == 0) max_draws = 64 * k;
  std::uniform_int_distribution<std::uint64_t> pick(0, v - 1);
  for (std::size_t draw = 0; draw < max_draws; ++draw) {
    SecondaryHash h{v, pick(rng), k};
    if (is_injective(h, reduced)) return h;
  }
  throw ProbabilisticFailure("no collision-free secondary hash after " + std::to_string(max_draws) + " draws");
}

PrimeRange::PrimeRange(std::size_t n, std::size_t k, std::size_t a) {
  require(a >= 2, "oversampling factor must be at least 2");
  require(n >= 1 && k >= 1, "n and k must be positive");
  const std::uint64_t target = static_cast<std::uint64_t>(a) * n * k * k;

  static std::mutex cache_mutex;
  static std::map<std::uint64_t, std::shared_ptr<const std::vector<std::uint64_t>>> cache;
  std::lock_guard lock(cache_mutex);
  if (auto it = cache.find(target); it != cache.end()) {
    primes_ = it->second;
    return;
  }
  // Rosser's bound p_m < m (ln m + ln ln m) for m >= 6.
  const double m = static_cast<double>(target);
  const std::uint64_t limit =
      target < 6 ? 13 : static_cast<std::uint64_t>(m * (std::log(m) + std::log(std::log(m)))) + 1;
  auto table = sieve_primes(limit);
  if (table.primes.size() < target) throw InvariantError("prime sieve bound too small");
  table.primes.resize(target);
  primes_ = std::make_shared<const std::vector<std::uint64_t>>(std::move(table.primes));
  cache.emplace(target, primes_);
}

ModHash PrimeRange::sample(Rng& rng) const {
  std::uniform_int_distribution<std::size_t> pick(0, primes_->size() - 1);
  return ModHash{(*primes_)[pick(rng)]};
}

ModHash random_prime_hash(const PrimeRange& range, Rng& rng) { return range.sample(rng); }

ModHash random_prime_hash(std::size_t n, std::size_t k, std::size_t a, Rng& rng) {
  return PrimeRange(n, k, a).sample(rng);
}

// ---------------------------------------------------------------------------

std::size_t nba_width(std::size_t k, std::size_t n) {
  return width_for(injective_prime_bound(k, n));
}

ModHash nba_challenge(std::span<const Word> candidates) {
  if (candidates.empty()) return ModHash{2};
  return find_injective_prime(candidates);
}

std::optional<Word> nba_resolve(std::span<const Word> candidates, const ModHash& hash, std::uint64_t residue) {
  std::optional<Word> match;
  for (const auto& c : candidates) {
    if (hash(c) != residue) continue;
    if (match) throw InvariantError("NBA modulus is not injective on the candidate list");
    match = c;
  }
  return match;
}

namespace {

class NbaAlice final : public Party {
 public:
  NbaAlice(Word x, std::size_t width) : x_(std::move(x)), width_(width) {}

  Step start() override { return {}; }

  Step receive(const Word& message) override {
    BitReader in(message);
    const ModHash hash{in.get(width_)};
    require(hash.q >= 2, "received modulus below 2");
    BitWriter out;
    out.put(hash(x_), width_);
    return Step{{out.finish()}, true};
  }

 private:
  Word x_;
  std::size_t width_;
};

class NbaBob final : public ReceivingParty {
 public:
  NbaBob(std::vector<Word> candidates, std::size_t width) : candidates_(std::move(candidates)), width_(width) {}

  Step start() override {
    hash_ = nba_challenge(candidates_);
    BitWriter out;
    out.put(hash_.q, width_);
    return Step{{out.finish()}, false};
  }

  Step receive(const Word& message) override {
    BitReader in(message);
    result_ = nba_resolve(candidates_, hash_, in.get(width_));
    return Step{{}, true};
  }

  Verdict verdict() const override {
    Verdict v{result_, {}};
    v.diagnostics["nba_modulus"] = std::to_string(hash_.q);
    v.diagnostics["candidates"] = std::to_string(candidates_.size());
    if (!result_) v.diagnostics["failure"] = "no candidate matches the residue (promise violated)";
    return v;
  }

 private:
  std::vector<Word> candidates_;
  std::size_t width_;
  ModHash hash_;
  std::optional<Word> result_;
};

class MultiNbaAlice final : public Party {
 public:
  MultiNbaAlice(std::vector<Word> xs, std::size_t k, std::size_t n) : xs_(std::move(xs)), k_(k), width_(nba_width(k, n)) {}

  Step start() override { return {}; }

  Step receive(const Word& message) override {
    BitReader in(message);
    const ModHash primary{in.get(width_)};
    const SecondaryHash secondary{primary.q, in.get(width_), k_};
    require(is_prime(primary.q), "received modulus is not prime");
    BitWriter out;
    for (const auto& x : xs_) out.put(secondary(primary(x)), multi_nba_value_width(k_));
    return Step{{out.finish()}, true};
  }

 private:
  std::vector<Word> xs_;
  std::size_t k_;
  std::size_t width_;
};

class MultiNbaBob final : public ReceivingParty {
 public:
  MultiNbaBob(std::vector<Word> candidates, std::uint64_t seed) : candidates_(std::move(candidates)), rng_(seed) {
    require(!candidates_.empty(), "Bob needs at least one candidate");
    width_ = nba_width(candidates_.size(), candidates_.front().size());
  }

  Step start() override {
    primary_ = find_injective_prime(candidates_);
    std::vector<std::uint64_t> reduced;
    reduced.reserve(candidates_.size());
    for (const auto& c : candidates_) reduced.push_back(primary_(c));
    secondary_ = find_secondary_hash(reduced, primary_.q, candidates_.size(), rng_);
    for (std::size_t i = 0; i < candidates_.size(); ++i) table_.emplace(secondary_(reduced[i]), i);
    BitWriter out;
    out.put(primary_.q, width_);
    out.put(secondary_.s, width_);
    return Step{{out.finish()}, false};
  }

  Step receive(const Word& message) override {
    const std::size_t value_width = multi_nba_value_width(candidates_.size());
    if (message.size() % value_width != 0) throw InvariantError("round-2 payload is not a whole number of values");
    BitReader in(message);
    std::vector<Word> words;
    while (in.remaining() > 0) {
      auto it = table_.find(in.get(value_width));
      if (it == table_.end()) {
        failed_ = true;
        break;
      }
      words.push_back(candidates_[it->second]);
    }
    if (!failed_) {
      BitWriter joined;
      for (const auto& w : words) joined.put(w);
      result_ = joined.finish();
      count_ = words.size();
    }
    return Step{{}, true};
  }

  Verdict verdict() const override {
    Verdict v{result_, {}};
    v.diagnostics["q"] = std::to_string(primary_.q);
    v.diagnostics["s"] = std::to_string(secondary_.s);
    v.diagnostics["words"] = std::to_string(count_);
    if (failed_) v.diagnostics["failure"] = "a residue matched no candidate (promise violated)";
    return v;
  }

 private:
  std::vector<Word> candidates_;
  Rng rng_;
  std::size_t width_ = 0;
  ModHash primary_;
  SecondaryHash secondary_;
  std::unordered_map<std::uint64_t, std::size_t> table_;
  std::optional<Word> result_;
  std::size_t count_ = 0;
  bool failed_ = false;
};

}  // namespace

PartyPair make_nba_parties(Word alice_word, std::vector<Word> bob_candidates, std::size_t k_cap) {
  require(k_cap >= bob_candidates.size() && k_cap >= 1, "k_cap below the candidate count");
  const std::size_t n = alice_word.size();
  for (const auto& c : bob_candidates) require(c.size() == n, "candidate length differs from Alice's word");
  const std::size_t width = nba_width(k_cap, n);
  return PartyPair{std::make_unique<NbaAlice>(std::move(alice_word), width),
                   std::make_unique<NbaBob>(std::move(bob_candidates), width)};
}

ProtocolOutcome nba_protocol(const Word& alice_word, std::span<const Word> bob_candidates) {
  require(!bob_candidates.empty(), "Bob needs at least one candidate");
  auto parties = make_nba_parties(alice_word, {bob_candidates.begin(), bob_candidates.end()}, bob_candidates.size());
  return run_protocol(parties);
}

std::size_t multi_nba_value_width(std::size_t k) {
  return width_for(2 * static_cast<std::uint64_t>(k) * k - 1);
}

PartyPair make_multi_nba_parties(std::vector<Word> alice_words, std::vector<Word> bob_candidates,
                                 std::uint64_t bob_seed) {
  require(!bob_candidates.empty(), "Bob needs at least one candidate");
  require(!alice_words.empty(), "Alice needs at least one word");
  const std::size_t n = bob_candidates.front().size();
  for (const auto& x : alice_words) require(x.size() == n, "Alice's word length differs from Bob's");
  const std::size_t k = bob_candidates.size();
  return PartyPair{std::make_unique<MultiNbaAlice>(std::move(alice_words), k, n),
                   std::make_unique<MultiNbaBob>(std::move(bob_candidates), bob_seed)};
}

ProtocolOutcome multi_nba_protocol(std::span<const Word> alice_words, std::span<const Word> bob_candidates, Rng& rng) {
  auto parties = make_multi_nba_parties({alice_words.begin(), alice_words.end()},
                                        {bob_candidates.begin(), bob_candidates.end()}, rng());
  return run_protocol(parties);
}

}  // namespace hamsync::hashing
