#include "hamsync/probproto.hpp"

#include <algorithm>
#include <limits>

#include "hamsync/errors.hpp"
#include "hamsync/gf2k.hpp"
#include "hamsync/hashing.hpp"

namespace hamsync::prob {

std::uint64_t next_prime_at_least(std::uint64_t n) {
  require(n >= 2, "next_prime_at_least requires n >= 2");
  for (std::uint64_t p = n;; ++p) {
    if (hashing::is_prime(p)) return p;
    require(p != std::numeric_limits<std::uint64_t>::max(), "no prime in range");
  }
}

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p) {
  // a^(p-2) mod p
  std::uint64_t result = 1, base = a % p, e = p - 2;
  while (e > 0) {
    if (e & 1) result = mulmod(result, base, p);
    base = mulmod(base, base, p);
    e >>= 1;
  }
  return result;
}

}  // namespace

AffinePermutation::AffinePermutation(std::uint64_t p_, std::uint64_t a_, std::uint64_t b_) : p(p_), a(a_), b(b_) {
  require(hashing::is_prime(p), "permutation modulus must be prime");
  require(a >= 1 && a < p, "a must lie in [1, p-1]");
  require(b < p, "b must lie in [0, p-1]");
}

AffinePermutation AffinePermutation::sample(std::uint64_t p, Rng& rng) {
  require(hashing::is_prime(p), "permutation modulus must be prime");
  std::uniform_int_distribution<std::uint64_t> da(1, p - 1);
  std::uniform_int_distribution<std::uint64_t> db(0, p - 1);
  const std::uint64_t a = da(rng);
  const std::uint64_t b = db(rng);
  return AffinePermutation(p, a, b);
}

std::uint64_t AffinePermutation::operator()(std::uint64_t i) const {
  require(i < p, "index outside [0, p)");
  return (mulmod(a, i, p) + b) % p;
}

std::uint64_t AffinePermutation::preimage(std::uint64_t j) const {
  require(j < p, "index outside [0, p)");
  return mulmod(inverse_mod(a, p), (j + p - b) % p, p);
}

Word AffinePermutation::apply(const Word& w) const {
  require(w.size() == p, "word length must equal the permutation modulus");
  Word out(p);
  for (std::uint64_t i = 0; i < p; ++i) {
    if (w.bit((*this)(i))) out.set(i, true);
  }
  return out;
}

Word AffinePermutation::invert(const Word& w) const {
  require(w.size() == p, "word length must equal the permutation modulus");
  Word out(p);
  for (std::uint64_t i = 0; i < p; ++i) {
    if (w.bit(i)) out.set((*this)(i), true);
  }
  return out;
}

BlockView::BlockView(Word word, std::size_t k) : word_(std::move(word)), k_(k) {
  require(k >= 1, "block size must be positive");
  m_ = (word_.size() + k - 1) / k;
}

Word BlockView::block(std::size_t i) const {
  require(i < m_, "block index out of range");
  const std::size_t pos = i * k_;
  const std::size_t len = std::min(k_, word_.size() - pos);
  return word_.slice(pos, len).resized(k_);
}

Word BlockView::join(std::span<const Word> blocks, std::size_t length) {
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.size();
  require(total >= length, "blocks shorter than the requested length");
  Word out(total);
  std::size_t pos = 0;
  for (const auto& b : blocks) {
    out.assign(pos, b);
    pos += b.size();
  }
  return out.resized(length);
}

std::size_t dangerous_blocks(const Word& xp, const Word& yp, const AffinePermutation& perm, std::size_t k,
                             const Rational& threshold) {
  require(xp.size() == yp.size(), "padded words differ in length");
  const BlockView diff(perm.apply(xp ^ yp), k);
  std::size_t count = 0;
  for (std::size_t i = 0; i < diff.block_count(); ++i) {
    const std::uint64_t d = diff.block(i).weight();
    // d >= threshold * k, exactly
    if (d > 0 && static_cast<unsigned __int128>(d) * threshold.den() >=
                     static_cast<unsigned __int128>(threshold.num()) * k) {
      ++count;
    }
  }
  return count;
}

double dangerous_block_bound(std::size_t n, std::size_t s, std::size_t k, double delta) {
  require(s >= 1 && k >= 1 && delta > 0, "bound needs s, k >= 1 and delta > 0");
  return static_cast<double>(n) / (static_cast<double>(s) * static_cast<double>(k * k) * delta * delta);
}

// ---------------------------------------------------------------------------

namespace {

ProtocolOutcome run(PartyPair parties, DuplexChannel* channel) {
  if (channel != nullptr) return run_protocol(parties, *channel);
  return run_protocol(parties);
}

struct OneRoundShape {
  std::size_t syndrome_bits;
  std::size_t hash_width;
  std::shared_ptr<const hashing::PrimeRange> primes;
};

OneRoundShape one_round_shape(const gf2::LinearCode& code, std::size_t radius, std::size_t a) {
  const std::uint64_t cap = syncdet::list_size_cap(code, radius);
  auto primes = std::make_shared<const hashing::PrimeRange>(code.length(), static_cast<std::size_t>(cap), a);
  return OneRoundShape{code.redundancy(), width_for(primes->upper()), std::move(primes)};
}

class OneRoundAlice final : public Party {
 public:
  OneRoundAlice(std::shared_ptr<const gf2::LinearCode> code, OneRoundShape shape, Word x, std::uint64_t seed)
      : code_(std::move(code)), shape_(std::move(shape)), x_(std::move(x)), rng_(seed) {}

  Step start() override {
    const hashing::ModHash hash = hashing::random_prime_hash(*shape_.primes, rng_);
    BitWriter out;
    out.put(code_->syndrome(x_));
    out.put(hash.q, shape_.hash_width);
    out.put(hash(x_), shape_.hash_width);
    return Step{{out.finish()}, true};
  }
  Step receive(const Word&) override { throw InvariantError("one-round sender received a message"); }

 private:
  std::shared_ptr<const gf2::LinearCode> code_;
  OneRoundShape shape_;
  Word x_;
  Rng rng_;
};

class OneRoundBob final : public ReceivingParty {
 public:
  OneRoundBob(std::shared_ptr<const gf2::LinearCode> code, std::size_t radius, OneRoundShape shape, Word y)
      : code_(std::move(code)), radius_(radius), shape_(std::move(shape)), y_(std::move(y)) {}

  Step start() override { return {}; }

  Step receive(const Word& message) override {
    BitReader in(message);
    const Word h = in.get_word(shape_.syndrome_bits);
    const hashing::ModHash hash{in.get(shape_.hash_width)};
    const std::uint64_t residue = in.get(shape_.hash_width);
    require(hash.q >= 2, "received modulus below 2");
    const auto candidates = syncdet::listdec_candidates(*code_, radius_, h, y_);
    list_size_ = candidates.size();
    modulus_ = hash.q;
    if (!hashing::is_injective(hash, candidates)) {
      failure_ = "hash collides on the candidate list";
    } else {
      result_ = hashing::nba_resolve(candidates, hash, residue);
      if (!result_) failure_ = "Alice's word is not among the candidates";
    }
    return Step{{}, true};
  }

  Verdict verdict() const override {
    Verdict v{result_, {}};
    v.diagnostics["list_size"] = std::to_string(list_size_);
    v.diagnostics["modulus"] = std::to_string(modulus_);
    if (!failure_.empty()) v.diagnostics["failure"] = failure_;
    return v;
  }

 private:
  std::shared_ptr<const gf2::LinearCode> code_;
  std::size_t radius_;
  OneRoundShape shape_;
  Word y_;
  std::optional<Word> result_;
  std::size_t list_size_ = 0;
  std::uint64_t modulus_ = 0;
  std::string failure_;
};

}  // namespace

PartyPair make_one_round_parties(std::shared_ptr<const gf2::LinearCode> code, std::size_t radius, std::size_t a,
                                 Word x, Word y, std::uint64_t alice_seed) {
  require(code != nullptr, "null code");
  require(x.size() == code->length() && y.size() == x.size(), "word length must equal the code length");
  if (code->length() > gf2::kMaxEnumerationLength) {
    throw CapabilityError("list decoding is exhaustive and limited to n <= 24");
  }
  auto shape = one_round_shape(*code, radius, a);
  return PartyPair{std::make_unique<OneRoundAlice>(code, shape, std::move(x), alice_seed),
                   std::make_unique<OneRoundBob>(code, radius, shape, std::move(y))};
}

ProtocolOutcome one_round_prob_sync(std::shared_ptr<const gf2::LinearCode> code, std::size_t radius,
                                    const syncdet::SyncInstance& instance, std::size_t a, Rng& rng,
                                    DuplexChannel* channel) {
  return run(make_one_round_parties(std::move(code), radius, a, instance.x, instance.y, rng()), channel);
}

// ---------------------------------------------------------------------------

std::string_view to_string(InnerFinish f) { return f == InnerFinish::Nearest ? "nearest" : "nba"; }

InnerFinish parse_inner_finish(std::string_view text) {
  if (text == "nearest") return InnerFinish::Nearest;
  if (text == "nba") return InnerFinish::Nba;
  throw ConfigError("unknown inner finish '" + std::string(text) + "' (expected nearest|nba)");
}

namespace {

std::uint64_t padded_length(std::size_t n) { return n < 2 ? 2 : next_prime_at_least(n); }

}  // namespace

void ProbParams::validate(const Bounds& bounds) const {
  if (k < 2 || k > 16) throw ConfigError("block size k must lie in [2, 16]");
  if (s < 2) throw ConfigError("s must be at least 2");
  if (delta.num() == 0) throw ConfigError("delta must be positive");
  if (!(bounds.alpha + delta < Rational(1, 2))) throw ConfigError("alpha + delta must be below 1/2");
  if (inner_dim < 1 || inner_dim >= k) throw ConfigError("inner code dimension must lie in [1, k-1]");
  const std::uint64_t p = padded_length(bounds.n);
  const std::uint64_t m = (p + k - 1) / k;
  if (!((std::uint64_t{1} << k) > m + s)) {
    throw ConfigError("field too small: need 2^k > m + s (m = " + std::to_string(m) + ")");
  }
}

std::size_t ProbParams::inner_radius(const Rational& alpha) const {
  return static_cast<std::size_t>((alpha + delta).floor_times(k));
}

namespace {

struct CompositeShape {
  std::size_t n;
  std::uint64_t p;
  std::size_t k;
  std::size_t m;
  std::size_t s;
  std::size_t inner_dim;
  std::size_t inner_radius;
  std::size_t index_width;
  std::size_t nba_width;
  InnerFinish finish;
};

CompositeShape composite_shape(const Bounds& bounds, const ProbParams& params) {
  params.validate(bounds);
  CompositeShape shape{};
  shape.n = bounds.n;
  shape.p = padded_length(bounds.n);
  shape.k = params.k;
  shape.m = static_cast<std::size_t>((shape.p + params.k - 1) / params.k);
  shape.s = params.s;
  shape.inner_dim = params.inner_dim;
  shape.inner_radius = params.inner_radius(bounds.alpha);
  shape.index_width = ceil_log2(shape.p);
  shape.finish = params.inner_finish;
  const BigInt volume = ball_volume(std::min(shape.inner_radius, shape.k), shape.k);
  const std::uint64_t cap = static_cast<std::uint64_t>(std::min(volume, BigInt(std::uint64_t{1} << shape.inner_dim)));
  shape.nba_width = hashing::nba_width(static_cast<std::size_t>(cap), shape.k);
  return shape;
}

std::vector<rs::FieldElem> to_field(std::span<const Word> blocks) {
  std::vector<rs::FieldElem> out;
  out.reserve(blocks.size());
  for (const auto& b : blocks) out.push_back(rs::FieldElem{static_cast<std::uint32_t>(b.to_uint())});
  return out;
}

class CompositeAlice final : public Party {
 public:
  CompositeAlice(CompositeShape shape, Word x, std::uint64_t seed) : shape_(shape), x_(std::move(x)), rng_(seed) {}

  Step start() override {
    const auto perm = AffinePermutation::sample(shape_.p, rng_);
    const BlockView view(perm.apply(x_.resized(static_cast<std::size_t>(shape_.p))), shape_.k);
    for (std::size_t i = 0; i < view.block_count(); ++i) blocks_.push_back(view.block(i));

    BitWriter stage1;
    stage1.put(perm.a, shape_.index_width);
    stage1.put(perm.b, shape_.index_width);

    const auto code = gf2::random_linear_code(shape_.k, shape_.inner_dim, rng_);
    BitWriter stage2;
    const auto& h = code.parity_check();
    for (std::size_t r = 0; r < h.rows(); ++r) stage2.put(h.row(r));
    for (const auto& b : blocks_) stage2.put(code.syndrome(b));

    if (shape_.finish == InnerFinish::Nba) return Step{{stage1.finish(), stage2.finish()}, false};
    return Step{{stage1.finish(), stage2.finish(), outer_stage()}, true};
  }

  Step receive(const Word& message) override {
    // Per-block NBA challenges.
    BitReader in(message);
    BitWriter out;
    for (const auto& b : blocks_) {
      const hashing::ModHash hash{in.get(shape_.nba_width)};
      require(hash.q >= 2, "received modulus below 2");
      out.put(hash(b), shape_.nba_width);
    }
    return Step{{out.finish(), outer_stage()}, true};
  }

 private:
  Word outer_stage() const {
    const rs::GaloisField field(static_cast<unsigned>(shape_.k));
    const auto values = to_field(blocks_);
    BitWriter out;
    for (auto e : rs::rs_extra_evals(field, values, shape_.s)) out.put(e.value, shape_.k);
    return out.finish();
  }

  CompositeShape shape_;
  Word x_;
  Rng rng_;
  std::vector<Word> blocks_;
};

class CompositeBob final : public ReceivingParty {
 public:
  CompositeBob(CompositeShape shape, Word y) : shape_(shape), y_(std::move(y)) {}

  Step start() override { return {}; }

  Step receive(const Word& message) override {
    ++received_;
    if (received_ == 1) return permutation_stage(message);
    if (received_ == 2) return inner_stage(message);
    if (shape_.finish == InnerFinish::Nba && received_ == 3) return nba_stage(message);
    return outer_stage(message);
  }

  Verdict verdict() const override {
    Verdict v{result_, {}};
    v.diagnostics["bits_permutation"] = std::to_string(bits_permutation_);
    v.diagnostics["bits_matrix"] = std::to_string(bits_matrix_);
    v.diagnostics["bits_syndromes"] = std::to_string(bits_syndromes_);
    v.diagnostics["bits_nba"] = std::to_string(bits_nba_);
    v.diagnostics["bits_rs"] = std::to_string(bits_rs_);
    v.diagnostics["blocks"] = std::to_string(shape_.m);
    v.diagnostics["padded_length"] = std::to_string(shape_.p);
    v.diagnostics["inner_radius"] = std::to_string(shape_.inner_radius);
    v.diagnostics["perm_a"] = std::to_string(perm_.a);
    v.diagnostics["perm_b"] = std::to_string(perm_.b);
    v.diagnostics["stages"] = "3";
    v.diagnostics["inner_finish"] = std::string(to_string(shape_.finish));
    v.diagnostics["empty_lists"] = std::to_string(empty_lists_);
    if (result_) v.diagnostics["rs_corrections"] = std::to_string(rs_corrections_);
    if (!result_) v.diagnostics["failure"] = "outer Reed-Solomon decoding failed";
    return v;
  }

 private:
  Step permutation_stage(const Word& message) {
    bits_permutation_ = message.size();
    BitReader in(message);
    const std::uint64_t a = in.get(shape_.index_width);
    const std::uint64_t b = in.get(shape_.index_width);
    perm_ = AffinePermutation(shape_.p, a, b);
    const BlockView view(perm_.apply(y_.resized(static_cast<std::size_t>(shape_.p))), shape_.k);
    for (std::size_t i = 0; i < view.block_count(); ++i) own_.push_back(view.block(i));
    return {};
  }

  Step inner_stage(const Word& message) {
    const std::size_t redundancy = shape_.k - shape_.inner_dim;
    BitReader in(message);
    std::vector<Word> rows;
    for (std::size_t r = 0; r < redundancy; ++r) rows.push_back(in.get_word(shape_.k));
    bits_matrix_ = redundancy * shape_.k;
    const auto code = gf2::LinearCode::from_parity_check(gf2::BitMatrix::from_rows(std::move(rows)));
    bits_syndromes_ = in.remaining();

    candidates_.resize(shape_.m);
    estimate_.resize(shape_.m);
    for (std::size_t i = 0; i < shape_.m; ++i) {
      const Word h = in.get_word(redundancy);
      candidates_[i] = syncdet::listdec_candidates(code, shape_.inner_radius, h, own_[i]);
      if (candidates_[i].empty()) ++empty_lists_;
      estimate_[i] = nearest(candidates_[i], own_[i]);
    }
    if (shape_.finish == InnerFinish::Nearest) return {};

    BitWriter out;
    hashes_.resize(shape_.m);
    for (std::size_t i = 0; i < shape_.m; ++i) {
      hashes_[i] = hashing::nba_challenge(candidates_[i]);
      out.put(hashes_[i].q, shape_.nba_width);
    }
    bits_nba_ += out.size();
    return Step{{out.finish()}, false};
  }

  Step nba_stage(const Word& message) {
    bits_nba_ += message.size();
    BitReader in(message);
    for (std::size_t i = 0; i < shape_.m; ++i) {
      const auto match = hashing::nba_resolve(candidates_[i], hashes_[i], in.get(shape_.nba_width));
      if (match) estimate_[i] = *match;
    }
    return {};
  }

  Step outer_stage(const Word& message) {
    bits_rs_ = message.size();
    BitReader in(message);
    std::vector<rs::FieldElem> extra;
    for (std::size_t i = 0; i < shape_.s; ++i) extra.push_back(rs::FieldElem{static_cast<std::uint32_t>(in.get(shape_.k))});
    const rs::GaloisField field(static_cast<unsigned>(shape_.k));
    const auto received = to_field(estimate_);
    const auto corrected = rs::rs_correct(field, received, extra);
    if (corrected) {
      std::vector<Word> blocks;
      for (std::size_t i = 0; i < shape_.m; ++i) {
        if ((*corrected)[i] != received[i]) ++rs_corrections_;
        blocks.push_back(Word::from_uint((*corrected)[i].value, shape_.k));
      }
      const Word permuted = BlockView::join(blocks, static_cast<std::size_t>(shape_.p));
      result_ = perm_.invert(permuted).resized(shape_.n);
    }
    return Step{{}, true};
  }

  /// Closest candidate to `own`, first in order on ties; `own` itself if the
  /// list is empty.
  static Word nearest(const std::vector<Word>& candidates, const Word& own) {
    const Word* best = nullptr;
    std::size_t best_distance = 0;
    for (const auto& c : candidates) {
      const std::size_t d = hamming_distance(c, own);
      if (best == nullptr || d < best_distance) {
        best = &c;
        best_distance = d;
      }
    }
    return best != nullptr ? *best : own;
  }

  CompositeShape shape_;
  Word y_;
  std::size_t received_ = 0;
  AffinePermutation perm_;
  std::vector<Word> own_;
  std::vector<std::vector<Word>> candidates_;
  std::vector<Word> estimate_;
  std::vector<hashing::ModHash> hashes_;
  std::optional<Word> result_;
  std::size_t bits_permutation_ = 0, bits_matrix_ = 0, bits_syndromes_ = 0, bits_nba_ = 0, bits_rs_ = 0;
  std::size_t empty_lists_ = 0, rs_corrections_ = 0;
};

}  // namespace

PartyPair make_composite_parties(const Bounds& bounds, const ProbParams& params, Word x, Word y,
                                 std::uint64_t alice_seed) {
  require(x.size() == bounds.n && y.size() == bounds.n, "word length differs from n");
  const auto shape = composite_shape(bounds, params);
  return PartyPair{std::make_unique<CompositeAlice>(shape, std::move(x), alice_seed),
                   std::make_unique<CompositeBob>(shape, std::move(y))};
}

ProtocolOutcome composite_prob_sync(const syncdet::SyncInstance& instance, const ProbParams& params, Rng& rng,
                                    DuplexChannel* channel) {
  auto outcome = run(make_composite_parties(instance.bounds, params, instance.x, instance.y, rng()), channel);
  // Ground truth is available here, so record how many blocks were dangerous.
  const auto& d = outcome.diagnostics;
  if (d.contains("perm_a") && d.contains("perm_b")) {
    const std::uint64_t p = padded_length(instance.bounds.n);
    const AffinePermutation perm(p, std::stoull(d.at("perm_a")), std::stoull(d.at("perm_b")));
    const auto threshold = instance.bounds.alpha + params.delta;
    outcome.diagnostics["dangerous_blocks"] =
        std::to_string(dangerous_blocks(instance.x.resized(static_cast<std::size_t>(p)),
                                        instance.y.resized(static_cast<std::size_t>(p)), perm, params.k, threshold));
  }
  return outcome;
}

}  // namespace hamsync::prob
