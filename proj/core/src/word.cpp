#include "hamsync/word.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <numeric>
#include <ostream>

#include "hamsync/errors.hpp"

namespace hamsync {

namespace {

std::size_t limb_count(std::size_t n) { return (n + 63) / 64; }

std::uint64_t tail_mask(std::size_t n) {
  const std::size_t rem = n % 64;
  return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

}  // namespace

Word::Word(std::size_t n) : n_(n), limbs_(limb_count(n), 0) {
  if (n > kMaxBits) throw ContractViolation("word length " + std::to_string(n) + " exceeds 2^20");
}

Word Word::from_uint(std::uint64_t value, std::size_t n) {
  Word w(n);
  if (n == 0) return w;
  if (n < 64) {
    require((value >> n) == 0, "value does not fit in word length");
  }
  w.limbs_[0] = value;
  return w;
}

Word Word::from_string(std::string_view bits) {
  Word w(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      w.set(i, true);
    } else if (bits[i] != '0') {
      throw ContractViolation("bit string may only contain '0' and '1'");
    }
  }
  return w;
}

bool Word::bit(std::size_t i) const {
  require(i < n_, "bit index out of range");
  return (limbs_[i / 64] >> (i % 64)) & 1U;
}

void Word::set(std::size_t i, bool value) {
  require(i < n_, "bit index out of range");
  const std::uint64_t mask = std::uint64_t{1} << (i % 64);
  if (value) {
    limbs_[i / 64] |= mask;
  } else {
    limbs_[i / 64] &= ~mask;
  }
}

void Word::flip(std::size_t i) {
  require(i < n_, "bit index out of range");
  limbs_[i / 64] ^= std::uint64_t{1} << (i % 64);
}

std::size_t Word::weight() const noexcept {
  std::size_t total = 0;
  for (auto limb : limbs_) total += static_cast<std::size_t>(std::popcount(limb));
  return total;
}

std::uint64_t Word::to_uint() const {
  require(n_ <= 64, "to_uint requires at most 64 bits");
  return limbs_.empty() ? 0 : limbs_[0];
}

std::string Word::to_string() const {
  std::string out(n_, '0');
  for (std::size_t i = 0; i < n_; ++i) {
    if (bit(i)) out[i] = '1';
  }
  return out;
}

std::uint64_t Word::mod(std::uint64_t q) const {
  require(q >= 1, "modulus must be positive");
  using u128 = unsigned __int128;
  u128 rem = 0;
  for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it) {
    rem = ((rem << 64) | *it) % q;
  }
  return static_cast<std::uint64_t>(rem);
}

Word Word::slice(std::size_t pos, std::size_t len) const {
  require(pos <= n_ && len <= n_ - pos, "slice out of range");
  Word out(len);
  for (std::size_t i = 0; i < len; ++i) {
    if (bit(pos + i)) out.limbs_[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return out;
}

void Word::assign(std::size_t pos, const Word& bits) {
  require(pos <= n_ && bits.size() <= n_ - pos, "assign out of range");
  for (std::size_t i = 0; i < bits.size(); ++i) set(pos + i, bits.bit(i));
}

Word Word::resized(std::size_t n) const {
  Word out(n);
  const std::size_t keep = std::min(limb_count(n), limbs_.size());
  std::copy_n(limbs_.begin(), keep, out.limbs_.begin());
  if (n > 0) out.limbs_.back() &= tail_mask(n);
  return out;
}

Word& Word::operator^=(const Word& other) {
  require(n_ == other.n_, "xor of words with different lengths");
  for (std::size_t i = 0; i < limbs_.size(); ++i) limbs_[i] ^= other.limbs_[i];
  return *this;
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (a.n_ != b.n_) return a.n_ <=> b.n_;
  for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
    const std::uint64_t diff = a.limbs_[i] ^ b.limbs_[i];
    if (diff == 0) continue;
    const std::uint64_t lowest = diff & (~diff + 1);
    return (a.limbs_[i] & lowest) ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return std::strong_ordering::equal;
}

std::size_t hamming_distance(const Word& a, const Word& b) {
  require(a.size() == b.size(), "hamming_distance: length mismatch");
  std::size_t total = 0;
  auto la = a.limbs();
  auto lb = b.limbs();
  for (std::size_t i = 0; i < la.size(); ++i) {
    total += static_cast<std::size_t>(std::popcount(la[i] ^ lb[i]));
  }
  return total;
}

Word random_word_within(const Word& y, std::size_t r, Rng& rng) {
  require(r <= y.size(), "radius exceeds word length");
  std::uniform_int_distribution<std::size_t> pick_d(0, r);
  const std::size_t d = pick_d(rng);
  // Partial Fisher-Yates: the first d entries form a uniform d-subset.
  std::vector<std::size_t> positions(y.size());
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  Word x = y;
  for (std::size_t i = 0; i < d; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, positions.size() - 1);
    std::swap(positions[i], positions[pick(rng)]);
    x.flip(positions[i]);
  }
  return x;
}

Word random_word(std::size_t n, Rng& rng) {
  Word w(n);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < n; ++i) {
    if (coin(rng)) w.set(i, true);
  }
  return w;
}

std::size_t ceil_log2(std::uint64_t value) {
  if (value <= 1) return 0;
  return static_cast<std::size_t>(std::bit_width(value - 1));
}

void BitWriter::put(std::uint64_t value, std::size_t width) {
  require(width <= 64, "field width above 64 bits");
  require(width == 64 || (value >> width) == 0, "value does not fit in field width");
  for (std::size_t i = 0; i < width; ++i) {
    if (n_ % 64 == 0) limbs_.push_back(0);
    if ((value >> i) & 1U) limbs_.back() |= std::uint64_t{1} << (n_ % 64);
    ++n_;
  }
}

void BitWriter::put(const Word& bits) {
  for (std::size_t i = 0; i < bits.size(); ++i) put(bits.bit(i) ? 1 : 0, 1);
}

Word BitWriter::finish() const {
  Word w(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if ((limbs_[i / 64] >> (i % 64)) & 1U) w.set(i, true);
  }
  return w;
}

std::uint64_t BitReader::get(std::size_t width) {
  require(width <= 64, "field width above 64 bits");
  require(width <= remaining(), "read past end of message");
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < width; ++i) {
    if (bits_.bit(pos_ + i)) value |= std::uint64_t{1} << i;
  }
  pos_ += width;
  return value;
}

Word BitReader::get_word(std::size_t width) {
  require(width <= remaining(), "read past end of message");
  Word w = bits_.slice(pos_, width);
  pos_ += width;
  return w;
}

std::vector<std::uint8_t> pack_bits(const Word& word) {
  std::vector<std::uint8_t> bytes((word.size() + 7) / 8, 0);
  auto limbs = word.limbs();
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    bytes[i] = static_cast<std::uint8_t>(limbs[i / 8] >> (8 * (i % 8)));
  }
  return bytes;
}

Word unpack_bits(std::span<const std::uint8_t> bytes, std::size_t n) {
  require(bytes.size() == (n + 7) / 8, "payload byte count does not match bit length");
  Word w(n);
  for (std::size_t i = 0; i < n; ++i) {
    if ((bytes[i / 8] >> (i % 8)) & 1U) w.set(i, true);
  }
  return w;
}

std::vector<std::uint8_t> serialize(const Word& word) {
  std::vector<std::uint8_t> out(8);
  const std::uint64_t n = word.size();
  for (std::size_t i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(n >> (8 * i));
  auto payload = pack_bits(word);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Word deserialize(std::span<const std::uint8_t> bytes) {
  require(bytes.size() >= 8, "serialized word shorter than its header");
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < 8; ++i) n |= std::uint64_t{bytes[i]} << (8 * i);
  require(n <= Word::kMaxBits, "serialized word length exceeds 2^20");
  return unpack_bits(bytes.subspan(8), static_cast<std::size_t>(n));
}

void write_word(std::ostream& out, const Word& word) {
  auto bytes = serialize(word);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed to write word");
}

Word read_word(std::istream& in) {
  std::uint8_t header[8];
  if (!in.read(reinterpret_cast<char*>(header), 8)) {
    throw ContractViolation("truncated word header");
  }
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < 8; ++i) n |= std::uint64_t{header[i]} << (8 * i);
  require(n <= Word::kMaxBits, "serialized word length exceeds 2^20");
  std::vector<std::uint8_t> payload((n + 7) / 8);
  if (!in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()))) {
    throw ContractViolation("truncated word payload");
  }
  return unpack_bits(payload, static_cast<std::size_t>(n));
}

}  // namespace hamsync
