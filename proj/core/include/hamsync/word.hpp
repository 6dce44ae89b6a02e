#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hamsync {

using Rng = std::mt19937_64;

/// Fixed-length bit string. Bit i lives in limb i/64 at position i%64; the
/// unused high bits of the last limb are always zero.
///
/// Read as an integer, bit i carries weight 2^i (LSB-first), which is the
/// interpretation used by the mod-prime hashes.
class Word {
 public:
  static constexpr std::size_t kMaxBits = std::size_t{1} << 20;

  Word() = default;
  explicit Word(std::size_t n);

  static Word from_uint(std::uint64_t value, std::size_t n);
  /// "0110" -> bit 0 = 0, bit 1 = 1, ...
  static Word from_string(std::string_view bits);

  std::size_t size() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  bool bit(std::size_t i) const;
  void set(std::size_t i, bool value);
  void flip(std::size_t i);

  std::size_t weight() const noexcept;
  /// Requires size() <= 64.
  std::uint64_t to_uint() const;
  std::string to_string() const;

  /// Integer value modulo q (q >= 1).
  std::uint64_t mod(std::uint64_t q) const;

  Word slice(std::size_t pos, std::size_t len) const;
  void assign(std::size_t pos, const Word& bits);
  /// Zero-extend (or truncate) to n bits.
  Word resized(std::size_t n) const;

  std::span<const std::uint64_t> limbs() const noexcept { return limbs_; }

  Word& operator^=(const Word& other);
  friend Word operator^(Word a, const Word& b) { return a ^= b; }
  friend bool operator==(const Word& a, const Word& b) = default;
  /// Lexicographic over bit positions 0..n-1 with 0 < 1; shorter words first.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> limbs_;
};

std::size_t hamming_distance(const Word& a, const Word& b);

/// Word at distance exactly d from y, with d uniform on {0..r} and the d
/// flipped positions a uniform d-subset.
Word random_word_within(const Word& y, std::size_t r, Rng& rng);

/// Visit every word within distance r of `center`, by increasing distance and
/// lexicographic flip positions within each distance.
template <typename Visit>
void for_each_in_ball(const Word& center, std::size_t r, Visit&& visit) {
  const std::size_t n = center.size();
  if (r > n) r = n;
  std::vector<std::size_t> idx;
  for (std::size_t d = 0; d <= r; ++d) {
    idx.resize(d);
    for (std::size_t i = 0; i < d; ++i) idx[i] = i;
    for (;;) {
      Word w = center;
      for (auto i : idx) w.flip(i);
      visit(static_cast<const Word&>(w));
      // next d-combination of {0..n-1}
      std::size_t i = d;
      while (i > 0 && idx[i - 1] == n - d + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < d; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
}

/// Uniformly random word of length n.
Word random_word(std::size_t n, Rng& rng);

/// Ceiling of log2(value), with bit_width_for(0) == bit_width_for(1) == 0.
std::size_t ceil_log2(std::uint64_t value);

/// Number of bits needed to write any integer in [0, max_value].
inline std::size_t width_for(std::uint64_t max_value) { return ceil_log2(max_value + 1); }

/// Appends fixed-width fields to a growing bit string.
class BitWriter {
 public:
  void put(std::uint64_t value, std::size_t width);
  void put(const Word& bits);
  std::size_t size() const noexcept { return n_; }
  Word finish() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> limbs_;
};

/// Reads fixed-width fields back; throws ContractViolation on overrun.
class BitReader {
 public:
  explicit BitReader(const Word& bits) : bits_(bits) {}
  std::uint64_t get(std::size_t width);
  Word get_word(std::size_t width);
  std::size_t remaining() const noexcept { return bits_.size() - pos_; }

 private:
  const Word& bits_;
  std::size_t pos_ = 0;
};

// Wire format: 8-byte little-endian bit length, then ceil(n/8) payload bytes,
// LSB-first within each byte.
std::vector<std::uint8_t> serialize(const Word& word);
Word deserialize(std::span<const std::uint8_t> bytes);
void write_word(std::ostream& out, const Word& word);
Word read_word(std::istream& in);

/// Pack/unpack just the payload bytes (no header).
std::vector<std::uint8_t> pack_bits(const Word& word);
Word unpack_bits(std::span<const std::uint8_t> bytes, std::size_t n);

}  // namespace hamsync
