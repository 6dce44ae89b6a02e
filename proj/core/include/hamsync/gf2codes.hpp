#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "hamsync/word.hpp"

namespace hamsync::gf2 {

/// Dense matrix over GF(2), stored as row Words.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  static BitMatrix identity(std::size_t n);
  static BitMatrix from_rows(std::vector<Word> rows);
  static BitMatrix random(std::size_t rows, std::size_t cols, Rng& rng);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }

  bool get(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, bool value);
  const Word& row(std::size_t r) const;
  Word column(std::size_t c) const;

  /// M x over GF(2).
  Word multiply(const Word& x) const;
  BitMatrix multiply(const BitMatrix& other) const;
  BitMatrix transpose() const;
  std::size_t rank() const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<Word> rows_;
};

/// Some t with H t = b (free variables zero), or nullopt if b is outside the
/// column space of H.
std::optional<Word> solve_affine(const BitMatrix& h, const Word& b);

// Serialized as: 8-byte LE rows, 8-byte LE cols, then rows*cols bits
// row-major, packed LSB-first like Word payloads.
std::vector<std::uint8_t> serialize(const BitMatrix& m);
BitMatrix deserialize_matrix(std::span<const std::uint8_t> bytes);
void write_matrix(std::ostream& out, const BitMatrix& m);
BitMatrix read_matrix(std::istream& in);

/// Binary linear [n, k] code given by a full-rank (n-k) x n parity-check
/// matrix. The generator is derived with an information set: message bits
/// occupy `info_positions()`, parity bits `check_positions()`. When the last
/// n-k columns of H are independent the information set is 0..k-1 and the
/// code is systematic in the usual prefix sense.
class LinearCode {
 public:
  LinearCode() = default;
  static LinearCode from_parity_check(BitMatrix h);

  std::size_t length() const noexcept { return h_.cols(); }
  std::size_t dimension() const noexcept { return length() - h_.rows(); }
  std::size_t redundancy() const noexcept { return h_.rows(); }
  double rate() const { return static_cast<double>(dimension()) / static_cast<double>(length()); }

  const BitMatrix& parity_check() const noexcept { return h_; }
  /// k x n.
  const BitMatrix& generator() const noexcept { return g_; }
  std::span<const std::size_t> info_positions() const noexcept { return info_; }
  std::span<const std::size_t> check_positions() const noexcept { return check_; }
  bool prefix_systematic() const;

  Word encode(const Word& message) const;
  Word message_of(const Word& codeword) const;
  Word check_bits_of(const Word& codeword) const;
  /// Rebuild a full-length word from message bits and check bits.
  Word assemble(const Word& message, const Word& check_bits) const;

  Word syndrome(const Word& x) const { return h_.multiply(x); }

 private:
  BitMatrix h_;
  BitMatrix g_;
  std::vector<std::size_t> info_;
  std::vector<std::size_t> check_;
};

inline Word syndrome(const LinearCode& code, const Word& x) { return code.syndrome(x); }

/// H uniform over full-row-rank (n-k) x n matrices (rejection sampling, at
/// most 1000 draws).
LinearCode random_linear_code(std::size_t n, std::size_t k, Rng& rng);

/// H columns are the binary expansions of 1..7 (row i holds bit i).
LinearCode hamming_7_4();

inline constexpr std::size_t kMaxEnumerationLength = 24;

/// All 2^k codewords, ascending lexicographic order. Requires n <= 24.
std::vector<Word> enumerate_codewords(const LinearCode& code);

/// All codewords within `radius` of y, in lexicographic order. Requires
/// n <= 24; throws CapabilityError otherwise.
std::vector<Word> list_decode_exhaustive(const LinearCode& code, const Word& y, std::size_t radius);

/// Syndrome lookup table over all error patterns of weight <= radius.
/// Construction fails with CapabilityError if two such patterns share a
/// syndrome, i.e. the code cannot uniquely decode that radius.
class SyndromeDecoder {
 public:
  SyndromeDecoder(const LinearCode& code, std::size_t radius);

  std::size_t radius() const noexcept { return radius_; }
  /// Codeword within `radius` of y, or nullopt.
  std::optional<Word> decode(const Word& y) const;

 private:
  BitMatrix h_;
  std::size_t radius_;
  std::unordered_map<std::uint64_t, Word> leaders_;
};

/// Largest t for which every weight-<=t error has a distinct syndrome.
std::size_t unique_decoding_radius(const LinearCode& code);

/// Decode to the codeword within unique_decoding_radius(code), or nullopt.
std::optional<Word> unique_decode(const LinearCode& code, const Word& y);

}  // namespace hamsync::gf2
