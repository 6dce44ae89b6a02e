#include "hamsync/gf2codes.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>

#include "hamsync/errors.hpp"

namespace hamsync::gf2 {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, Word(cols)) {}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitMatrix BitMatrix::from_rows(std::vector<Word> rows) {
  BitMatrix m;
  m.cols_ = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows) require(r.size() == m.cols_, "matrix rows differ in length");
  m.rows_ = std::move(rows);
  return m;
}

BitMatrix BitMatrix::random(std::size_t rows, std::size_t cols, Rng& rng) {
  BitMatrix m;
  m.cols_ = cols;
  m.rows_.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) m.rows_.push_back(random_word(cols, rng));
  return m;
}

bool BitMatrix::get(std::size_t r, std::size_t c) const {
  require(r < rows(), "matrix row out of range");
  return rows_[r].bit(c);
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
  require(r < rows(), "matrix row out of range");
  rows_[r].set(c, value);
}

const Word& BitMatrix::row(std::size_t r) const {
  require(r < rows(), "matrix row out of range");
  return rows_[r];
}

Word BitMatrix::column(std::size_t c) const {
  require(c < cols_, "matrix column out of range");
  Word col(rows());
  for (std::size_t r = 0; r < rows(); ++r) {
    if (rows_[r].bit(c)) col.set(r, true);
  }
  return col;
}

Word BitMatrix::multiply(const Word& x) const {
  require(x.size() == cols_, "matrix-vector dimension mismatch");
  Word out(rows());
  auto xl = x.limbs();
  for (std::size_t r = 0; r < rows(); ++r) {
    auto rl = rows_[r].limbs();
    unsigned parity = 0;
    for (std::size_t i = 0; i < rl.size(); ++i) parity ^= static_cast<unsigned>(std::popcount(rl[i] & xl[i]));
    if (parity & 1U) out.set(r, true);
  }
  return out;
}

BitMatrix BitMatrix::multiply(const BitMatrix& other) const {
  require(cols_ == other.rows(), "matrix-matrix dimension mismatch");
  BitMatrix t = other.transpose();
  BitMatrix out(rows(), other.cols());
  for (std::size_t c = 0; c < other.cols(); ++c) {
    Word col = multiply(t.row(c));
    for (std::size_t r = 0; r < rows(); ++r) {
      if (col.bit(r)) out.set(r, c, true);
    }
  }
  return out;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows());
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (rows_[r].bit(c)) t.set(c, r, true);
    }
  }
  return t;
}

namespace {

/// Reduced row echelon form in place. Pivot columns are searched in the
/// given order; returns one pivot column per nonzero row, the zero rows are
/// moved to the bottom.
std::vector<std::size_t> reduce(std::vector<Word>& rows, std::vector<bool>* rhs,
                                const std::vector<std::size_t>& column_order) {
  std::vector<std::size_t> pivots;
  std::size_t next = 0;
  for (std::size_t c : column_order) {
    if (next == rows.size()) break;
    std::size_t found = next;
    while (found < rows.size() && !rows[found].bit(c)) ++found;
    if (found == rows.size()) continue;
    std::swap(rows[next], rows[found]);
    if (rhs) std::swap((*rhs)[next], (*rhs)[found]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != next && rows[r].bit(c)) {
        rows[r] ^= rows[next];
        if (rhs) (*rhs)[r] = (*rhs)[r] != (*rhs)[next];
      }
    }
    pivots.push_back(c);
    ++next;
  }
  return pivots;
}

std::vector<std::size_t> ascending(std::size_t n) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  return order;
}

std::vector<std::size_t> descending(std::size_t n) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = n - 1 - i;
  return order;
}

std::uint64_t syndrome_key(const Word& s) {
  if (s.size() > 64) throw CapabilityError("syndrome tables need at most 64 check bits");
  return s.to_uint();
}

}  // namespace

std::size_t BitMatrix::rank() const {
  std::vector<Word> work = rows_;
  return reduce(work, nullptr, ascending(cols_)).size();
}

std::optional<Word> solve_affine(const BitMatrix& h, const Word& b) {
  require(b.size() == h.rows(), "solve_affine: right-hand side length differs from row count");
  std::vector<Word> rows;
  rows.reserve(h.rows());
  std::vector<bool> rhs(h.rows());
  for (std::size_t r = 0; r < h.rows(); ++r) {
    rows.push_back(h.row(r));
    rhs[r] = b.bit(r);
  }
  const auto pivots = reduce(rows, &rhs, ascending(h.cols()));
  for (std::size_t r = pivots.size(); r < rows.size(); ++r) {
    if (rhs[r]) return std::nullopt;
  }
  Word t(h.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (rhs[i]) t.set(pivots[i], true);
  }
  return t;
}

std::vector<std::uint8_t> serialize(const BitMatrix& m) {
  std::vector<std::uint8_t> out(16);
  const std::uint64_t rows = m.rows();
  const std::uint64_t cols = m.cols();
  for (std::size_t i = 0; i < 8; ++i) {
    out[i] = static_cast<std::uint8_t>(rows >> (8 * i));
    out[8 + i] = static_cast<std::uint8_t>(cols >> (8 * i));
  }
  std::vector<std::uint8_t> body((rows * cols + 7) / 8, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (m.get(r, c)) {
        const std::size_t bit = r * cols + c;
        body[bit / 8] |= static_cast<std::uint8_t>(1U << (bit % 8));
      }
    }
  }
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

BitMatrix deserialize_matrix(std::span<const std::uint8_t> bytes) {
  require(bytes.size() >= 16, "serialized matrix shorter than its header");
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    rows |= std::uint64_t{bytes[i]} << (8 * i);
    cols |= std::uint64_t{bytes[8 + i]} << (8 * i);
  }
  require(cols <= Word::kMaxBits && rows <= Word::kMaxBits, "serialized matrix too large");
  require(bytes.size() == 16 + (rows * cols + 7) / 8, "serialized matrix has the wrong payload size");
  BitMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t bit = r * cols + c;
      if ((bytes[16 + bit / 8] >> (bit % 8)) & 1U) m.set(r, c, true);
    }
  }
  return m;
}

void write_matrix(std::ostream& out, const BitMatrix& m) {
  auto bytes = serialize(m);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed to write matrix");
}

BitMatrix read_matrix(std::istream& in) {
  std::vector<std::uint8_t> bytes(16);
  if (!in.read(reinterpret_cast<char*>(bytes.data()), 16)) throw ContractViolation("truncated matrix header");
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    rows |= std::uint64_t{bytes[i]} << (8 * i);
    cols |= std::uint64_t{bytes[8 + i]} << (8 * i);
  }
  require(cols <= Word::kMaxBits && rows <= Word::kMaxBits, "serialized matrix too large");
  bytes.resize(16 + (rows * cols + 7) / 8);
  if (!in.read(reinterpret_cast<char*>(bytes.data() + 16), static_cast<std::streamsize>(bytes.size() - 16))) {
    throw ContractViolation("truncated matrix payload");
  }
  return deserialize_matrix(bytes);
}

LinearCode LinearCode::from_parity_check(BitMatrix h) {
  require(h.rows() >= 1 && h.rows() < h.cols(), "parity-check matrix must have 1 <= rows < cols");
  std::vector<Word> rref;
  for (std::size_t r = 0; r < h.rows(); ++r) rref.push_back(h.row(r));
  // Prefer pivots on the right so the message can sit in the prefix.
  auto pivots = reduce(rref, nullptr, descending(h.cols()));
  require(pivots.size() == h.rows(), "parity-check matrix must have full row rank");

  LinearCode code;
  const std::size_t n = h.cols();
  std::vector<bool> is_check(n, false);
  for (auto p : pivots) is_check[p] = true;
  for (std::size_t c = 0; c < n; ++c) (is_check[c] ? code.check_ : code.info_).push_back(c);

  // Row i of the RREF reads: c[pivot_i] = sum_{info j} R[i][j] c[j].
  std::vector<Word> g_rows;
  for (std::size_t j : code.info_) {
    Word row(n);
    row.set(j, true);
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      if (rref[i].bit(j)) row.set(pivots[i], true);
    }
    g_rows.push_back(std::move(row));
  }
  std::sort(code.check_.begin(), code.check_.end());
  code.g_ = BitMatrix::from_rows(std::move(g_rows));
  code.h_ = std::move(h);
  return code;
}

bool LinearCode::prefix_systematic() const {
  for (std::size_t i = 0; i < info_.size(); ++i) {
    if (info_[i] != i) return false;
  }
  return true;
}

Word LinearCode::encode(const Word& message) const {
  require(message.size() == dimension(), "message length differs from code dimension");
  Word c(length());
  for (std::size_t i = 0; i < message.size(); ++i) {
    if (message.bit(i)) c ^= g_.row(i);
  }
  return c;
}

Word LinearCode::message_of(const Word& codeword) const {
  require(codeword.size() == length(), "word length differs from code length");
  Word m(dimension());
  for (std::size_t i = 0; i < info_.size(); ++i) m.set(i, codeword.bit(info_[i]));
  return m;
}

Word LinearCode::check_bits_of(const Word& codeword) const {
  require(codeword.size() == length(), "word length differs from code length");
  Word p(redundancy());
  for (std::size_t i = 0; i < check_.size(); ++i) p.set(i, codeword.bit(check_[i]));
  return p;
}

Word LinearCode::assemble(const Word& message, const Word& check_bits) const {
  require(message.size() == dimension() && check_bits.size() == redundancy(), "assemble: part lengths mismatch");
  Word w(length());
  for (std::size_t i = 0; i < info_.size(); ++i) w.set(info_[i], message.bit(i));
  for (std::size_t i = 0; i < check_.size(); ++i) w.set(check_[i], check_bits.bit(i));
  return w;
}

LinearCode random_linear_code(std::size_t n, std::size_t k, Rng& rng) {
  require(k >= 1 && k < n, "random_linear_code needs 1 <= k < n");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    BitMatrix h = BitMatrix::random(n - k, n, rng);
    if (h.rank() == n - k) return LinearCode::from_parity_check(std::move(h));
  }
  throw ProbabilisticFailure("no full-rank parity-check matrix in 1000 draws");
}

LinearCode hamming_7_4() {
  BitMatrix h(3, 7);
  for (std::size_t c = 0; c < 7; ++c) {
    for (std::size_t r = 0; r < 3; ++r) {
      if (((c + 1) >> r) & 1U) h.set(r, c, true);
    }
  }
  return LinearCode::from_parity_check(std::move(h));
}

std::vector<Word> enumerate_codewords(const LinearCode& code) {
  const std::size_t n = code.length();
  if (n > kMaxEnumerationLength) {
    throw CapabilityError("codeword enumeration limited to n <= 24; use smaller parameters");
  }
  const std::size_t k = code.dimension();
  std::vector<std::uint64_t> gens;
  for (std::size_t i = 0; i < k; ++i) gens.push_back(code.generator().row(i).to_uint());
  std::vector<Word> out;
  out.reserve(std::size_t{1} << k);
  std::uint64_t current = 0;
  out.push_back(Word::from_uint(0, n));
  // Gray code walk: step i flips generator ctz(i).
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << k); ++i) {
    current ^= gens[static_cast<std::size_t>(std::countr_zero(i))];
    out.push_back(Word::from_uint(current, n));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Word> list_decode_exhaustive(const LinearCode& code, const Word& y, std::size_t radius) {
  const std::size_t n = code.length();
  if (n > kMaxEnumerationLength) {
    throw CapabilityError("exhaustive list decoding limited to n <= 24; use smaller parameters");
  }
  require(y.size() == n, "received word length differs from code length");
  const std::size_t k = code.dimension();
  std::vector<std::uint64_t> gens;
  for (std::size_t i = 0; i < k; ++i) gens.push_back(code.generator().row(i).to_uint());
  const std::uint64_t target = y.to_uint();
  std::vector<Word> out;
  std::uint64_t current = 0;
  auto consider = [&](std::uint64_t c) {
    if (static_cast<std::size_t>(std::popcount(c ^ target)) <= radius) out.push_back(Word::from_uint(c, n));
  };
  consider(0);
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << k); ++i) {
    current ^= gens[static_cast<std::size_t>(std::countr_zero(i))];
    consider(current);
  }
  std::sort(out.begin(), out.end());
  return out;
}

SyndromeDecoder::SyndromeDecoder(const LinearCode& code, std::size_t radius)
    : h_(code.parity_check()), radius_(radius) {
  require(radius <= code.length(), "decoding radius exceeds code length");
  for_each_in_ball(Word(code.length()), radius, [&](const Word& e) {
    auto [it, inserted] = leaders_.emplace(syndrome_key(h_.multiply(e)), e);
    if (!inserted) {
      throw CapabilityError("code cannot uniquely decode radius " + std::to_string(radius));
    }
  });
}

std::optional<Word> SyndromeDecoder::decode(const Word& y) const {
  auto it = leaders_.find(syndrome_key(h_.multiply(y)));
  if (it == leaders_.end()) return std::nullopt;
  return y ^ it->second;
}

std::size_t unique_decoding_radius(const LinearCode& code) {
  std::size_t t = 0;
  while (t < code.length()) {
    try {
      SyndromeDecoder probe(code, t + 1);
    } catch (const CapabilityError&) {
      break;
    }
    ++t;
  }
  return t;
}

std::optional<Word> unique_decode(const LinearCode& code, const Word& y) {
  return SyndromeDecoder(code, unique_decoding_radius(code)).decode(y);
}

}  // namespace hamsync::gf2
