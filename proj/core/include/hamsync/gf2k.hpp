#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace hamsync::rs {

struct FieldElem {
  std::uint32_t value = 0;

  friend bool operator==(FieldElem, FieldElem) = default;
};

/// Fixed primitive polynomial of degree k (bit i = coefficient of x^i), for
/// 2 <= k <= 16.
std::uint32_t field_polynomial(unsigned k);

/// GF(2^k) with log/antilog tables.
class GaloisField {
 public:
  explicit GaloisField(unsigned k);

  unsigned degree() const noexcept { return k_; }
  std::uint32_t size() const noexcept { return std::uint32_t{1} << k_; }
  std::uint32_t polynomial() const noexcept { return poly_; }

  FieldElem element(std::uint32_t value) const;

  static FieldElem add(FieldElem a, FieldElem b) { return {a.value ^ b.value}; }
  static FieldElem sub(FieldElem a, FieldElem b) { return add(a, b); }
  FieldElem mul(FieldElem a, FieldElem b) const;
  FieldElem inv(FieldElem a) const;
  FieldElem div(FieldElem a, FieldElem b) const;
  FieldElem pow(FieldElem a, std::uint64_t e) const;

 private:
  unsigned k_;
  std::uint32_t poly_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
};

/// Coefficients low to high; no trailing zeros (the zero polynomial is empty).
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<FieldElem> coefficients);

  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::vector<FieldElem>& coefficients() const noexcept { return coeffs_; }
  FieldElem coefficient(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : FieldElem{}; }

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  void normalize();
  std::vector<FieldElem> coeffs_;
};

FieldElem evaluate(const GaloisField& f, const Poly& p, FieldElem x);
Poly add(const Poly& a, const Poly& b);
Poly multiply(const GaloisField& f, const Poly& a, const Poly& b);
/// Quotient and remainder; throws ContractViolation on division by zero.
std::pair<Poly, Poly> divmod(const GaloisField& f, const Poly& a, const Poly& b);

/// Unique polynomial of degree < points.size() through the points.
Poly interpolate(const GaloisField& f, std::span<const std::pair<FieldElem, FieldElem>> points);

/// The i-th public evaluation point (0-based): the element whose
/// representation is i.
inline FieldElem evaluation_point(std::size_t i) { return FieldElem{static_cast<std::uint32_t>(i)}; }

/// P interpolates blocks at points 0..m-1; returns P at points m..m+s-1.
std::vector<FieldElem> rs_extra_evals(const GaloisField& f, std::span<const FieldElem> blocks, std::size_t s);

/// Recover the m blocks from possibly corrupted `received` and the s extra
/// evaluations. Succeeds whenever fewer than s/2 of the m+s values are wrong;
/// returns nullopt when no polynomial of degree < m is that close.
std::optional<std::vector<FieldElem>> rs_correct(const GaloisField& f, std::span<const FieldElem> received,
                                                 std::span<const FieldElem> extra);

}  // namespace hamsync::rs
