#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace hamsync {

using BigInt = boost::multiprecision::cpp_int;

/// Non-negative rational, kept in lowest terms.
class Rational {
 public:
  Rational() = default;
  Rational(std::uint64_t num, std::uint64_t den);

  /// Accepts "0.05", "1/7", "0", "1".
  static Rational parse(std::string_view text);

  std::uint64_t num() const noexcept { return num_; }
  std::uint64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  /// floor(value * n), exact.
  std::uint64_t floor_times(std::uint64_t n) const;
  std::string to_string() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend bool operator<(const Rational& a, const Rational& b);

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

/// Promise parameters: alpha in [0, 1/2], n >= 1. The integer radius is
/// floor(alpha * n).
struct Bounds {
  Rational alpha;
  std::size_t n = 1;

  Bounds() = default;
  Bounds(Rational alpha_, std::size_t n_);

  std::size_t radius() const { return static_cast<std::size_t>(alpha.floor_times(n)); }
};

/// C(n,0) + ... + C(n,r), exact.
BigInt ball_volume(std::size_t r, std::size_t n);

BigInt binomial(std::size_t n, std::size_t k);

/// log2 of a positive big integer to double precision.
double log2_big(const BigInt& value);

/// Base-2 entropy with H(0) = H(1) = 0.
double binary_entropy(double p);

/// log2 Vol(floor(alpha n), n): the deterministic worst-case lower bound.
double lower_bound_bits(const Bounds& bounds);

/// log2 Vol(r, n) for an explicit radius.
double log2_ball_volume(std::size_t r, std::size_t n);

}  // namespace hamsync
