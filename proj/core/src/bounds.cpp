#include "hamsync/bounds.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include "hamsync/errors.hpp"

namespace hamsync {

Rational::Rational(std::uint64_t num, std::uint64_t den) {
  require(den != 0, "rational with zero denominator");
  const std::uint64_t g = std::gcd(num, den);
  num_ = g == 0 ? 0 : num / g;
  den_ = g == 0 ? 1 : den / g;
}

Rational Rational::parse(std::string_view text) {
  auto parse_uint = [&](std::string_view part) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) {
      throw ContractViolation("cannot parse rational '" + std::string(text) + "'");
    }
    return value;
  };

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_uint(text.substr(0, slash)), parse_uint(text.substr(slash + 1)));
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(parse_uint(text), 1);

  std::string_view whole = text.substr(0, dot);
  std::string_view frac = text.substr(dot + 1);
  if (frac.size() > 18) throw ContractViolation("too many decimal digits in '" + std::string(text) + "'");
  std::uint64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const std::uint64_t w = whole.empty() ? 0 : parse_uint(whole);
  const std::uint64_t f = frac.empty() ? 0 : parse_uint(frac);
  return Rational(w * den + f, den);
}

std::uint64_t Rational::floor_times(std::uint64_t n) const {
  using u128 = unsigned __int128;
  return static_cast<std::uint64_t>(static_cast<u128>(num_) * n / den_);
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Bounds::Bounds(Rational alpha_, std::size_t n_) : alpha(alpha_), n(n_) {
  require(n >= 1, "n must be positive");
  require(alpha.num() * 2 <= alpha.den(), "alpha must lie in [0, 1/2]");
}

BigInt binomial(std::size_t n, std::size_t k) {
  require(k <= n, "binomial: k > n");
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    result *= (n - k + i);
    result /= i;
  }
  return result;
}

BigInt ball_volume(std::size_t r, std::size_t n) {
  require(r <= n, "ball_volume: radius exceeds n");
  BigInt term = 1;  // C(n, 0)
  BigInt total = 1;
  for (std::size_t i = 1; i <= r; ++i) {
    term *= (n - i + 1);
    term /= i;
    total += term;
  }
  return total;
}

double log2_big(const BigInt& value) {
  require(value > 0, "log2 of non-positive integer");
  const std::size_t msb = boost::multiprecision::msb(value);
  if (msb < 53) return std::log2(value.convert_to<double>());
  // Keep the top 53 bits as a mantissa.
  const std::size_t shift = msb - 52;
  const BigInt top = value >> shift;
  return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

double binary_entropy(double p) {
  require(p >= 0.0 && p <= 1.0, "binary_entropy: p outside [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double log2_ball_volume(std::size_t r, std::size_t n) { return log2_big(ball_volume(r, n)); }

double lower_bound_bits(const Bounds& bounds) { return log2_ball_volume(bounds.radius(), bounds.n); }

Rational operator+(const Rational& a, const Rational& b) {
  const unsigned __int128 num = static_cast<unsigned __int128>(a.num_) * b.den_ + static_cast<unsigned __int128>(b.num_) * a.den_;
  const unsigned __int128 den = static_cast<unsigned __int128>(a.den_) * b.den_;
  unsigned __int128 g = num, t = den;
  while (t != 0) {
    const unsigned __int128 r = g % t;
    g = t;
    t = r;
  }
  const unsigned __int128 limit = ~std::uint64_t{0};
  require(num / g <= limit && den / g <= limit, "rational overflow");
  return Rational(static_cast<std::uint64_t>(num / g), static_cast<std::uint64_t>(den / g));
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<unsigned __int128>(a.num_) * b.den_ < static_cast<unsigned __int128>(b.num_) * a.den_;
}

}  // namespace hamsync
