#include "hamsync/gf2k.hpp"

#include <algorithm>

#include "hamsync/errors.hpp"

namespace hamsync::rs {

std::uint32_t field_polynomial(unsigned k) {
  // Primitive trinomials/pentanomials, one per degree.
  static constexpr std::uint32_t kTable[] = {
      0,       0,       0x7,     0xB,     0x13,    0x25,    0x43,    0x89,    0x11D,
      0x211,   0x409,   0x805,   0x1053,  0x201B,  0x4443,  0x8003,  0x1100B,
  };
  require(k >= 2 && k <= 16, "field degree must be in [2, 16]");
  return kTable[k];
}

GaloisField::GaloisField(unsigned k) : k_(k), poly_(field_polynomial(k)) {
  const std::uint32_t order = size() - 1;
  exp_.resize(2 * order);
  log_.assign(size(), 0);
  std::uint32_t x = 1;
  for (std::uint32_t i = 0; i < order; ++i) {
    if (i > 0 && x == 1) throw InvariantError("field polynomial is not primitive");
    exp_[i] = x;
    log_[x] = i;
    x <<= 1;
    if (x & size()) x ^= poly_;
  }
  if (x != 1) throw InvariantError("field polynomial is not primitive");
  for (std::uint32_t i = order; i < 2 * order; ++i) exp_[i] = exp_[i - order];
}

FieldElem GaloisField::element(std::uint32_t value) const {
  require(value < size(), "value outside the field");
  return FieldElem{value};
}

FieldElem GaloisField::mul(FieldElem a, FieldElem b) const {
  if (a.value == 0 || b.value == 0) return {};
  return {exp_[log_[a.value] + log_[b.value]]};
}

FieldElem GaloisField::inv(FieldElem a) const {
  require(a.value != 0, "zero has no inverse");
  const std::uint32_t order = size() - 1;
  return {exp_[(order - log_[a.value]) % order]};
}

FieldElem GaloisField::div(FieldElem a, FieldElem b) const { return mul(a, inv(b)); }

FieldElem GaloisField::pow(FieldElem a, std::uint64_t e) const {
  if (e == 0) return {1};
  if (a.value == 0) return {};
  const std::uint64_t order = size() - 1;
  return {exp_[static_cast<std::size_t>((log_[a.value] * (e % order)) % order)]};
}

Poly::Poly(std::vector<FieldElem> coefficients) : coeffs_(std::move(coefficients)) { normalize(); }

void Poly::normalize() {
  while (!coeffs_.empty() && coeffs_.back().value == 0) coeffs_.pop_back();
}

FieldElem evaluate(const GaloisField& f, const Poly& p, FieldElem x) {
  FieldElem acc{};
  const auto& c = p.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = GaloisField::add(f.mul(acc, x), *it);
  return acc;
}

Poly add(const Poly& a, const Poly& b) {
  std::vector<FieldElem> c(std::max(a.coefficients().size(), b.coefficients().size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = GaloisField::add(a.coefficient(i), b.coefficient(i));
  return Poly(std::move(c));
}

Poly multiply(const GaloisField& f, const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const auto& x = a.coefficients();
  const auto& y = b.coefficients();
  std::vector<FieldElem> c(x.size() + y.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].value == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) c[i + j] = GaloisField::add(c[i + j], f.mul(x[i], y[j]));
  }
  return Poly(std::move(c));
}

std::pair<Poly, Poly> divmod(const GaloisField& f, const Poly& a, const Poly& b) {
  require(!b.is_zero(), "polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly{}, a};
  std::vector<FieldElem> rem = a.coefficients();
  const auto& d = b.coefficients();
  const std::size_t db = d.size() - 1;
  const FieldElem lead_inv = f.inv(d.back());
  std::vector<FieldElem> quot(rem.size() - db);
  for (std::size_t i = rem.size(); i-- > db;) {
    const FieldElem factor = f.mul(rem[i], lead_inv);
    quot[i - db] = factor;
    if (factor.value == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) rem[i - db + j] = GaloisField::add(rem[i - db + j], f.mul(factor, d[j]));
  }
  rem.resize(db);
  return {Poly(std::move(quot)), Poly(std::move(rem))};
}

Poly interpolate(const GaloisField& f, std::span<const std::pair<FieldElem, FieldElem>> points) {
  const std::size_t m = points.size();
  require(m <= f.size(), "more interpolation points than field elements");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      require(points[i].first != points[j].first, "interpolation points must have distinct x");
    }
  }
  // Newton divided differences.
  std::vector<FieldElem> c(m);
  for (std::size_t i = 0; i < m; ++i) c[i] = points[i].second;
  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t i = m - 1; i >= j; --i) {
      const FieldElem num = GaloisField::sub(c[i], c[i - 1]);
      const FieldElem den = GaloisField::sub(points[i].first, points[i - j].first);
      c[i] = f.div(num, den);
    }
  }
  // Horner on the Newton basis: P = c0 + (x - x0)(c1 + (x - x1)(...)).
  std::vector<FieldElem> p;
  for (std::size_t i = m; i-- > 0;) {
    // p <- p * (x - x_i) + c_i
    std::vector<FieldElem> next(p.size() + 1);
    for (std::size_t j = 0; j < p.size(); ++j) {
      next[j + 1] = GaloisField::add(next[j + 1], p[j]);
      next[j] = GaloisField::add(next[j], f.mul(p[j], points[i].first));
    }
    next[0] = GaloisField::add(next[0], c[i]);
    p = std::move(next);
  }
  return Poly(std::move(p));
}

std::vector<FieldElem> rs_extra_evals(const GaloisField& f, std::span<const FieldElem> blocks, std::size_t s) {
  const std::size_t m = blocks.size();
  require(m + s <= f.size(), "m + s exceeds the field size");
  if (s == 0) return {};
  std::vector<std::pair<FieldElem, FieldElem>> points;
  points.reserve(m);
  for (std::size_t i = 0; i < m; ++i) points.emplace_back(evaluation_point(i), blocks[i]);
  const Poly p = interpolate(f, points);
  std::vector<FieldElem> out;
  out.reserve(s);
  for (std::size_t i = 0; i < s; ++i) out.push_back(evaluate(f, p, evaluation_point(m + i)));
  return out;
}

std::optional<std::vector<FieldElem>> rs_correct(const GaloisField& f, std::span<const FieldElem> received,
                                                 std::span<const FieldElem> extra) {
  const std::size_t m = received.size();
  const std::size_t s = extra.size();
  const std::size_t total = m + s;
  require(total <= f.size(), "m + s exceeds the field size");
  for (auto v : received) require(v.value < f.size(), "received value outside the field");
  for (auto v : extra) require(v.value < f.size(), "extra value outside the field");
  if (m == 0) return std::vector<FieldElem>{};

  std::vector<std::pair<FieldElem, FieldElem>> points;
  points.reserve(total);
  for (std::size_t i = 0; i < m; ++i) points.emplace_back(evaluation_point(i), received[i]);
  for (std::size_t i = 0; i < s; ++i) points.emplace_back(evaluation_point(m + i), extra[i]);

  // Gao's decoder: partial extended Euclid on (prod (x - a_i), interpolant).
  Poly g0({FieldElem{1}});
  for (const auto& pt : points) g0 = multiply(f, g0, Poly({pt.first, FieldElem{1}}));
  Poly g1 = interpolate(f, points);

  Poly r_prev = g0;
  Poly r_cur = g1;
  Poly v_prev;
  Poly v_cur({FieldElem{1}});
  // Stop once deg(r) < (total + m) / 2.
  while (!r_cur.is_zero() && 2 * static_cast<std::size_t>(r_cur.degree()) >= total + m) {
    auto [q, rem] = divmod(f, r_prev, r_cur);
    Poly v_next = add(v_prev, multiply(f, q, v_cur));
    r_prev = std::move(r_cur);
    r_cur = std::move(rem);
    v_prev = std::move(v_cur);
    v_cur = std::move(v_next);
  }
  auto [message, rem] = divmod(f, r_cur, v_cur);
  if (!rem.is_zero() || message.degree() >= static_cast<int>(m)) return std::nullopt;

  // Unique-decoding budget: strictly fewer than s/2 disagreements.
  const std::size_t budget = s == 0 ? 0 : (s - 1) / 2;
  std::size_t disagreements = 0;
  for (const auto& pt : points) {
    if (evaluate(f, message, pt.first) != pt.second) ++disagreements;
  }
  if (disagreements > budget) return std::nullopt;

  std::vector<FieldElem> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(evaluate(f, message, evaluation_point(i)));
  return out;
}

}  // namespace hamsync::rs
