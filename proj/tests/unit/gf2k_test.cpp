#include <gtest/gtest.h>

#include <set>

#include "hamsync/errors.hpp"
#include "hamsync/gf2k.hpp"
#include "oracles.hpp"

using namespace hamsync;
using namespace hamsync::rs;

TEST(GaloisField, TablesMatchCarrylessMultiply) {
  for (unsigned k = 2; k <= 10; ++k) {
    const GaloisField f(k);
    const std::uint32_t q = f.size();
    for (std::uint32_t a = 0; a < std::min<std::uint32_t>(q, 64); ++a) {
      for (std::uint32_t b = 0; b < q; ++b) {
        EXPECT_EQ(f.mul({a}, {b}).value, oracle::gf_mul(a, b, k, f.polynomial()));
      }
    }
  }
}

TEST(GaloisField, InversesAndPowers) {
  for (unsigned k : {2u, 4u, 8u, 11u, 16u}) {
    const GaloisField f(k);
    for (std::uint32_t a = 1; a < std::min<std::uint32_t>(f.size(), 5000); ++a) {
      EXPECT_EQ(f.mul({a}, f.inv({a})).value, 1u);
      EXPECT_EQ(f.div({a}, {a}).value, 1u);
    }
    // x generates the multiplicative group.
    std::set<std::uint32_t> seen;
    for (std::uint32_t e = 0; e < f.size() - 1; ++e) seen.insert(f.pow({2}, e).value);
    EXPECT_EQ(seen.size(), f.size() - 1);
  }
  EXPECT_THROW(GaloisField(1), ContractViolation);
  EXPECT_THROW(GaloisField(17), ContractViolation);
  EXPECT_THROW(GaloisField(4).inv({0}), ContractViolation);
}

TEST(Poly, DivmodIdentity) {
  const GaloisField f(8);
  Rng rng(3);
  std::uniform_int_distribution<std::uint32_t> pick(0, 255);
  for (int t = 0; t < 200; ++t) {
    std::vector<FieldElem> a(1 + t % 12), b(1 + t % 5);
    for (auto& c : a) c = {pick(rng)};
    for (auto& c : b) c = {pick(rng)};
    b.back() = {1 + pick(rng) % 255};
    const Poly pa(a), pb(b);
    auto [q, r] = divmod(f, pa, pb);
    EXPECT_LT(r.degree(), pb.degree());
    EXPECT_EQ(add(multiply(f, q, pb), r), pa);
  }
  EXPECT_THROW(divmod(f, Poly({FieldElem{1}}), Poly{}), ContractViolation);
}

TEST(Interpolate, ReproducesPolynomial) {
  const GaloisField f(8);
  Rng rng(5);
  std::uniform_int_distribution<std::uint32_t> pick(0, 255);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 1 + t % 20;
    std::vector<std::uint32_t> coeffs(m);
    for (auto& c : coeffs) c = pick(rng);
    std::vector<std::pair<FieldElem, FieldElem>> points;
    for (std::uint32_t i = 0; i < m; ++i) {
      points.emplace_back(FieldElem{i * 7 % 256}, FieldElem{oracle::gf_eval(coeffs, i * 7 % 256, 8, f.polynomial())});
    }
    const Poly p = interpolate(f, points);
    EXPECT_LE(p.degree(), static_cast<int>(m) - 1);
    for (std::uint32_t i = 0; i < m; ++i) EXPECT_EQ(p.coefficient(i).value, coeffs[i]);
  }
  const std::vector<std::pair<FieldElem, FieldElem>> dup{{FieldElem{1}, FieldElem{2}}, {FieldElem{1}, FieldElem{3}}};
  EXPECT_THROW(interpolate(f, dup), ContractViolation);
}

TEST(ReedSolomon, ExtraEvalsExtendTheInterpolant) {
  const GaloisField f(4);
  const std::vector<FieldElem> blocks{{3}, {9}, {0}, {14}};
  const auto extra = rs_extra_evals(f, blocks, 4);
  ASSERT_EQ(extra.size(), 4u);
  // Oracle: solve for coefficients via interpolation at 0..3, then evaluate at 4..7.
  std::vector<std::pair<FieldElem, FieldElem>> pts;
  for (std::uint32_t i = 0; i < 4; ++i) pts.emplace_back(FieldElem{i}, blocks[i]);
  const Poly p = interpolate(f, pts);
  std::vector<std::uint32_t> coeffs;
  for (std::size_t i = 0; i < 4; ++i) coeffs.push_back(p.coefficient(i).value);
  for (std::uint32_t i = 0; i < 4; ++i) EXPECT_EQ(extra[i].value, oracle::gf_eval(coeffs, 4 + i, 4, f.polynomial()));
  EXPECT_THROW(rs_extra_evals(f, blocks, 13), ContractViolation);
}

TEST(ReedSolomon, ExhaustiveSingleErrorGf16) {
  const GaloisField f(4);
  Rng rng(7);
  for (int t = 0; t < 30; ++t) {
    std::vector<FieldElem> blocks(4);
    for (auto& b : blocks) b = {static_cast<std::uint32_t>(rng() % 16)};
    const auto extra = rs_extra_evals(f, blocks, 4);
    EXPECT_EQ(rs_correct(f, blocks, extra), blocks);
    for (std::size_t pos = 0; pos < 8; ++pos) {
      for (std::uint32_t v = 0; v < 16; ++v) {
        auto received = blocks;
        auto ext = extra;
        if (pos < 4) {
          received[pos] = {v};
        } else {
          ext[pos - 4] = {v};
        }
        EXPECT_EQ(rs_correct(f, received, ext), blocks);
      }
    }
  }
}

TEST(ReedSolomon, NearestPolynomialOracleAgreesOnSmallField) {
  // GF(8), m=2, s=4: brute force over all 64 polynomials of degree < 2.
  const GaloisField f(3);
  Rng rng(9);
  for (int t = 0; t < 500; ++t) {
    std::vector<FieldElem> received(2), extra(4);
    for (auto& v : received) v = {static_cast<std::uint32_t>(rng() % 8)};
    for (auto& v : extra) v = {static_cast<std::uint32_t>(rng() % 8)};
    std::optional<std::vector<FieldElem>> expected;
    for (std::uint32_t c0 = 0; c0 < 8; ++c0) {
      for (std::uint32_t c1 = 0; c1 < 8; ++c1) {
        std::size_t bad = 0;
        for (std::uint32_t i = 0; i < 6; ++i) {
          const auto value = oracle::gf_eval({c0, c1}, i, 3, f.polynomial());
          const auto got = i < 2 ? received[i].value : extra[i - 2].value;
          bad += value != got;
        }
        if (bad <= 1) {  // (s - 1) / 2
          expected = std::vector<FieldElem>{{oracle::gf_eval({c0, c1}, 0, 3, f.polynomial())},
                                            {oracle::gf_eval({c0, c1}, 1, 3, f.polynomial())}};
        }
      }
    }
    EXPECT_EQ(rs_correct(f, received, extra), expected);
  }
}

TEST(ReedSolomon, RandomErrorsGf256) {
  const GaloisField f(8);
  Rng rng(10);
  for (int t = 0; t < 200; ++t) {
    std::vector<FieldElem> blocks(32);
    for (auto& b : blocks) b = {static_cast<std::uint32_t>(rng() % 256)};
    const auto extra = rs_extra_evals(f, blocks, 16);
    auto received = blocks;
    const std::size_t errors = rng() % 8;
    for (std::size_t e = 0; e < errors; ++e) received[rng() % 32] = {static_cast<std::uint32_t>(rng() % 256)};
    EXPECT_EQ(rs_correct(f, received, extra), blocks);
  }
}

TEST(ReedSolomon, TooManyErrorsNeverReturnsAWrongFarWord) {
  const GaloisField f(8);
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    std::vector<FieldElem> blocks(32);
    for (auto& b : blocks) b = {static_cast<std::uint32_t>(rng() % 256)};
    const auto extra = rs_extra_evals(f, blocks, 16);
    auto received = blocks;
    for (std::size_t i = 0; i < 12; ++i) received[i] = {(received[i].value + 1) % 256};
    const auto out = rs_correct(f, received, extra);
    if (out) {
      // Any answer must be within the unique-decoding budget of the input.
      const auto out_extra = rs_extra_evals(f, *out, 16);
      std::size_t bad = 0;
      for (std::size_t i = 0; i < 32; ++i) bad += (*out)[i] != received[i];
      for (std::size_t i = 0; i < 16; ++i) bad += out_extra[i] != extra[i];
      EXPECT_LE(bad, 7u);
    }
  }
}
