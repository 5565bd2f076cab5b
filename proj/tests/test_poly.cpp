#include "invol/poly.hpp"

#include <gtest/gtest.h>

#include "invol/rng.hpp"

using invol::BigRat;
using invol::Field;
using invol::FieldPtr;
using invol::Poly;
using invol::Rng;
using invol::Scalar;

namespace {

constexpr int kIterations = 300;

Poly random_poly(FieldPtr f, int max_deg, Rng& rng) {
  std::vector<Scalar> c;
  int deg = static_cast<int>(rng.below(max_deg + 1));
  for (int i = 0; i <= deg; ++i) {
    if (f->is_finite())
      c.push_back(f->element(rng.below(f->cardinality())));
    else
      c.push_back(f->element(rng.below(32)));
  }
  return Poly(f, std::move(c));
}

}  // namespace

TEST(Poly, ZeroDegreeSentinelOrdersBelowEverything) {
  FieldPtr f = Field::gf(3);
  Poly zero(f);
  EXPECT_TRUE(zero.is_zero());
  EXPECT_EQ(zero.degree(), Poly::kNegInfDegree);
  EXPECT_LT(zero.degree(), -1000000);
  EXPECT_EQ(Poly::from_ints(f, {0, 0, 0}).degree(), Poly::kNegInfDegree);
  EXPECT_EQ(Poly::from_ints(f, {7}).degree(), 0);  // 7 = 1 mod 3
}

TEST(Poly, RingAxiomsOnRandomPolys) {
  for (FieldPtr f : {Field::gf(2), Field::gf(5), Field::gf(2, 2),
                     Field::rationals()}) {
    Rng rng = Rng::derive(11, 1, f->is_finite() ? f->cardinality() : 0);
    for (int i = 0; i < kIterations; ++i) {
      Poly a = random_poly(f, 6, rng);
      Poly b = random_poly(f, 6, rng);
      Poly c = random_poly(f, 6, rng);
      EXPECT_EQ((a + b) * c, a * c + b * c);
      EXPECT_EQ(a * b, b * a);
      EXPECT_EQ((a - a), Poly(f));
      if (!b.is_zero()) {
        auto [q, r] = a.divmod(b);
        EXPECT_EQ(q * b + r, a);
        EXPECT_TRUE(r.is_zero() || r.degree() < b.degree());
      }
    }
  }
}

TEST(Poly, EvalAndCompose) {
  FieldPtr q = Field::rationals();
  Poly p = Poly::from_ints(q, {1, -3, 0, 2});  // 2X^3 - 3X + 1
  EXPECT_EQ(p.eval(q->from_int(2)), q->from_int(11));
  Poly x2 = Poly::from_ints(q, {0, 0, 1});
  Poly composed = p.compose(x2);  // 2X^6 - 3X^2 + 1
  EXPECT_EQ(composed, Poly::from_ints(q, {1, 0, -3, 0, 0, 0, 2}));
}

TEST(Poly, GcdAndSeparability) {
  FieldPtr f = Field::gf(5);
  Poly a = Poly::from_ints(f, {-1, 0, 1});      // (X-1)(X+1)
  Poly b = Poly::from_ints(f, {-1, 1});         // X - 1
  EXPECT_EQ(gcd(a, b), b.monic());
  EXPECT_TRUE(a.is_separable());
  Poly sq = b * b;
  EXPECT_FALSE(sq.is_separable());
  // X^5 - X is separable over GF(5) even though its derivative is -1.
  Poly frob = Poly::from_ints(f, {0, -1, 0, 0, 0, 1});
  EXPECT_TRUE(frob.is_separable());
  // X^5 - 1 = (X-1)^5 over GF(5): derivative is zero.
  Poly insep = Poly::from_ints(f, {-1, 0, 0, 0, 0, 1});
  EXPECT_FALSE(insep.is_separable());
}

TEST(Poly, DiscriminantMatchesClassicalFormulas) {
  // Quadratic: disc(X^2 + bX + c) = b^2 - 4c.
  for (FieldPtr f : {Field::gf(3), Field::gf(5), Field::rationals()}) {
    Rng rng = Rng::derive(13, 2, f->is_finite() ? f->cardinality() : 0);
    for (int i = 0; i < 50; ++i) {
      Scalar b = f->is_finite() ? f->element(rng.below(f->cardinality()))
                                : f->element(rng.below(24));
      Scalar c = f->is_finite() ? f->element(rng.below(f->cardinality()))
                                : f->element(rng.below(24));
      Poly p(f, {c, b, f->one()});
      EXPECT_EQ(p.discriminant(), b * b - f->from_int(4) * c);
    }
  }
  // Depressed cubic: disc(X^3 + pX + q) = -4p^3 - 27q^2.
  FieldPtr q = Field::rationals();
  Rng rng(99);
  for (int i = 0; i < 50; ++i) {
    Scalar p = q->element(rng.below(24));
    Scalar r = q->element(rng.below(24));
    Poly cubic(q, {r, p, q->zero(), q->one()});
    Scalar expect = q->from_int(-4) * p.pow(3) - q->from_int(27) * r * r;
    EXPECT_EQ(cubic.discriminant(), expect);
  }
}

TEST(Poly, DiscriminantFrozenValues) {
  EXPECT_EQ(Poly::from_ints(Field::gf(2), {1, 1, 1}).discriminant(),
            Field::gf(2)->one());
  EXPECT_EQ(Poly::from_ints(Field::gf(2), {1, 1, 0, 0, 1}).discriminant(),
            Field::gf(2)->one());
  EXPECT_EQ(Poly::from_ints(Field::gf(3), {1, 2, 0, 1}).discriminant(),
            Field::gf(3)->one());
  EXPECT_EQ(Poly::from_ints(Field::rationals(), {1, 2, 0, 1}).discriminant(),
            Field::rationals()->from_int(-59));
  // X^6 + X^3 over GF(3) is inseparable: discriminant zero.
  EXPECT_EQ(Poly::from_ints(Field::gf(3), {0, 0, 0, 1, 0, 0, 1})
                .discriminant(),
            Field::gf(3)->zero());
}

TEST(Poly, SqrtMonicRecoversSquares) {
  // Characteristic 2 path uses the inverse Frobenius.
  FieldPtr f2 = Field::gf(2);
  Poly base = Poly::from_ints(f2, {1, 1, 1});
  EXPECT_EQ((base * base).sqrt_monic(), base);
  EXPECT_EQ(Poly::from_ints(f2, {1, 0, 1, 0, 1}).sqrt_monic(), base);
  // Odd coefficients present: not a square.
  EXPECT_THROW(Poly::from_ints(f2, {1, 1, 0, 0, 1}).sqrt_monic(),
               invol::error);
  // Rational path with frozen oracle value.
  FieldPtr q = Field::rationals();
  Poly r(q, {q->from_int(7), q->from_rational(BigRat(3, 2)), q->from_int(-2),
             q->one()});
  Poly square(q, {q->from_int(49), q->from_int(21),
                  q->from_rational(BigRat(-103, 4)), q->from_int(8),
                  q->from_int(7), q->from_int(-4), q->one()});
  EXPECT_EQ(square.sqrt_monic(), r);
  EXPECT_EQ((r * r), square);
  EXPECT_THROW(Poly::from_ints(q, {1, 1, 1}).sqrt_monic(), invol::error);
  EXPECT_THROW(Poly::from_ints(q, {0, 1}).sqrt_monic(), invol::error);
}

TEST(Poly, SqrtMonicRandomRoundTrip) {
  for (FieldPtr f : {Field::gf(2), Field::gf(2, 2), Field::gf(3),
                     Field::gf(5), Field::rationals()}) {
    Rng rng = Rng::derive(17, 3, f->is_finite() ? f->cardinality() : 0);
    for (int i = 0; i < 100; ++i) {
      Poly p = random_poly(f, 4, rng);
      // Force monic.
      std::vector<Scalar> c(p.coeffs());
      c.push_back(f->one());
      Poly monic(f, std::move(c));
      EXPECT_EQ((monic * monic).sqrt_monic(), monic);
    }
  }
}

TEST(Poly, RootsWithMultiplicity) {
  FieldPtr f = Field::gf(5);
  // (X-1)^2 (X-3) X
  Poly p = Poly::from_roots(
      f, {f->from_int(1), f->from_int(1), f->from_int(3), f->zero()});
  auto roots = p.roots();
  ASSERT_EQ(roots.size(), 3u);
  EXPECT_EQ(roots[0].first, f->zero());
  EXPECT_EQ(roots[0].second, 1);
  EXPECT_EQ(roots[1].first, f->from_int(1));
  EXPECT_EQ(roots[1].second, 2);
  EXPECT_EQ(roots[2].first, f->from_int(3));
  EXPECT_EQ(roots[2].second, 1);

  FieldPtr q = Field::rationals();
  Poly pq(q, {q->from_int(-1), q->from_int(0), q->from_int(2)});  // 2X^2-1
  EXPECT_TRUE(pq.roots().empty());
  Poly pq2(q, {q->from_rational(BigRat(-1, 2)), q->one()});  // X - 1/2
  auto rq = pq2.roots();
  ASSERT_EQ(rq.size(), 1u);
  EXPECT_EQ(rq[0].first, q->from_rational(BigRat(1, 2)));
}

TEST(Poly, NewtonIdentitiesRecoverElementarySymmetric) {
  // Roots 1, 2, 3 over Q: p = (6, 14, 36), e = (6, 11, 6).
  FieldPtr q = Field::rationals();
  std::vector<Scalar> p{q->from_int(6), q->from_int(14), q->from_int(36)};
  auto e = newton_from_power_sums(p);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[0], q->from_int(6));
  EXPECT_EQ(e[1], q->from_int(11));
  EXPECT_EQ(e[2], q->from_int(6));
  // GF(5) with n = 3 < 5 is fine; n >= p must throw.
  FieldPtr f = Field::gf(5);
  std::vector<Scalar> pf{f->from_int(1), f->from_int(1), f->from_int(1)};
  EXPECT_NO_THROW(newton_from_power_sums(pf));
  std::vector<Scalar> toolong(5, f->one());
  EXPECT_THROW(newton_from_power_sums(toolong), invol::error);
}

TEST(Poly, ResultantDetectsCommonRoots) {
  FieldPtr f = Field::gf(7);
  Poly a = Poly::from_roots(f, {f->from_int(2), f->from_int(3)});
  Poly b = Poly::from_roots(f, {f->from_int(3), f->from_int(5)});
  EXPECT_TRUE(resultant(a, b).is_zero());
  Poly c = Poly::from_roots(f, {f->from_int(1), f->from_int(5)});
  EXPECT_FALSE(resultant(a, c).is_zero());
  // res(f, g) = lc(g)^deg f * prod g(root_i) for f = prod (X - root_i).
  Scalar expect = c.eval(f->from_int(2)) * c.eval(f->from_int(3));
  EXPECT_EQ(resultant(a, c), expect);
}
