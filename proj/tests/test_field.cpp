#include "invol/field.hpp"

#include <gtest/gtest.h>

#include "invol/rng.hpp"

using invol::BigRat;
using invol::Field;
using invol::FieldPtr;
using invol::Rng;
using invol::Scalar;

namespace {

constexpr int kIterations = 500;

Scalar random_element(FieldPtr f, Rng& rng) {
  if (f->is_finite()) return f->element(rng.below(f->cardinality()));
  return f->element(rng.below(64));
}

}  // namespace

TEST(Field, InterningAndBasicProperties) {
  FieldPtr f2 = Field::gf(2);
  EXPECT_EQ(f2, Field::gf(2));
  EXPECT_EQ(f2->characteristic(), 2u);
  EXPECT_EQ(f2->cardinality(), 2u);
  EXPECT_EQ(f2->degree(), 1u);
  EXPECT_EQ(f2->describe(), "GF(2)");

  FieldPtr f4 = Field::gf(2, 2);
  EXPECT_EQ(f4, Field::gf(2, 2, {1, 1, 1}));
  EXPECT_EQ(f4->cardinality(), 4u);
  EXPECT_EQ(f4->describe(), "GF(2^2)");

  FieldPtr q = Field::rationals();
  EXPECT_EQ(q, Field::rationals());
  EXPECT_EQ(q->characteristic(), 0u);
  EXPECT_EQ(q->cardinality(), 0u);
  EXPECT_FALSE(q->is_finite());
}

TEST(Field, RejectsInvalidConstructions) {
  EXPECT_THROW(Field::gf(4), invol::error);          // not prime
  EXPECT_THROW(Field::gf(2, 0), invol::error);       // zero degree
  EXPECT_THROW(Field::gf(2, 2, {0, 0, 1}), invol::error);  // X^2 reducible
  EXPECT_THROW(Field::gf(2, 2, {1, 0, 1}), invol::error);  // (X+1)^2
  EXPECT_THROW(Field::gf(3, 2, {2, 2}), invol::error);     // wrong length
  EXPECT_THROW(Field::gf(3, 2, {1, 3, 1}), invol::error);  // coeff range
}

TEST(Field, ShippedModuliAllLoad) {
  // Construction re-runs the Rabin irreducibility test, so loading is the
  // verification.
  for (uint64_t p : {2, 3, 5}) {
    for (unsigned k = 2; k <= 8; ++k) {
      FieldPtr f = Field::gf(p, k);
      uint64_t expect = 1;
      for (unsigned i = 0; i < k; ++i) expect *= p;
      EXPECT_EQ(f->cardinality(), expect);
    }
  }
}

TEST(Field, FieldAxiomsHoldOnRandomElements) {
  std::vector<FieldPtr> fields = {
      Field::gf(2),    Field::gf(3),    Field::gf(5),    Field::gf(2, 2),
      Field::gf(3, 2), Field::gf(5, 2), Field::gf(2, 5), Field::gf(5, 8),
      Field::rationals()};
  for (FieldPtr f : fields) {
    Rng rng = Rng::derive(7, 0, f->is_finite() ? f->cardinality() : 99);
    for (int i = 0; i < kIterations; ++i) {
      Scalar a = random_element(f, rng);
      Scalar b = random_element(f, rng);
      Scalar c = random_element(f, rng);
      EXPECT_EQ((a + b) + c, a + (b + c)) << f->describe();
      EXPECT_EQ((a * b) * c, a * (b * c)) << f->describe();
      EXPECT_EQ(a * (b + c), a * b + a * c) << f->describe();
      EXPECT_EQ(a + b, b + a) << f->describe();
      EXPECT_EQ(a * b, b * a) << f->describe();
      EXPECT_EQ(a - a, f->zero()) << f->describe();
      EXPECT_EQ(a * f->one(), a) << f->describe();
      if (!a.is_zero()) {
        EXPECT_EQ(a * a.inverse(), f->one()) << f->describe();
        EXPECT_EQ((a / a), f->one()) << f->describe();
      }
    }
  }
}

TEST(Field, FrobeniusRootInversesSquaring) {
  for (FieldPtr f : {Field::gf(2, 3), Field::gf(2, 8), Field::gf(3, 4),
                     Field::gf(5, 2)}) {
    for (uint64_t i = 0; i < std::min<uint64_t>(f->cardinality(), 200); ++i) {
      Scalar a = f->element(i);
      Scalar r = a.pow(f->characteristic()).pth_root();
      EXPECT_EQ(r, a) << f->describe();
    }
  }
}

TEST(Field, DivisionByZeroThrows) {
  FieldPtr f = Field::gf(3);
  EXPECT_THROW(f->one() / f->zero(), invol::error);
  EXPECT_THROW(f->zero().inverse(), invol::error);
  FieldPtr q = Field::rationals();
  EXPECT_THROW(q->one() / q->zero(), invol::error);
}

TEST(Field, MixedFieldOperationsThrow) {
  EXPECT_THROW(Field::gf(2)->one() + Field::gf(3)->one(), invol::error);
  EXPECT_THROW(Field::gf(2)->one() + Field::rationals()->one(),
               invol::error);
}

TEST(Field, PackedIndexRoundTrip) {
  FieldPtr f = Field::gf(3, 3);
  for (uint64_t i = 0; i < f->cardinality(); ++i) {
    Scalar a = f->element(i);
    EXPECT_EQ(a.index(), i);
    EXPECT_EQ(f->from_coeffs(a.coeffs()), a);
  }
  // Coefficients are little-endian digits base p.
  Scalar a = f->element(5);  // 5 = 2 + 1*3
  EXPECT_EQ(a.coeffs(), (std::vector<uint64_t>{2, 1, 0}));
}

TEST(Field, ExtensionArithmeticMatchesKnownValues) {
  // GF(4) = GF(2)[t]/(t^2+t+1): t * t = t + 1, t * (t+1) = 1.
  FieldPtr f4 = Field::gf(2, 2);
  Scalar t = f4->element(2);        // coeffs (0,1)
  Scalar t1 = f4->element(3);       // coeffs (1,1)
  EXPECT_EQ(t * t, t1);
  EXPECT_EQ(t * t1, f4->one());
  EXPECT_EQ(t.inverse(), t1);
  // GF(9) = GF(3)[t]/(t^2+1): t^2 = -1 = 2.
  FieldPtr f9 = Field::gf(3, 2);
  Scalar u = f9->element(3);  // coeffs (0,1)
  EXPECT_EQ(u * u, f9->from_int(2));
}

TEST(Field, LargeExtensionWithoutLookupTables) {
  // GF(5^8) exceeds the LUT limit; exercise the unpack/reduce path.
  FieldPtr f = Field::gf(5, 8);
  Rng rng(12345);
  for (int i = 0; i < 100; ++i) {
    Scalar a = random_element(f, rng);
    Scalar b = random_element(f, rng);
    EXPECT_EQ(a * (a + b) - a * b, a * a);
    if (!b.is_zero()) EXPECT_EQ((a * b) / b, a);
  }
  // t^8 = -2 = 3 under modulus X^8 + 2.
  Scalar t = f->element(5);  // coeffs (0,1,0,...)
  EXPECT_EQ(t.pow(8), f->from_int(3));
}

TEST(Field, RationalExactness) {
  FieldPtr q = Field::rationals();
  Scalar a = q->from_rational(BigRat(1, 3));
  Scalar b = q->from_rational(BigRat(1, 6));
  EXPECT_EQ(a + b, q->from_rational(BigRat(1, 2)));
  EXPECT_EQ((a / b), q->from_int(2));
  // No drift over many operations.
  Scalar x = q->from_rational(BigRat(355, 113));
  Scalar acc = q->zero();
  for (int i = 0; i < 113; ++i) acc += x;
  EXPECT_EQ(acc, q->from_int(355));
  EXPECT_EQ(q->from_rational(BigRat(2, 4)), q->from_rational(BigRat(1, 2)));
}

TEST(Field, RationalSquareRootDetection) {
  FieldPtr q = Field::rationals();
  auto r = q->from_rational(BigRat(9, 4)).sqrt_in_q();
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(*r, q->from_rational(BigRat(3, 2)));
  EXPECT_FALSE(q->from_int(2).sqrt_in_q().has_value());
  EXPECT_FALSE(q->from_int(-4).sqrt_in_q().has_value());
  EXPECT_TRUE(q->zero().sqrt_in_q().has_value());
}

TEST(Field, CanonicalRationalEnumerationIsStable) {
  FieldPtr q = Field::rationals();
  // Frozen prefix of the height enumeration.
  std::vector<BigRat> expect = {
      BigRat(0),      BigRat(-1),     BigRat(1),      BigRat(-2),
      BigRat(2),      BigRat(-1, 2),  BigRat(1, 2),   BigRat(-3),
      BigRat(3),      BigRat(-3, 2),  BigRat(3, 2),   BigRat(-2, 3),
      BigRat(-1, 3),  BigRat(1, 3),   BigRat(2, 3)};
  for (size_t i = 0; i < expect.size(); ++i) {
    EXPECT_EQ(q->element(i).rational(), expect[i]) << "index " << i;
  }
}

TEST(Field, CanonicalOrderIsTotalAndStable) {
  FieldPtr f = Field::gf(5, 2);
  EXPECT_TRUE(Scalar::canonical_less(f->element(3), f->element(7)));
  EXPECT_FALSE(Scalar::canonical_less(f->element(7), f->element(3)));
  FieldPtr q = Field::rationals();
  // Height 1 before height 2; within a height, by value.
  EXPECT_TRUE(Scalar::canonical_less(q->from_int(1), q->from_int(-2)));
  EXPECT_TRUE(
      Scalar::canonical_less(q->from_int(-1), q->from_rational(BigRat(1))));
}
