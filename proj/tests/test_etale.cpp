// Etale structure of commutative subalgebras: the trace-form test against
// brute-force nilpotent detection, idempotent enumeration with frozen
// counts, component presentations, and primitive elements.

#include <gtest/gtest.h>

#include <cstdint>
#include <vector>

#include "invol/algebra.hpp"
#include "invol/errors.hpp"
#include "invol/etale.hpp"
#include "invol/field.hpp"
#include "invol/matrix.hpp"
#include "invol/poly.hpp"

namespace invol {
namespace {

Matrix from_ints(FieldPtr f, std::vector<std::vector<long long>> rows) {
  Matrix m(f, rows.size(), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j)
      m.at(i, j) = f->from_int(rows[i][j]);
  return m;
}

Matrix basis_matrix(FieldPtr f, size_t n, size_t i, size_t j) {
  Matrix m(f, n, n);
  m.at(i, j) = f->one();
  return m;
}

// The subalgebra of diagonal matrices inside (M_n(F), transpose).
Subalgebra diagonal_subalgebra(const AlgebraWithInvolution& a) {
  FieldPtr f = a.field();
  size_t n = a.ambient();
  std::vector<Matrix> gens;
  for (size_t i = 0; i < n; ++i) gens.push_back(basis_matrix(f, n, i, i));
  return Subalgebra(&a, gens);
}

bool same_matrix_set(const std::vector<Matrix>& a,
                     const std::vector<Matrix>& b) {
  if (a.size() != b.size()) return false;
  for (const Matrix& x : a) {
    bool found = false;
    for (const Matrix& y : b) found = found || x == y;
    if (!found) return false;
  }
  return true;
}

void expect_partition(const Subalgebra& l, const EtaleDescription& d) {
  FieldPtr f = l.parent().field();
  size_t n = l.parent().ambient();
  Matrix zero(f, n, n);
  Matrix sum(f, n, n);
  for (size_t i = 0; i < d.primitive_idempotents.size(); ++i) {
    const Matrix& e = d.primitive_idempotents[i];
    EXPECT_EQ(e * e, e);
    EXPECT_TRUE(l.contains(e));
    for (size_t j = i + 1; j < d.primitive_idempotents.size(); ++j)
      EXPECT_EQ(e * d.primitive_idempotents[j], zero);
    sum = sum + e;
  }
  EXPECT_EQ(sum, l.unit());
  EXPECT_EQ(d.component_minpolys.size(), d.primitive_idempotents.size());
}

class EtaleTest : public ::testing::Test {};

TEST_F(EtaleTest, TraceFormDetectsSeparability) {
  {
    AlgebraWithInvolution a = transpose_model(Field::gf(3), 2);
    Subalgebra l = diagonal_subalgebra(a);
    EXPECT_EQ(trace_form(l), Matrix::identity(Field::gf(3), 2));
    EXPECT_TRUE(is_etale(l));
  }
  {
    // A separable quadratic field in characteristic 2: the trace of the
    // unit vanishes, yet the form stays nondegenerate.
    FieldPtr f = Field::gf(2);
    AlgebraWithInvolution a = transpose_model(f, 2);
    Subalgebra k(&a, {from_ints(f, {{0, 1}, {1, 1}})});
    Matrix gram = trace_form(k);
    EXPECT_TRUE(gram.invertible());
    EXPECT_EQ(gram, gram.transpose());
    EXPECT_TRUE(is_etale(k));
  }
  {
    FieldPtr f = Field::gf(2);
    AlgebraWithInvolution a = transpose_model(f, 2);
    Subalgebra all(&a, {basis_matrix(f, 2, 0, 1), basis_matrix(f, 2, 1, 0)});
    EXPECT_FALSE(all.commutative());
    EXPECT_THROW(is_etale(all), error);
  }
}

TEST_F(EtaleTest, AgreesWithNilpotentDetectionExhaustively) {
  FieldPtr f = Field::gf(2);
  AlgebraWithInvolution a = transpose_model(f, 3);
  size_t etale_count = 0;
  size_t defective_count = 0;
  for (uint64_t code = 0; code < 512; ++code) {
    Matrix x(f, 3, 3);
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j)
        x.at(i, j) = f->element((code >> (3 * i + j)) & 1);
    Subalgebra l(&a, {x});
    ASSERT_TRUE(l.commutative());
    ASSERT_LE(l.dim(), 3u);
    // Oracle: a finite commutative algebra is etale exactly when it has no
    // nonzero nilpotent, and nilpotency is decided by the dim-th power.
    bool has_nilpotent = false;
    std::vector<uint64_t> digits(l.dim(), 0);
    std::vector<Scalar> c(l.dim(), f->zero());
    Matrix zero(f, 3, 3);
    do {
      for (size_t i = 0; i < l.dim(); ++i) c[i] = f->element(digits[i]);
      Matrix m = l.from_coords(c);
      if (m == zero) continue;
      Matrix p = m;
      for (size_t k = 1; k < l.dim(); ++k) p = p * m;
      has_nilpotent = has_nilpotent || p == zero;
    } while (!has_nilpotent && detail::next_tuple(digits, 2));
    EXPECT_EQ(is_etale(l), !has_nilpotent) << x.str();
    (has_nilpotent ? defective_count : etale_count)++;
  }
  EXPECT_GT(etale_count, 0u);
  EXPECT_GT(defective_count, 0u);
}

TEST_F(EtaleTest, DiagonalAlgebraSplitsCompletely) {
  FieldPtr f = Field::gf(2);
  AlgebraWithInvolution a = transpose_model(f, 3);
  Subalgebra l = diagonal_subalgebra(a);
  EXPECT_TRUE(is_etale(l));

  std::vector<Matrix> all = all_idempotents(l);
  EXPECT_EQ(all.size(), 8u);
  for (const Matrix& e : all) EXPECT_EQ(e * e, e);

  EtaleDescription d = idempotents(l);
  ASSERT_EQ(d.primitive_idempotents.size(), 3u);
  expect_partition(l, d);
  EXPECT_TRUE(d.split);
  std::vector<Matrix> want = {basis_matrix(f, 3, 0, 0),
                              basis_matrix(f, 3, 1, 1),
                              basis_matrix(f, 3, 2, 2)};
  EXPECT_TRUE(same_matrix_set(d.primitive_idempotents, want));
  for (const Poly& mu : d.component_minpolys)
    EXPECT_EQ(mu, Poly::from_ints(f, {0, 1}));
}

TEST_F(EtaleTest, FieldsHaveOnlyTrivialIdempotents) {
  FieldPtr f = Field::gf(2);
  AlgebraWithInvolution a = transpose_model(f, 2);
  Subalgebra k(&a, {from_ints(f, {{0, 1}, {1, 1}})});
  ASSERT_EQ(k.dim(), 2u);

  std::vector<Matrix> all = all_idempotents(k);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_TRUE(same_matrix_set(all, {Matrix(f, 2, 2), k.unit()}));

  EtaleDescription d = idempotents(k);
  ASSERT_EQ(d.primitive_idempotents.size(), 1u);
  EXPECT_EQ(d.primitive_idempotents[0], k.unit());
  EXPECT_FALSE(d.split);
  ASSERT_EQ(d.component_minpolys.size(), 1u);
  EXPECT_EQ(d.component_minpolys[0], Poly::from_ints(f, {1, 1, 1}));
}

TEST_F(EtaleTest, MixedComponentsArePresentedByMinimalPolynomials) {
  // GF(4) x GF(2) inside M_3(GF(2)): a quadratic field block plus a corner.
  FieldPtr f = Field::gf(2);
  AlgebraWithInvolution a = transpose_model(f, 3);
  Matrix theta(f, 3, 3);
  theta.at(0, 1) = f->one();
  theta.at(1, 0) = f->one();
  theta.at(1, 1) = f->one();
  Subalgebra l(&a, {theta, basis_matrix(f, 3, 2, 2)});
  ASSERT_EQ(l.dim(), 3u);
  EXPECT_TRUE(is_etale(l));

  EXPECT_EQ(all_idempotents(l).size(), 4u);
  EtaleDescription d = idempotents(l);
  ASSERT_EQ(d.primitive_idempotents.size(), 2u);
  expect_partition(l, d);
  EXPECT_FALSE(d.split);

  Matrix block(f, 3, 3);
  block.at(0, 0) = f->one();
  block.at(1, 1) = f->one();
  EXPECT_TRUE(same_matrix_set(d.primitive_idempotents,
                              {block, basis_matrix(f, 3, 2, 2)}));
  // Components in enumeration order: the corner, then the field block.
  EXPECT_EQ(d.primitive_idempotents[0], basis_matrix(f, 3, 2, 2));
  EXPECT_EQ(d.component_minpolys[0], Poly::from_ints(f, {0, 1}));
  EXPECT_EQ(d.component_minpolys[1], Poly::from_ints(f, {1, 1, 1}));
}

TEST_F(EtaleTest, ScalarExtensionSplitsAQuadraticField) {
  FieldPtr f2 = Field::gf(2);
  AlgebraWithInvolution a = transpose_model(f2, 2);
  Matrix theta = from_ints(f2, {{0, 1}, {1, 1}});
  Subalgebra k(&a, {theta});
  EXPECT_FALSE(idempotents(k).split);

  FieldPtr f4 = Field::gf(2, 2);
  AlgebraWithInvolution ext = extend_scalars(a, 2);
  FieldEmbedding emb(f2, f4);
  Subalgebra k4 = extend_subalgebra(ext, emb, k);
  ASSERT_EQ(k4.dim(), 2u);
  EXPECT_TRUE(is_etale(k4));

  EXPECT_EQ(all_idempotents(k4).size(), 4u);
  EtaleDescription d = idempotents(k4);
  ASSERT_EQ(d.primitive_idempotents.size(), 2u);
  expect_partition(k4, d);
  EXPECT_TRUE(d.split);

  // The designated-element route recovers the same decomposition from the
  // roots of X^2 + X + 1 over GF(4).
  EtaleDescription viaroots = idempotents(k4, emb.map(theta));
  EXPECT_TRUE(viaroots.split);
  EXPECT_TRUE(same_matrix_set(viaroots.primitive_idempotents,
                              d.primitive_idempotents));
  for (const Poly& mu : viaroots.component_minpolys) {
    EXPECT_EQ(mu.degree(), 1);
    EXPECT_TRUE(Poly::from_ints(f4, {1, 1, 1}).eval(-mu.coeff(0)).is_zero());
  }
}

TEST_F(EtaleTest, LagrangeRouteOverTheRationals) {
  FieldPtr f = Field::rationals();
  AlgebraWithInvolution a = transpose_model(f, 2);
  Subalgebra l = diagonal_subalgebra(a);

  EXPECT_THROW(all_idempotents(l), budget_exhausted);
  EXPECT_THROW(idempotents(l), budget_exhausted);

  Matrix prim = from_ints(f, {{0, 0}, {0, 1}});
  EtaleDescription d = idempotents(l, prim);
  ASSERT_EQ(d.primitive_idempotents.size(), 2u);
  expect_partition(l, d);
  EXPECT_TRUE(d.split);
  EXPECT_EQ(d.primitive_idempotents[0], from_ints(f, {{1, 0}, {0, 0}}));
  EXPECT_EQ(d.primitive_idempotents[1], prim);
  EXPECT_EQ(d.component_minpolys[0], Poly::from_ints(f, {0, 1}));
  EXPECT_EQ(d.component_minpolys[1], Poly::from_ints(f, {-1, 1}));

  // The unit is not primitive in a two-dimensional algebra.
  EXPECT_THROW(idempotents(l, l.unit()), error);

  // An irreducible minimal polynomial has no rational roots to split along.
  Subalgebra k(&a, {from_ints(f, {{0, 1}, {1, 1}})});
  EXPECT_THROW(idempotents(k, from_ints(f, {{0, 1}, {1, 1}})), error);
}

TEST_F(EtaleTest, PrimitiveElementsAreLexicographicallyFirst) {
  {
    FieldPtr f = Field::gf(2);
    AlgebraWithInvolution a = transpose_model(f, 2);
    Subalgebra l = diagonal_subalgebra(a);
    EtaleDescription d = idempotents(l);
    Matrix prim = primitive_element(l, d);
    // The first distinct coordinate tuple is (0, 1).
    EXPECT_EQ(prim, d.primitive_idempotents[1]);
    EXPECT_EQ(l.min_poly(prim), Poly::from_ints(f, {0, 1, 1}));
    EXPECT_EQ(primitive_element(l), prim);
  }
  {
    // Three components over GF(2): only two scalars exist, so no element
    // can separate the components.
    FieldPtr f = Field::gf(2);
    AlgebraWithInvolution a = transpose_model(f, 3);
    Subalgebra l = diagonal_subalgebra(a);
    EXPECT_THROW(primitive_element(l), error);
  }
  {
    FieldPtr f = Field::gf(3);
    AlgebraWithInvolution a = transpose_model(f, 3);
    Subalgebra l = diagonal_subalgebra(a);
    EtaleDescription d = idempotents(l);
    Matrix prim = primitive_element(l, d);
    EXPECT_EQ(l.min_poly(prim).degree(), 3);
    EtaleDescription viaroots = idempotents(l, prim);
    EXPECT_TRUE(same_matrix_set(viaroots.primitive_idempotents,
                                d.primitive_idempotents));
  }
  {
    // Enough nonzero scalars: the element is invertible with tuple (1,2,3).
    FieldPtr f = Field::gf(5);
    AlgebraWithInvolution a = transpose_model(f, 3);
    Subalgebra l = diagonal_subalgebra(a);
    EtaleDescription d = idempotents(l);
    Matrix prim = primitive_element(l, d);
    Matrix want(f, 3, 3);
    for (size_t i = 0; i < 3; ++i)
      want = want + f->from_int(static_cast<long long>(i) + 1) *
                        d.primitive_idempotents[i];
    EXPECT_EQ(prim, want);
    EXPECT_TRUE(prim.invertible());
    EXPECT_EQ(l.min_poly(prim),
              Poly::from_roots(f, {f->from_int(1), f->from_int(2),
                                   f->from_int(3)}));
  }
  {
    // A field has one component but is not split, so the search refuses.
    FieldPtr f = Field::gf(2);
    AlgebraWithInvolution a = transpose_model(f, 2);
    Subalgebra k(&a, {from_ints(f, {{0, 1}, {1, 1}})});
    EXPECT_THROW(primitive_element(k, idempotents(k)), error);
  }
}

TEST_F(EtaleTest, EnumerationRefusesOversizedSpans) {
  FieldPtr f = Field::gf(5);
  AlgebraWithInvolution a = transpose_model(f, 9);
  Subalgebra l = diagonal_subalgebra(a);
  EXPECT_EQ(l.dim(), 9u);
  EXPECT_THROW(all_idempotents(l), budget_exhausted);
}

TEST_F(EtaleTest, FiveDimensionalCommutativeFixtureIsNotEtale) {
  // A five-dimensional commutative subalgebra of symmetrized elements in a
  // capacity-4 switch algebra; separability fails, so the dimension may
  // exceed the capacity.
  for (FieldPtr f : {Field::gf(2), Field::gf(3)}) {
    AlgebraWithInvolution a = switch_model(f, 4);
    ASSERT_EQ(a.capacity(), 4u);
    auto embed = [&](size_t i, size_t j) {
      Matrix x(f, 4, 4);
      x.at(i, j) = f->one();
      Matrix out(f, 8, 8);
      out.set_block(0, 0, x);
      out.set_block(4, 4, x.transpose());
      return out;
    };
    std::vector<Matrix> gens = {embed(0, 2), embed(0, 3), embed(1, 2),
                                embed(1, 3)};
    Subalgebra l(&a, gens);
    EXPECT_EQ(l.dim(), 5u);
    EXPECT_TRUE(l.commutative());
    EXPECT_TRUE(l.in_symm());
    EXPECT_GT(l.dim(), a.capacity());
    EXPECT_FALSE(is_etale(l));
  }
}

}  // namespace
}  // namespace invol
