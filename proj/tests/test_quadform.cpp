// The quadratic form c_2 on symmetrized elements of capacity-2 algebras:
// dimensions, nondegeneracy, the norm-plus-square decomposition, and the
// Gram expansion.

#include <gtest/gtest.h>

#include <utility>
#include <vector>

#include "invol/algebra.hpp"
#include "invol/charpoly.hpp"
#include "invol/errors.hpp"
#include "invol/field.hpp"
#include "invol/matrix.hpp"
#include "invol/poly.hpp"
#include "invol/quadform.hpp"
#include "invol/rng.hpp"

namespace invol {
namespace {

std::vector<FieldPtr> small_fields() {
  return {Field::gf(2), Field::gf(3), Field::gf(5), Field::gf(2, 2),
          Field::rationals()};
}

Matrix from_ints(FieldPtr f, std::vector<std::vector<long long>> rows) {
  Matrix m(f, rows.size(), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j)
      m.at(i, j) = f->from_int(rows[i][j]);
  return m;
}

Scalar random_scalar(FieldPtr f, Rng& rng) {
  if (f->is_finite()) return f->element(rng.below(f->cardinality()));
  return f->from_int(static_cast<long long>(rng.below(7)) - 3);
}

// Symmetric generator of a quadratic field extension inside M_2(F).
Matrix quadratic_field_unit(FieldPtr f) {
  if (f->characteristic() == 5) return from_ints(f, {{2, 1}, {1, 4}});
  return from_ints(f, {{0, 1}, {1, 1}});
}

Matrix doubled_field_unit(FieldPtr f) {
  Matrix u = quadratic_field_unit(f);
  Matrix out(f, 4, 4);
  out.set_block(0, 0, u);
  out.set_block(2, 2, u);
  return out;
}

std::vector<AlgebraWithInvolution> capacity_two_models(FieldPtr f) {
  std::vector<AlgebraWithInvolution> out;
  out.push_back(transpose_model(f, 2));
  out.push_back(switch_model(f, 2));
  out.push_back(unitary_model_default(f, 2));
  out.push_back(symplectic_model(f, 4));
  return out;
}

class QuadFormTest : public ::testing::Test {};

TEST_F(QuadFormTest, DimensionsAndNondegeneracy) {
  for (auto f : small_fields()) {
    for (const auto& a : capacity_two_models(f)) {
      auto q = cap2_form(a);
      size_t want = a.type() == Type::orthogonal  ? 3
                    : a.type() == Type::unitary   ? 4
                                                  : 6;
      EXPECT_EQ(q.space.size(), want) << a.describe();
      EXPECT_TRUE(q.regular) << a.describe();
      EXPECT_TRUE(q.nondegenerate) << a.describe();
      if (f->characteristic() == 2) {
        // The polar form is alternating, so the polar radical is forced by
        // the parity of the dimension.
        EXPECT_EQ(q.rad_b.size(), want % 2) << a.describe();
      } else {
        EXPECT_TRUE(q.rad_b.empty()) << a.describe();
      }
    }
  }
}

TEST_F(QuadFormTest, RequiresCapacityTwo) {
  auto f = Field::gf(3);
  EXPECT_THROW(cap2_form(transpose_model(f, 3)), error);
  EXPECT_THROW(cap2_form(symplectic_model(f, 2)), error);
}

TEST_F(QuadFormTest, GramExpansionMatchesDirectEvaluation) {
  for (auto f : small_fields()) {
    for (const auto& a : capacity_two_models(f)) {
      auto q = cap2_form(a);
      Rng rng(21);
      for (int it = 0; it < 10; ++it) {
        std::vector<Scalar> coords;
        Matrix x(f, a.ambient(), a.ambient());
        for (const auto& b : q.space) {
          coords.push_back(random_scalar(f, rng));
          x = x + coords.back() * b;
        }
        EXPECT_EQ(evaluate_quadratic(q, coords), chi(a, x).c[1]);
      }
    }
  }
}

TEST_F(QuadFormTest, NormAndSquareDecomposition) {
  // Over a fixed quadratic subalgebra K with half-dimensional centralizer,
  // the symmetrized space splits orthogonally as K plus the symmetrized
  // twisted-commuting part W; the form restricts to the norm of K on one
  // side and to x -> -x^2 on the other.
  for (auto f : small_fields()) {
    struct Instance {
      AlgebraWithInvolution a;
      Matrix gen;
    };
    std::vector<Instance> instances;
    instances.push_back({transpose_model(f, 2), quadratic_field_unit(f)});
    instances.push_back({symplectic_model(f, 4), doubled_field_unit(f)});
    instances.push_back({switch_model(f, 2), doubled_field_unit(f)});
    {
      auto a = unitary_model_default(f, 2);
      Matrix e2(f, 4, 4);
      e2.at(2, 2) = f->one();
      e2.at(3, 3) = f->one();
      instances.push_back({std::move(a), std::move(e2)});
    }
    for (auto& inst : instances) {
      const auto& a = inst.a;
      Subalgebra k(&a, {inst.gen});
      ASSERT_EQ(k.dim(), 2u);
      ASSERT_TRUE(k.in_symm());
      auto qs = quadratic_split(a, k);
      auto q = cap2_form(a);

      // q(x + y u) = x^2 + xy - c y^2, the norm form of K.
      auto check_norm = [&](const Scalar& x, const Scalar& y) {
        Matrix m = x * a.unit() + y * qs.u;
        Scalar want = x * x + x * y - qs.cparam * y * y;
        EXPECT_EQ(chi(a, m).c[1], want);
      };
      if (f->is_finite()) {
        for (uint64_t x = 0; x < f->cardinality(); ++x)
          for (uint64_t y = 0; y < f->cardinality(); ++y)
            check_norm(f->element(x), f->element(y));
      } else {
        for (long long x = -2; x <= 2; ++x)
          for (long long y = -2; y <= 2; ++y)
            check_norm(f->from_int(x), f->from_int(y));
      }

      // W spans the rest of the symmetrized space.
      Subspace cp(f, a.dim());
      for (const auto& m : qs.c_prime_basis) cp.add(a.coords(m));
      Subspace w = intersect(cp, a.symm_space());
      EXPECT_EQ(w.dim(), a.dim() / 4);
      EXPECT_EQ(q.space.size(), 2 + w.dim());

      Rng rng(22);
      auto w_basis = a.space_matrices(w);
      for (int it = 0; it < 8; ++it) {
        Matrix wm(f, a.ambient(), a.ambient());
        for (const auto& b : w_basis) wm = wm + random_scalar(f, rng) * b;
        // Squares in W are scalars and q(w) = -w^2.
        Matrix sq = wm * wm;
        Scalar s = sq.at(0, 0);
        ASSERT_EQ(sq, s * a.unit());
        ASSERT_TRUE(a.in_syms(wm));
        EXPECT_EQ(chi(a, wm).c[1], -s);
        // K and W are orthogonal for the polar form of q.
        for (const auto& km : {a.unit(), qs.u}) {
          Scalar polar = chi(a, km + wm).c[1] - chi(a, km).c[1] -
                         chi(a, wm).c[1];
          EXPECT_TRUE(polar.is_zero());
        }
      }
    }
  }
}

}  // namespace
}  // namespace invol
