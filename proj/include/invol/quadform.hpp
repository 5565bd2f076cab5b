#pragma once

// The quadratic form c_2 on the symmetrized elements of a capacity-2
// algebra with involution, with its polar form and radicals.

#include <vector>

#include "algebra.hpp"
#include "charpoly.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "matrix.hpp"

namespace invol {

/// c_2 on a basis of the symmetrized space: values on the basis, the Gram
/// matrix of the polar form b(x, y) = q(x+y) - q(x) - q(y), and the bases
/// of rad(b) and rad(q) in basis coordinates. The form is regular if
/// rad(q) = 0 and nondegenerate if additionally dim rad(b) <= 1.
struct QuadraticFormData {
  std::vector<Matrix> space;
  std::vector<Scalar> values;
  Matrix gram;
  std::vector<std::vector<Scalar>> rad_b;
  std::vector<std::vector<Scalar>> rad_q;
  bool regular;
  bool nondegenerate;
};

/// q evaluated from the stored basis data.
inline Scalar evaluate_quadratic(const QuadraticFormData& q,
                                 const std::vector<Scalar>& coords) {
  if (coords.size() != q.values.size())
    throw error("quadratic form: coordinate size mismatch");
  FieldPtr f = q.gram.field();
  Scalar acc = f->zero();
  for (size_t i = 0; i < coords.size(); ++i) {
    acc += coords[i] * coords[i] * q.values[i];
    for (size_t j = i + 1; j < coords.size(); ++j)
      acc += coords[i] * coords[j] * q.gram.at(i, j);
  }
  return acc;
}

inline QuadraticFormData cap2_form(const AlgebraWithInvolution& a) {
  if (a.capacity() != 2)
    throw error("cap2 form: capacity is not 2");
  FieldPtr f = a.field();
  QuadraticFormData out{a.space_matrices(a.syms_space()),
                        {},
                        Matrix(f, 0, 0),
                        {},
                        {},
                        false,
                        false};
  size_t n = out.space.size();
  auto value = [&](const Matrix& x) {
    auto r = chi(a, x);
    // c_2(x) 1 = x (c_1(x) 1 - x) on the symmetrized elements.
    Matrix bar = r.c[0] * a.unit() - x;
    if (x * bar != r.c[1] * a.unit())
      throw error("cap2 form: conjugate identity fails");
    return r.c[1];
  };
  for (const auto& b : out.space) out.values.push_back(value(b));
  out.gram = Matrix(f, n, n);
  for (size_t i = 0; i < n; ++i) {
    out.gram.at(i, i) = f->from_int(2) * out.values[i];
    for (size_t j = i + 1; j < n; ++j) {
      Scalar b = value(out.space[i] + out.space[j]) - out.values[i] -
                 out.values[j];
      out.gram.at(i, j) = b;
      out.gram.at(j, i) = b;
    }
  }
  out.rad_b = out.gram.kernel();
  if (f->characteristic() != 2) {
    // Away from characteristic 2, q vanishes on the radical of its polar
    // form, so the radicals agree.
    for (const auto& r : out.rad_b) {
      if (!evaluate_quadratic(out, r).is_zero())
        throw error("cap2 form: radical value is nonzero");
    }
    out.rad_q = out.rad_b;
  } else if (!out.rad_b.empty()) {
    // On rad(b) the form is additive and q(t x) = t^2 q(x), so pulling the
    // values through the inverse Frobenius turns q = 0 into a linear
    // condition.
    Matrix roots(f, 1, out.rad_b.size());
    for (size_t i = 0; i < out.rad_b.size(); ++i)
      roots.at(0, i) = evaluate_quadratic(out, out.rad_b[i]).pth_root();
    for (const auto& combo : roots.kernel()) {
      std::vector<Scalar> v(n, f->zero());
      for (size_t i = 0; i < combo.size(); ++i)
        for (size_t t = 0; t < n; ++t)
          v[t] += combo[i] * out.rad_b[i][t];
      out.rad_q.push_back(std::move(v));
    }
  }
  out.regular = out.rad_q.empty();
  out.nondegenerate = out.regular && out.rad_b.size() <= 1;
  return out;
}

}  // namespace invol
