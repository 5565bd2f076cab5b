#pragma once
// Homogeneous cubic forms with exact coefficients and the quadratic descent
// step: a zero over a quadratic extension, presented as a polynomial
// divisibility, pulls down to a nontrivial zero over the base field.

#include <array>
#include <cstddef>
#include <map>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "poly.hpp"

namespace invol {

/// Homogeneous cubic form in n variables, stored sparsely by coefficients on
/// the monomials x_i x_j x_k with i <= j <= k.
class CubicForm {
 public:
  CubicForm(FieldPtr f, size_t n) : f_(f), n_(n) {}

  FieldPtr field() const { return f_; }
  size_t variables() const { return n_; }

  void set_coeff(size_t i, size_t j, size_t k, const Scalar& c) {
    auto key = sorted_key(i, j, k);
    if (c.is_zero())
      coeffs_.erase(key);
    else
      coeffs_[key] = c;
  }

  Scalar coeff(size_t i, size_t j, size_t k) const {
    auto it = coeffs_.find(sorted_key(i, j, k));
    return it == coeffs_.end() ? f_->zero() : it->second;
  }

  const std::map<std::array<size_t, 3>, Scalar>& terms() const {
    return coeffs_;
  }

  Scalar eval(const std::vector<Scalar>& x) const {
    if (x.size() != n_) throw error("cubic form: argument size mismatch");
    Scalar acc = f_->zero();
    for (const auto& [key, c] : coeffs_)
      acc = acc + c * x[key[0]] * x[key[1]] * x[key[2]];
    return acc;
  }

  /// f(b + X c) as a polynomial of degree at most 3 in X.
  Poly eval_linear(const std::vector<Scalar>& b,
                   const std::vector<Scalar>& c) const {
    if (b.size() != n_ || c.size() != n_)
      throw error("cubic form: argument size mismatch");
    std::vector<Scalar> out(4, f_->zero());
    for (const auto& [key, co] : coeffs_) {
      size_t i = key[0], j = key[1], k = key[2];
      out[0] = out[0] + co * b[i] * b[j] * b[k];
      out[1] = out[1] + co * (b[i] * b[j] * c[k] + b[i] * c[j] * b[k] +
                              c[i] * b[j] * b[k]);
      out[2] = out[2] + co * (b[i] * c[j] * c[k] + c[i] * b[j] * c[k] +
                              c[i] * c[j] * b[k]);
      out[3] = out[3] + co * c[i] * c[j] * c[k];
    }
    return Poly(f_, std::move(out));
  }

 private:
  static std::array<size_t, 3> sorted_key(size_t i, size_t j, size_t k) {
    std::array<size_t, 3> key = {i, j, k};
    if (key[0] > key[1]) std::swap(key[0], key[1]);
    if (key[1] > key[2]) std::swap(key[1], key[2]);
    if (key[0] > key[1]) std::swap(key[0], key[1]);
    return key;
  }

  FieldPtr f_;
  size_t n_;
  std::map<std::array<size_t, 3>, Scalar> coeffs_;
};

/// Descent of a quadratic-extension zero of a cubic form. The input zero is
/// b + theta c for a root theta of the irreducible monic quadratic p,
/// witnessed by p dividing f(b + X c). The quotient h = f(b + X c) / p has
/// degree at most 1 and each branch hands back a base-field zero:
/// h constant forces f(c) = 0 (or f(b) = 0 when c is trivial), and h with
/// root alpha gives the zero b + alpha c, falling back to c when that
/// combination vanishes. The result is re-verified to be a nonzero vector
/// with f(result) = 0.
inline std::vector<Scalar> springer_descent(const CubicForm& f,
                                            const std::vector<Scalar>& b,
                                            const std::vector<Scalar>& c,
                                            const Poly& p) {
  FieldPtr fld = f.field();
  size_t n = f.variables();
  if (b.size() != n || c.size() != n)
    throw error("springer descent: vector size mismatch");
  if (p.is_zero() || p.degree() != 2)
    throw error("springer descent: modulus is not quadratic");
  Poly pm = p.monic();
  if (!pm.roots().empty())
    throw error("springer descent: modulus is not irreducible");
  auto nonzero = [&](const std::vector<Scalar>& v) {
    for (const Scalar& x : v)
      if (!x.is_zero()) return true;
    return false;
  };
  if (!nonzero(b) && !nonzero(c))
    throw error("springer descent: zero input vector");
  Poly g = f.eval_linear(b, c);
  if (g.is_zero()) {
    // f vanishes on the whole line; either input vector works.
    std::vector<Scalar> v = nonzero(c) ? c : b;
    if (!f.eval(v).is_zero())
      throw error("springer descent: verification failed");
    return v;
  }
  auto [h, rem] = g.divmod(pm);
  if (!rem.is_zero())
    throw error("springer descent: input is not a zero modulo p");
  std::vector<Scalar> v;
  if (h.degree() <= 0) {
    // g = h0 * p with p irreducible: comparing degrees, the cubic part of g
    // is zero, which is f(c); when c is trivial the constant part f(b) must
    // vanish instead.
    v = nonzero(c) ? c : b;
  } else {
    Scalar alpha = -(h.coeff(0) / h.coeff(1));
    v.assign(n, fld->zero());
    for (size_t i = 0; i < n; ++i) v[i] = b[i] + alpha * c[i];
    if (!nonzero(v)) v = c;
  }
  if (!nonzero(v) || !f.eval(v).is_zero())
    throw error("springer descent: verification failed");
  return v;
}

}  // namespace invol
