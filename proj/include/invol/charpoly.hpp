#pragma once

// Reduced characteristic polynomials over the centre, the signed-coefficient
// polynomial chi on symmetrized elements, and the view of a centralizer
// C_A(K) as a matrix algebra over an embedded quadratic field K.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "kelem.hpp"
#include "matrix.hpp"
#include "poly.hpp"

namespace invol {

/// Characteristic polynomial of `action` restricted to the invariant column
/// space spanned by `cols`; errors out if the space is not invariant.
inline Poly restricted_char_poly(const Matrix& action, const Matrix& cols) {
  ColumnSolver solver(cols);
  Matrix moved = action * cols;
  FieldPtr f = action.field();
  Matrix restricted(f, cols.cols(), cols.cols());
  std::vector<Scalar> col(moved.rows(), f->zero());
  for (size_t j = 0; j < moved.cols(); ++j) {
    for (size_t i = 0; i < moved.rows(); ++i) col[i] = moved.at(i, j);
    auto c = solver.solve(col);
    if (!c) throw error("restricted char poly: subspace is not invariant");
    for (size_t i = 0; i < cols.cols(); ++i) restricted.at(i, j) = (*c)[i];
  }
  return restricted.char_poly();
}

/// Reduced characteristic polynomial over a quadratic field centre, as a
/// little-endian coefficient list over K (monic, degree deg A).
inline std::vector<KElem> reduced_char_poly_over_centre(
    const AlgebraWithInvolution& a, const Matrix& x) {
  auto m = a.k_action(x);
  QuadExtPtr k = a.quad_ext();
  std::vector<KElem> big =
      berkowitz_char_poly<KElem>(m, KElem::zero(k), KElem::one(k));
  return big;
}

/// Reduced characteristic polynomial of x in A over the centre. A split
/// centre is read on the distinguished component (both components agree on
/// symmetrized elements). Genuine quadratic-field coefficients over a prime
/// F are returned over GF(p^2) built from the centre's defining polynomial;
/// elsewhere they cannot be represented and an error is raised.
inline Poly reduced_char_poly(const AlgebraWithInvolution& a,
                              const Matrix& x) {
  if (!a.contains(x))
    throw error("reduced char poly: element outside the algebra");
  if (a.centre_tag() != CentreTag::quad_field)
    return a.reduced_action(x).char_poly();
  auto kc = reduced_char_poly_over_centre(a, x);
  if (auto base = kpoly_base_coeffs(kc))
    return Poly(a.field(), std::move(*base));
  FieldPtr f = a.field();
  if (!f->is_finite() || f->degree() != 1)
    throw error("reduced char poly: coefficients lie outside the base field");
  uint64_t p = f->characteristic();
  if (p >= (uint64_t{1} << 20))
    throw error("reduced char poly: coefficients lie outside the base field");
  uint64_t cidx = a.quad_ext()->param().index();
  FieldPtr ext = Field::gf(p, 2, {(p - cidx % p) % p, p - 1, 1});
  std::vector<Scalar> coeffs;
  coeffs.reserve(kc.size());
  for (const auto& e : kc)
    coeffs.push_back(ext->element(e.a().index() + e.b().index() * p));
  return Poly(ext, std::move(coeffs));
}

/// chi on a symmetrized element: the reduced characteristic polynomial for
/// orthogonal and unitary involutions, its monic square root for symplectic
/// ones, with the signed coefficient list c (c[i-1] is c_i, so that
/// chi = X^d - c_1 X^{d-1} + c_2 X^{d-2} - ...).
struct ChiResult {
  Poly chi;
  std::vector<Scalar> c;
};

inline ChiResult chi(const AlgebraWithInvolution& a, const Matrix& x) {
  if (!a.in_syms(x))
    throw error("chi: element is not a symmetrized element");
  Poly p = [&]() {
    switch (a.type()) {
      case Type::orthogonal:
        return a.reduced_action(x).char_poly();
      case Type::symplectic: {
        Poly prd = a.reduced_action(x).char_poly();
        try {
          return prd.sqrt_monic();
        } catch (const error&) {
          throw error("chi: reduced polynomial of a symplectic input is not "
                      "a square");
        }
      }
      default: {
        if (a.centre_tag() == CentreTag::split)
          return a.reduced_action(x).char_poly();
        auto kc = reduced_char_poly_over_centre(a, x);
        auto base = kpoly_base_coeffs(kc);
        if (!base)
          throw error("chi: unitary coefficients do not lie in the base "
                      "field");
        return Poly(a.field(), std::move(*base));
      }
    }
  }();
  size_t d = static_cast<size_t>(p.degree());
  std::vector<Scalar> c;
  c.reserve(d);
  bool negate = true;
  for (size_t i = 1; i <= d; ++i) {
    Scalar v = p.coeff(d - i);
    c.push_back(negate ? -v : v);
    negate = !negate;
  }
  return {std::move(p), std::move(c)};
}

/// C_A(K) for a quadratic field K = F[u] inside a first-kind model: the
/// reduced module becomes a K-vector space, the centralizer acts K-linearly,
/// and its reduced characteristic polynomial lives over K. When K consists
/// of fixed elements the involution restricts to C and its symmetrized data
/// is exposed as well.
class CentralizerOverK {
 public:
  CentralizerOverK(const AlgebraWithInvolution* a, const Subalgebra& k)
      : a_(a), c_(centralizer(*a, k.basis())) {
    if (a_->centre_tag() != CentreTag::base)
      throw error("centralizer view: ambient centre must be the base field");
    auto [u, cp] = quadratic_generator(*a_, k);
    u_ = u;
    cparam_ = cp;
    k_ = QuadExt::get(a_->field(), cparam_);
    if (!k_->is_field())
      throw error("centralizer view: K must be a field");
    if (2 * c_.dim() != a_->dim())
      throw error("centralizer view: centralizer has wrong dimension");
    build_pairing();
    if (k.in_symm()) build_involution_data();
  }

  const Subalgebra& c() const { return c_; }
  QuadExtPtr ext() const { return k_; }
  const Matrix& u() const { return u_; }
  const Scalar& cparam() const { return cparam_; }
  size_t k_degree() const { return a_->module_dim() / 2; }

  bool centralizes(const Matrix& x) const {
    return a_->contains(x) && x * u_ == u_ * x;
  }

  /// x as a K-matrix acting on the paired module.
  std::vector<std::vector<KElem>> k_matrix(const Matrix& x) const {
    Matrix r = pair_inv_ * a_->reduced_action(x) * pair_;
    size_t d = k_degree();
    const Scalar& cp = cparam_;
    std::vector<std::vector<KElem>> out;
    out.reserve(d);
    for (size_t i = 0; i < d; ++i) {
      std::vector<KElem> row;
      row.reserve(d);
      for (size_t j = 0; j < d; ++j) {
        Scalar av = r.at(2 * i, 2 * j);
        Scalar bv = r.at(2 * i + 1, 2 * j);
        if (r.at(2 * i, 2 * j + 1) != cp * bv ||
            r.at(2 * i + 1, 2 * j + 1) != av + bv)
          throw error("centralizer view: element does not centralize K");
        row.push_back(KElem(k_, av, bv));
      }
      out.push_back(std::move(row));
    }
    return out;
  }

  /// Reduced characteristic polynomial of x over K (monic, degree w/2).
  std::vector<KElem> prd(const Matrix& x) const {
    return berkowitz_char_poly<KElem>(k_matrix(x), KElem::zero(k_),
                                      KElem::one(k_));
  }

  /// Type of the restricted involution; requires K inside Symm.
  Type restricted_type() const {
    require_involution();
    return type_;
  }

  bool in_restricted_symd(const Matrix& x) const {
    require_involution();
    auto cd = a_->try_coords(x);
    return cd && symd_c_.contains(*cd);
  }

  bool in_restricted_symm(const Matrix& x) const {
    require_involution();
    auto cd = a_->try_coords(x);
    return cd && symm_c_.contains(*cd);
  }

  bool in_restricted_syms(const Matrix& x) const {
    return restricted_type() == Type::symplectic ? in_restricted_symd(x)
                                                 : in_restricted_symm(x);
  }

  /// chi of the restricted involution on a symmetrized element of C: the
  /// K-polynomial prd, or its monic square root in the symplectic case.
  std::vector<KElem> restricted_chi(const Matrix& x) const {
    if (!in_restricted_syms(x))
      throw error("centralizer view: element is not symmetrized in C");
    auto p = prd(x);
    if (type_ == Type::symplectic) return kpoly_sqrt_monic(p, k_);
    return p;
  }

 private:
  void build_pairing() {
    // Greedy K-basis of the module: each fresh column is paired with its
    // image under u, realizing multiplication by theta.
    size_t w = a_->module_dim();
    if (w % 2 != 0)
      throw error("centralizer view: module has odd dimension over K");
    Matrix ru = a_->reduced_action(u_);
    FieldPtr f = a_->field();
    Subspace seen(f, w);
    std::vector<std::vector<Scalar>> cols;
    for (size_t j = 0; j < w && cols.size() < w; ++j) {
      std::vector<Scalar> v(w, f->zero());
      v[j] = f->one();
      if (seen.contains(v)) continue;
      std::vector<Scalar> uv(w, f->zero());
      for (size_t r = 0; r < w; ++r)
        for (size_t t = 0; t < w; ++t) uv[r] += ru.at(r, t) * v[t];
      seen.add(v);
      if (!seen.add(uv))
        throw error("centralizer view: module pairing failed");
      cols.push_back(std::move(v));
      cols.push_back(std::move(uv));
    }
    if (cols.size() != w)
      throw error("centralizer view: module pairing failed");
    pair_ = Matrix(f, w, w);
    for (size_t k = 0; k < w; ++k)
      for (size_t r = 0; r < w; ++r) pair_.at(r, k) = cols[k][r];
    pair_inv_ = pair_.inverse();
  }

  void build_involution_data() {
    FieldPtr f = a_->field();
    symm_c_ = Subspace(f, a_->dim());
    symd_c_ = Subspace(f, a_->dim());
    Subspace skew_c(f, a_->dim());
    Subspace cspan(f, a_->dim());
    for (const auto& b : c_.basis()) {
      auto cb = a_->coords(b);
      cspan.add(cb);
      symd_c_.add(a_->coords(b + a_->sigma(b)));
    }
    symm_c_ = intersect(cspan, a_->symm_space());
    skew_c = intersect(cspan, a_->skew_space());
    bool symp = symd_c_.dim() < skew_c.dim() &&
                symd_c_.contains(a_->coords(a_->unit()));
    type_ = symp ? Type::symplectic : Type::orthogonal;
    has_involution_ = true;
  }

  void require_involution() const {
    if (!has_involution_)
      throw error("centralizer view: K is not inside the fixed elements");
  }

  const AlgebraWithInvolution* a_;
  Subalgebra c_;
  Matrix u_;
  Scalar cparam_;
  QuadExtPtr k_;
  Matrix pair_, pair_inv_;
  bool has_involution_ = false;
  Type type_ = Type::orthogonal;
  Subspace symm_c_{nullptr, 0}, symd_c_{nullptr, 0};
};

}  // namespace invol
