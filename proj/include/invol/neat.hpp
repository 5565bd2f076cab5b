#pragma once
// Neat commutative subalgebras of an algebra with involution: the four-part
// membership verdict, split neat subalgebras cut from a diagonalization of
// the invariant form, maximal etale subalgebras inside the symmetrized
// elements, square-separable elements, quadratic enlargements, certified
// biquadratic and triquadratic subalgebras, and sigma-stable quaternion
// subalgebras at capacity two.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "charpoly.hpp"
#include "errors.hpp"
#include "etale.hpp"
#include "field.hpp"
#include "kelem.hpp"
#include "matrix.hpp"
#include "poly.hpp"
#include "rng.hpp"

namespace invol {

// ---------------------------------------------------------------------------
// Search control
// ---------------------------------------------------------------------------

/// Budgets and seed for the bounded searches in this header. A span whose
/// cardinality fits in enumeration_budget is scanned exhaustively in
/// lexicographic coordinate order (last coordinate fastest); otherwise
/// candidates are drawn from a seeded generator, over Q with coordinates
/// taken from a window of small scalars. A search that runs out of budget
/// reports that honestly and never claims nonexistence.
struct SearchControl {
  SearchControl()
      : seed(0),
        enumeration_budget(kEnumerationBudget),
        sample_budget(1000000),
        rational_window(64) {}
  uint64_t seed;
  uint64_t enumeration_budget;
  uint64_t sample_budget;
  uint64_t rational_window;
};

namespace detail {

/// First element of the span of `gens` accepted by the predicate, excluding
/// zero, under the SearchControl policy. nullopt means the budget ran out.
template <typename Accept>
std::optional<Matrix> search_span(FieldPtr f, const std::vector<Matrix>& gens,
                                  const SearchControl& ctl, Accept&& accept) {
  if (gens.empty()) return std::nullopt;
  size_t n = gens.size();
  auto assemble = [&](const std::vector<uint64_t>& digits) {
    Matrix acc(f, gens[0].rows(), gens[0].cols());
    bool zero = true;
    for (size_t i = 0; i < n; ++i) {
      if (digits[i] == 0) continue;
      acc = acc + f->element(digits[i]) * gens[i];
      zero = false;
    }
    return std::make_pair(std::move(acc), zero);
  };
  bool enumerable = f->is_finite();
  if (enumerable) {
    uint64_t total = 1;
    for (size_t i = 0; i < n; ++i) {
      if (total > ctl.enumeration_budget / f->cardinality()) {
        enumerable = false;
        break;
      }
      total *= f->cardinality();
    }
  }
  if (enumerable) {
    std::vector<uint64_t> digits(n, 0);
    while (next_tuple(digits, f->cardinality())) {
      auto [m, zero] = assemble(digits);
      if (!zero && accept(m)) return m;
    }
    return std::nullopt;
  }
  uint64_t window = f->is_finite() ? f->cardinality() : ctl.rational_window;
  Rng rng(ctl.seed);
  for (uint64_t it = 0; it < ctl.sample_budget; ++it) {
    std::vector<uint64_t> digits(n);
    for (auto& d : digits) d = rng.below(window);
    auto [m, zero] = assemble(digits);
    if (!zero && accept(m)) return m;
  }
  return std::nullopt;
}

/// Matrices spanning the meet of a coordinate subspace of `a` with the span
/// of the given elements, realized back in the ambient space.
inline std::vector<Matrix> meet_space(const AlgebraWithInvolution& a,
                                      const Subspace& s,
                                      const std::vector<Matrix>& elems) {
  Subspace t(a.field(), a.dim());
  for (const Matrix& m : elems) t.add(a.coords(m));
  return a.space_matrices(intersect(s, t));
}

/// The scalar lambda with x = lambda * unit, when x lies on that line.
inline std::optional<Scalar> scalar_multiple_of_unit(
    const AlgebraWithInvolution& a, const Matrix& x) {
  auto cx = a.try_coords(x);
  if (!cx) return std::nullopt;
  std::vector<Scalar> cu = a.coords(a.unit());
  size_t i0 = cu.size();
  for (size_t i = 0; i < cu.size(); ++i)
    if (!cu[i].is_zero()) {
      i0 = i;
      break;
    }
  Scalar lam = (*cx)[i0] / cu[i0];
  for (size_t i = 0; i < cu.size(); ++i)
    if ((*cx)[i] != lam * cu[i]) return std::nullopt;
  return lam;
}

/// Independent spanning set of {x in span(mats) : x g = g x}.
inline std::vector<Matrix> centralize_step(std::vector<Matrix> mats,
                                           const Matrix& g) {
  if (mats.size() <= 1) return mats;
  FieldPtr f = g.field();
  size_t n = g.rows();
  Matrix m(f, n * n, mats.size());
  for (size_t k = 0; k < mats.size(); ++k) {
    auto v = vec_matrix(mats[k] * g - g * mats[k]);
    for (size_t r = 0; r < v.size(); ++r) m.at(r, k) = v[r];
  }
  std::vector<Matrix> next;
  for (const auto& combo : m.kernel()) {
    Matrix nm(f, n, n);
    for (size_t k = 0; k < combo.size(); ++k)
      if (!combo[k].is_zero()) nm = nm + combo[k] * mats[k];
    next.push_back(std::move(nm));
  }
  return next;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The neatness verdict
// ---------------------------------------------------------------------------

enum class NeatFailure { none, not_etale, not_in_symm, not_free, bad_idempotent };

inline std::string neat_failure_name(NeatFailure c) {
  switch (c) {
    case NeatFailure::none:
      return "none";
    case NeatFailure::not_etale:
      return "not_etale";
    case NeatFailure::not_in_symm:
      return "not_in_symm";
    case NeatFailure::not_free:
      return "not_free";
    default:
      return "bad_idempotent";
  }
}

/// Outcome of the neatness test: neat is true exactly when failed_condition
/// is none. The witness carries the offending element where one exists (a
/// basis element outside Symm, or an idempotent inside Symd).
struct NeatVerdict {
  NeatVerdict() : neat(false), failed_condition(NeatFailure::none) {}
  bool neat;
  NeatFailure failed_condition;
  std::optional<Matrix> witness;
};

/// Neatness of a commutative unital subalgebra L: etale, contained in
/// Symm(sigma), A free as a left L-module (equivalently
/// [L:F] * dim_F C_A(L) = dim_F A), and, in characteristic 2 with sigma
/// orthogonal, no nonzero idempotent of L inside Symd(sigma). The checks run
/// in that order and the verdict reports the first failure.
inline NeatVerdict is_neat(const AlgebraWithInvolution& a, const Subalgebra& l) {
  NeatVerdict v;
  if (!l.commutative() || !is_etale(l)) {
    v.failed_condition = NeatFailure::not_etale;
    return v;
  }
  if (!l.in_symm()) {
    v.failed_condition = NeatFailure::not_in_symm;
    for (const Matrix& b : l.basis())
      if (!a.in_symm(b)) {
        v.witness = b;
        break;
      }
    return v;
  }
  Subalgebra cent = centralizer(a, l.basis());
  if (l.dim() * cent.dim() != a.dim()) {
    v.failed_condition = NeatFailure::not_free;
    return v;
  }
  if (a.field()->characteristic() == 2 && a.type() == Type::orthogonal) {
    // A nonzero idempotent lies in Symd exactly when a primitive one does,
    // so the primitive decomposition settles the last condition.
    EtaleDescription d = idempotents(l);
    for (const Matrix& e : d.primitive_idempotents) {
      auto c = a.try_coords(e);
      if (c && a.symd_space().contains(*c)) {
        v.failed_condition = NeatFailure::bad_idempotent;
        v.witness = e;
        return v;
      }
    }
  }
  v.neat = true;
  return v;
}

/// Component data of an etale subalgebra: for each primitive idempotent e,
/// the component dimension l_i = [eL:F] and the degree d_i of the
/// centralizer of eL inside the corner eAe. Over a central ambient algebra
/// these satisfy
///   [L:F] * dim C_A(L) - dim A = sum_{i<j} l_i l_j (d_i - d_j)^2,
/// so L is free exactly when all d_i agree.
struct CornerDatum {
  Matrix idempotent;
  size_t component_dim;
  size_t centralizer_degree;
};

inline std::vector<CornerDatum> corner_degrees(const AlgebraWithInvolution& a,
                                               const Subalgebra& l) {
  std::vector<CornerDatum> out;
  EtaleDescription d = idempotents(l);
  for (const Matrix& e : d.primitive_idempotents) {
    std::vector<Matrix> lgens, agens;
    for (const Matrix& b : l.basis()) lgens.push_back(e * b);
    for (const Matrix& b : a.basis()) agens.push_back(e * b * e);
    Subalgebra li(&a, lgens, e);
    Subalgebra ai(&a, agens, e);
    std::vector<Matrix> mats = ai.basis();
    for (const Matrix& g : li.basis()) mats = detail::centralize_step(mats, g);
    size_t deg = 0;
    while ((deg + 1) * (deg + 1) * li.dim() <= mats.size()) ++deg;
    if (deg * deg * li.dim() != mats.size())
      throw error("corner degrees: centralizer dimension has no degree");
    out.push_back({e, li.dim(), deg});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Split neat subalgebras from the invariant form
// ---------------------------------------------------------------------------

namespace detail {

/// Gram matrix of the invariant form on the reduced module of a first kind
/// algebra: the (projectively unique) G with R(x)^t G = G R(sigma(x)).
inline Matrix invariant_gram(const AlgebraWithInvolution& a) {
  FieldPtr f = a.field();
  size_t d = a.module_dim();
  std::vector<Matrix> acts, sacts;
  for (const Matrix& b : a.basis()) {
    acts.push_back(a.reduced_action(b));
    sacts.push_back(a.reduced_action(a.sigma(b)));
  }
  Matrix sys(f, a.dim() * d * d, d * d);
  size_t row = 0;
  for (size_t t = 0; t < acts.size(); ++t) {
    const Matrix& r = acts[t];
    const Matrix& s = sacts[t];
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j, ++row)
        for (size_t k = 0; k < d; ++k) {
          sys.at(row, k * d + j) = sys.at(row, k * d + j) + r.at(k, i);
          sys.at(row, i * d + k) = sys.at(row, i * d + k) - s.at(k, j);
        }
  }
  auto ker = sys.kernel();
  if (ker.empty()) throw error("split neat: no invariant form on the module");
  Matrix g(f, d, d);
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j) g.at(i, j) = ker[0][i * d + j];
  if (!g.invertible()) throw error("split neat: invariant form is singular");
  for (size_t t = 0; t < acts.size(); ++t)
    if (acts[t].transpose() * g != g * sacts[t])
      throw error("split neat: invariant form check failed");
  return g;
}

inline Scalar eval_form(const Matrix& g, const std::vector<Scalar>& u,
                        const std::vector<Scalar>& v) {
  Scalar acc = g.field()->zero();
  for (size_t i = 0; i < u.size(); ++i) {
    if (u[i].is_zero()) continue;
    Scalar row = g.field()->zero();
    for (size_t j = 0; j < v.size(); ++j) row = row + g.at(i, j) * v[j];
    acc = acc + u[i] * row;
  }
  return acc;
}

inline void axpy(std::vector<Scalar>& w, const Scalar& c,
                 const std::vector<Scalar>& v) {
  for (size_t i = 0; i < w.size(); ++i) w[i] = w[i] + c * v[i];
}

/// Pairwise orthogonal anisotropic basis for a symmetric non-alternating
/// form. In characteristic 2 an alternating remainder is repaired with the
/// last anisotropic vector u and a hyperbolic pair (p, q): the three vectors
/// u + p, u + B(u,u) q, u + p + B(u,u) q are orthogonal anisotropic.
inline std::vector<std::vector<Scalar>> orthogonal_basis(FieldPtr f,
                                                         const Matrix& g) {
  size_t d = g.rows();
  std::vector<std::vector<Scalar>> rem, out;
  for (size_t i = 0; i < d; ++i) {
    std::vector<Scalar> e(d, f->zero());
    e[i] = f->one();
    rem.push_back(std::move(e));
  }
  while (!rem.empty()) {
    size_t pick = rem.size();
    for (size_t i = 0; i < rem.size(); ++i)
      if (!eval_form(g, rem[i], rem[i]).is_zero()) {
        pick = i;
        break;
      }
    if (pick == rem.size()) {
      size_t pi = rem.size(), qi = rem.size();
      for (size_t i = 0; i < rem.size() && qi == rem.size(); ++i)
        for (size_t j = i + 1; j < rem.size(); ++j)
          if (!eval_form(g, rem[i], rem[j]).is_zero()) {
            pi = i;
            qi = j;
            break;
          }
      if (qi == rem.size())
        throw error("split neat: degenerate remainder in diagonalization");
      if (f->characteristic() != 2) {
        // v_i + v_j is anisotropic since 2 B(v_i, v_j) != 0.
        axpy(rem[pi], f->one(), rem[qi]);
        pick = pi;
      } else {
        if (out.empty())
          throw error("split neat: alternating form in the orthogonal case");
        std::vector<Scalar> u = out.back();
        out.pop_back();
        std::vector<Scalar> p = rem[pi], q = rem[qi];
        rem.erase(rem.begin() + qi);
        rem.erase(rem.begin() + pi);
        Scalar scale = eval_form(g, p, q).inverse();
        for (auto& x : q) x = scale * x;
        for (auto& w : rem) {
          axpy(w, eval_form(g, q, w), p);
          axpy(w, eval_form(g, p, w), q);
        }
        Scalar aa = eval_form(g, u, u);
        std::vector<Scalar> u1 = u, u2 = u, u3 = u;
        axpy(u1, f->one(), p);
        axpy(u2, aa, q);
        axpy(u3, f->one(), p);
        axpy(u3, aa, q);
        out.push_back(std::move(u1));
        out.push_back(std::move(u2));
        out.push_back(std::move(u3));
        continue;
      }
    }
    std::vector<Scalar> v = rem[pick];
    rem.erase(rem.begin() + pick);
    Scalar nv = eval_form(g, v, v).inverse();
    for (auto& w : rem) axpy(w, -(eval_form(g, v, w) * nv), v);
    out.push_back(std::move(v));
  }
  return out;
}

/// Symplectic basis p_1, q_1, ..., p_m, q_m with B(p_i, q_i) = 1 and all
/// other pairings zero.
inline std::vector<std::vector<Scalar>> symplectic_basis(FieldPtr f,
                                                         const Matrix& g) {
  size_t d = g.rows();
  std::vector<std::vector<Scalar>> rem, out;
  for (size_t i = 0; i < d; ++i) {
    std::vector<Scalar> e(d, f->zero());
    e[i] = f->one();
    rem.push_back(std::move(e));
  }
  while (!rem.empty()) {
    std::vector<Scalar> p = rem.front();
    rem.erase(rem.begin());
    size_t qi = rem.size();
    for (size_t i = 0; i < rem.size(); ++i)
      if (!eval_form(g, p, rem[i]).is_zero()) {
        qi = i;
        break;
      }
    if (qi == rem.size())
      throw error("split neat: degenerate symplectic form");
    std::vector<Scalar> q = rem[qi];
    rem.erase(rem.begin() + qi);
    Scalar scale = eval_form(g, p, q).inverse();
    for (auto& x : q) x = scale * x;
    for (auto& w : rem) {
      axpy(w, eval_form(g, q, w), p);
      axpy(w, -eval_form(g, p, w), q);
    }
    out.push_back(std::move(p));
    out.push_back(std::move(q));
  }
  return out;
}

inline Matrix columns_matrix(FieldPtr f,
                             const std::vector<std::vector<Scalar>>& cols) {
  Matrix t(f, cols[0].size(), cols.size());
  for (size_t j = 0; j < cols.size(); ++j)
    for (size_t i = 0; i < cols[j].size(); ++i) t.at(i, j) = cols[j][i];
  return t;
}

/// The algebra element acting on the module as `action`, expressed through
/// the given spanning set of the relevant component.
inline Matrix element_from_action(const AlgebraWithInvolution& a,
                                  const std::vector<Matrix>& span,
                                  const Matrix& action) {
  FieldPtr f = a.field();
  const Matrix& mod = a.module_basis();
  size_t rows = mod.rows() * mod.cols();
  Matrix sys(f, rows, span.size());
  for (size_t k = 0; k < span.size(); ++k) {
    auto v = vec_matrix(span[k] * mod);
    for (size_t r = 0; r < rows; ++r) sys.at(r, k) = v[r];
  }
  auto c = sys.solve(vec_matrix(mod * action));
  if (!c) throw error("split neat: action does not lift to the algebra");
  Matrix out(f, a.ambient(), a.ambient());
  for (size_t k = 0; k < span.size(); ++k)
    if (!(*c)[k].is_zero()) out = out + (*c)[k] * span[k];
  return out;
}

/// Independent matrices spanning the distinguished component z A z of a
/// split-centre algebra.
inline std::vector<Matrix> component_span(const AlgebraWithInvolution& a) {
  FieldPtr f = a.field();
  size_t n = a.ambient();
  Subspace seen(f, n * n);
  std::vector<Matrix> out;
  const Matrix& z = a.zeta1();
  for (const Matrix& b : a.basis()) {
    Matrix m = z * b * z;
    if (seen.add(vec_matrix(m))) out.push_back(std::move(m));
  }
  return out;
}

// --- hermitian machinery over the quadratic field centre -------------------

using KMat = std::vector<std::vector<KElem>>;

inline KMat kmat_zero(QuadExtPtr k, size_t n) {
  return KMat(n, std::vector<KElem>(n, KElem::zero(k)));
}

inline KMat kmat_mul(const KMat& a, const KMat& b) {
  size_t n = a.size();
  QuadExtPtr k = a[0][0].ext();
  KMat out = kmat_zero(k, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      KElem acc = KElem::zero(k);
      for (size_t t = 0; t < n; ++t) acc = acc + a[i][t] * b[t][j];
      out[i][j] = acc;
    }
  return out;
}

inline KMat kmat_conj_t(const KMat& a) {
  size_t n = a.size();
  KMat out = kmat_zero(a[0][0].ext(), n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) out[i][j] = a[j][i].conj();
  return out;
}

inline KMat kmat_add(const KMat& a, const KMat& b) {
  size_t n = a.size();
  KMat out = kmat_zero(a[0][0].ext(), n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) out[i][j] = a[i][j] + b[i][j];
  return out;
}

inline bool kmat_is_zero(const KMat& a) {
  for (const auto& row : a)
    for (const auto& e : row)
      if (!e.is_zero()) return false;
  return true;
}

inline KMat kmat_scale(const KElem& c, const KMat& a) {
  size_t n = a.size();
  KMat out = kmat_zero(a[0][0].ext(), n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) out[i][j] = c * a[i][j];
  return out;
}

/// Gauss-Jordan inverse over the quadratic field.
inline KMat kmat_inverse(const KMat& a) {
  size_t n = a.size();
  QuadExtPtr k = a[0][0].ext();
  KMat m = a, inv = kmat_zero(k, n);
  for (size_t i = 0; i < n; ++i) inv[i][i] = KElem::one(k);
  for (size_t col = 0; col < n; ++col) {
    size_t piv = n;
    for (size_t r = col; r < n; ++r)
      if (!m[r][col].is_zero()) {
        piv = r;
        break;
      }
    if (piv == n) throw error("split neat: hermitian matrix is singular");
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    KElem s = m[col][col].inverse();
    for (size_t j = 0; j < n; ++j) {
      m[col][j] = s * m[col][j];
      inv[col][j] = s * inv[col][j];
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      KElem factor = m[r][col];
      for (size_t j = 0; j < n; ++j) {
        m[r][j] = m[r][j] - factor * m[col][j];
        inv[r][j] = inv[r][j] - factor * inv[col][j];
      }
    }
  }
  return inv;
}

/// Gram matrix of the invariant hermitian form on K^d: the (projectively
/// unique) H with conj(X)^t H = H Y for all basis actions X and their
/// sigma-partners Y, symmetrized to satisfy H = conj(H)^t.
inline KMat invariant_hermitian(const AlgebraWithInvolution& a) {
  FieldPtr f = a.field();
  QuadExtPtr k = a.quad_ext();
  const Scalar cp = k->param();
  size_t d = a.degree();
  std::vector<KMat> acts, sacts;
  for (const Matrix& b : a.basis()) {
    acts.push_back(a.k_action(b));
    sacts.push_back(a.k_action(a.sigma(b)));
  }
  size_t unknowns = 2 * d * d;
  Matrix sys(f, a.dim() * d * d * 2, unknowns);
  size_t row = 0;
  for (size_t t = 0; t < acts.size(); ++t) {
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j, row += 2) {
        for (size_t kk = 0; kk < d; ++kk) {
          // + conj(X[kk][i]) * H[kk][j]
          KElem xc = acts[t][kk][i].conj();
          size_t u = 2 * (kk * d + j);
          sys.at(row, u) = sys.at(row, u) + xc.a();
          sys.at(row, u + 1) = sys.at(row, u + 1) + xc.b() * cp;
          sys.at(row + 1, u) = sys.at(row + 1, u) + xc.b();
          sys.at(row + 1, u + 1) = sys.at(row + 1, u + 1) + xc.a() + xc.b();
          // - H[i][kk] * Y[kk][j]
          const KElem& yc = sacts[t][kk][j];
          size_t w = 2 * (i * d + kk);
          sys.at(row, w) = sys.at(row, w) - yc.a();
          sys.at(row, w + 1) = sys.at(row, w + 1) - yc.b() * cp;
          sys.at(row + 1, w) = sys.at(row + 1, w) - yc.b();
          sys.at(row + 1, w + 1) = sys.at(row + 1, w + 1) - yc.a() - yc.b();
        }
      }
  }
  auto ker = sys.kernel();
  if (ker.empty()) throw error("split neat: no invariant hermitian form");
  KMat h = kmat_zero(k, d);
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j)
      h[i][j] = KElem(k, ker[0][2 * (i * d + j)], ker[0][2 * (i * d + j) + 1]);
  KMat herm = kmat_add(h, kmat_conj_t(h));
  if (kmat_is_zero(herm)) {
    KMat th = kmat_scale(KElem::theta(k), h);
    herm = kmat_add(th, kmat_conj_t(th));
  }
  for (size_t t = 0; t < acts.size(); ++t) {
    KMat lhs = kmat_mul(kmat_conj_t(acts[t]), herm);
    KMat rhs = kmat_mul(herm, sacts[t]);
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j)
        if (!(lhs[i][j] - rhs[i][j]).is_zero())
          throw error("split neat: hermitian form check failed");
  }
  return herm;
}

/// Orthogonal basis of K^d for a nondegenerate hermitian form: columns with
/// h(v, v) a nonzero base scalar and distinct columns orthogonal. When every
/// remaining vector is isotropic, v_i + lambda v_j repairs one for a lambda
/// in {1, theta} since the trace form of a separable K is nondegenerate.
inline std::vector<std::vector<KElem>> hermitian_basis(QuadExtPtr k,
                                                       const KMat& h) {
  size_t d = h.size();
  auto pair_form = [&](const std::vector<KElem>& u,
                       const std::vector<KElem>& v) {
    KElem acc = KElem::zero(k);
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j) acc = acc + u[i].conj() * h[i][j] * v[j];
    return acc;
  };
  std::vector<std::vector<KElem>> rem, out;
  for (size_t i = 0; i < d; ++i) {
    std::vector<KElem> e(d, KElem::zero(k));
    e[i] = KElem::one(k);
    rem.push_back(std::move(e));
  }
  auto kaxpy = [&](std::vector<KElem>& w, const KElem& c,
                   const std::vector<KElem>& v) {
    for (size_t i = 0; i < w.size(); ++i) w[i] = w[i] + c * v[i];
  };
  while (!rem.empty()) {
    size_t pick = rem.size();
    for (size_t i = 0; i < rem.size(); ++i)
      if (!pair_form(rem[i], rem[i]).is_zero()) {
        pick = i;
        break;
      }
    if (pick == rem.size()) {
      size_t pi = rem.size(), qi = rem.size();
      for (size_t i = 0; i < rem.size() && qi == rem.size(); ++i)
        for (size_t j = i + 1; j < rem.size(); ++j)
          if (!pair_form(rem[i], rem[j]).is_zero()) {
            pi = i;
            qi = j;
            break;
          }
      if (qi == rem.size())
        throw error("split neat: degenerate hermitian remainder");
      KElem lam = KElem::one(k);
      std::vector<KElem> v = rem[pi];
      kaxpy(v, lam, rem[qi]);
      if (pair_form(v, v).is_zero()) {
        lam = KElem::theta(k);
        v = rem[pi];
        kaxpy(v, lam, rem[qi]);
      }
      if (pair_form(v, v).is_zero())
        throw error("split neat: hermitian repair failed");
      rem[pi] = std::move(v);
      pick = pi;
    }
    std::vector<KElem> v = rem[pick];
    rem.erase(rem.begin() + pick);
    KElem nv = pair_form(v, v).inverse();
    for (auto& w : rem) kaxpy(w, KElem::zero(k) - nv * pair_form(v, w), v);
    out.push_back(std::move(v));
  }
  return out;
}

/// Module realization of a K-linear map, laid out in the paired module
/// basis as 2x2 regular-representation blocks.
inline Matrix kmat_module_action(FieldPtr f, const KMat& p, const Scalar& cp) {
  size_t d = p.size();
  Matrix out(f, 2 * d, 2 * d);
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j)
      out.set_block(2 * i, 2 * j, kelem_block(f, p[i][j].a(), p[i][j].b(), cp));
  return out;
}

}  // namespace detail

/// Orthogonal family of r sigma-fixed idempotents cutting the reduced module
/// into r equal parts along a diagonalization of the invariant form. The
/// family spans the split neat subalgebra of degree r; requires r to divide
/// both the coindex and the capacity.
inline std::vector<Matrix> split_neat_idempotents(
    const AlgebraWithInvolution& a, size_t r) {
  if (r == 0 || a.coindex() % r != 0 || a.capacity() % r != 0)
    throw error("split neat: no split neat subalgebra of degree " +
                std::to_string(r));
  FieldPtr f = a.field();
  std::vector<Matrix> out;
  if (a.kind() == Kind::first) {
    Matrix g = detail::invariant_gram(a);
    std::vector<std::vector<Scalar>> cols =
        a.type() == Type::orthogonal ? detail::orthogonal_basis(f, g)
                                     : detail::symplectic_basis(f, g);
    Matrix t = detail::columns_matrix(f, cols);
    Matrix tinv = t.inverse();
    size_t d = a.module_dim();
    size_t step = d / r;
    for (size_t i = 0; i < r; ++i) {
      Matrix sel(f, d, d);
      for (size_t j = i * step; j < (i + 1) * step; ++j)
        sel.at(j, j) = f->one();
      out.push_back(detail::element_from_action(a, a.basis(), t * sel * tinv));
    }
  } else if (a.centre_tag() == CentreTag::quad_field) {
    QuadExtPtr k = a.quad_ext();
    const Scalar cp = k->param();
    detail::KMat h = detail::invariant_hermitian(a);
    std::vector<std::vector<KElem>> cols = detail::hermitian_basis(k, h);
    size_t d = a.degree();
    detail::KMat t = detail::kmat_zero(k, d);
    for (size_t j = 0; j < d; ++j)
      for (size_t i = 0; i < d; ++i) t[i][j] = cols[j][i];
    detail::KMat tinv = detail::kmat_inverse(t);
    size_t step = d / r;
    for (size_t i = 0; i < r; ++i) {
      detail::KMat sel = detail::kmat_zero(k, d);
      for (size_t j = i * step; j < (i + 1) * step; ++j)
        sel[j][j] = KElem::one(k);
      detail::KMat p = detail::kmat_mul(detail::kmat_mul(t, sel), tinv);
      Matrix action = detail::kmat_module_action(f, p, cp);
      out.push_back(detail::element_from_action(a, a.basis(), action));
    }
  } else {
    // Split centre: coordinate projections of the distinguished component's
    // module, symmetrized by e = g + sigma(g).
    std::vector<Matrix> span = detail::component_span(a);
    size_t d = a.module_dim();
    size_t step = d / r;
    for (size_t i = 0; i < r; ++i) {
      Matrix sel(f, d, d);
      for (size_t j = i * step; j < (i + 1) * step; ++j)
        sel.at(j, j) = f->one();
      Matrix g = detail::element_from_action(a, span, sel);
      out.push_back(g + a.sigma(g));
    }
  }
  Matrix sum(f, a.ambient(), a.ambient());
  for (size_t i = 0; i < out.size(); ++i) {
    if (out[i] * out[i] != out[i] || out[i].is_zero() ||
        a.sigma(out[i]) != out[i])
      throw error("split neat: construction failed verification");
    for (size_t j = i + 1; j < out.size(); ++j)
      if (!(out[i] * out[j]).is_zero())
        throw error("split neat: construction failed verification");
    sum = sum + out[i];
  }
  if (sum != a.unit())
    throw error("split neat: construction failed verification");
  return out;
}

/// Split neat subalgebra of degree r: the span of the idempotent family
/// above, re-checked through the neatness verdict.
inline Subalgebra split_neat(const AlgebraWithInvolution& a, size_t r) {
  std::vector<Matrix> es = split_neat_idempotents(a, r);
  Subalgebra l(&a, es);
  if (l.dim() != r || !is_neat(a, l).neat)
    throw error("split neat: construction failed verification");
  return l;
}

// ---------------------------------------------------------------------------
// Maximal etale subalgebras
// ---------------------------------------------------------------------------

/// Maximal etale subalgebra inside Syms(sigma); its degree is the capacity.
/// Over a finite field: bounded search for an invertible symmetrized
/// generator with separable characteristic polynomial; if the search misses,
/// the split construction is used. Over Q the split construction is used
/// directly. Throws "not found (budget)" only when both routes fail.
inline Subalgebra max_etale(const AlgebraWithInvolution& a,
                            SearchControl ctl = {}) {
  size_t kappa = a.capacity();
  if (a.field()->is_finite()) {
    std::vector<Matrix> gens = a.space_matrices(a.syms_space());
    auto found =
        detail::search_span(a.field(), gens, ctl, [&](const Matrix& x) {
          if (!x.invertible()) return false;
          ChiResult r = chi(a, x);
          if (r.chi.discriminant().is_zero()) return false;
          return Subalgebra(&a, {x}).dim() == kappa;
        });
    if (found) return Subalgebra(&a, {*found});
  }
  try {
    return split_neat(a, kappa);
  } catch (const error&) {
    throw budget_exhausted("max etale: not found (budget)");
  }
}

/// Maximal etale subalgebra containing a given neat subalgebra K, searched
/// corner by corner over the primitive idempotents of K.
inline Subalgebra max_etale(const AlgebraWithInvolution& a,
                            const Subalgebra& k, SearchControl ctl = {}) {
  if (!is_neat(a, k).neat)
    throw error("max etale: given subalgebra is not neat");
  FieldPtr f = a.field();
  EtaleDescription kd = idempotents(k);
  std::vector<Matrix> gens = k.basis();
  for (const Matrix& e : kd.primitive_idempotents) {
    AlgebraWithInvolution b = corner(a, e);
    size_t target = b.capacity();
    std::vector<Matrix> kgens;
    for (const Matrix& x : k.basis()) kgens.push_back(e * x);
    Subalgebra ke(&a, kgens, e);
    Subalgebra cent = centralizer(b, ke.basis());
    Subspace cspan(f, b.dim());
    for (const Matrix& m : cent.basis()) cspan.add(b.coords(m));
    std::vector<Matrix> cand =
        b.space_matrices(intersect(b.syms_space(), cspan));
    auto build = [&](const Matrix& x) {
      std::vector<Matrix> g = ke.basis();
      g.push_back(x);
      return Subalgebra(&a, g, e);
    };
    auto found =
        detail::search_span(f, cand, ctl, [&](const Matrix& x) {
          Subalgebra li = build(x);
          if (li.dim() != target || !li.commutative()) return false;
          return is_etale(li) && li.in_symm();
        });
    if (!found) throw budget_exhausted("max etale: not found (budget)");
    Subalgebra li = build(*found);
    for (const Matrix& m : li.basis()) gens.push_back(m);
  }
  Subalgebra l(&a, gens);
  if (l.dim() != a.capacity() || !is_etale(l) || !is_neat(a, l).neat)
    throw error("max etale: construction failed verification");
  for (const Matrix& x : k.basis())
    if (!l.contains(x))
      throw error("max etale: construction failed verification");
  return l;
}

// ---------------------------------------------------------------------------
// Square-separable elements and quadratic enlargement
// ---------------------------------------------------------------------------

/// Invertible symmetrized element a skew to a neat quadratic K (a k =
/// gamma(k) a for the nontrivial automorphism gamma of K) whose
/// characteristic polynomial is even: chi_a(X) = f(X^2) with f monic
/// separable. small_field_warning flags base fields too small for the
/// existence guarantee behind the search.
struct SquareSeparable {
  Matrix a;
  Poly even_part;
  bool small_field_warning;
};

namespace detail {

/// Acceptance filter shared by the square-separable searches; fills
/// even_part on success.
inline bool square_separable_accept(const AlgebraWithInvolution& a,
                                    const Matrix& x, Poly& even_part) {
  if (!x.invertible() || !a.in_syms(x)) return false;
  ChiResult r = chi(a, x);
  int m = r.chi.degree();
  if (m % 2 != 0) return false;
  for (int j = 1; j < m; j += 2)
    if (!r.chi.coeff(j).is_zero()) return false;
  std::vector<Scalar> fc;
  for (int j = 0; j <= m; j += 2) fc.push_back(r.chi.coeff(j));
  Poly f(a.field(), fc);
  if (!f.is_separable()) return false;
  even_part = f;
  return true;
}

}  // namespace detail

inline SquareSeparable square_separable_search(const AlgebraWithInvolution& a,
                                               const Subalgebra& k,
                                               SearchControl ctl = {}) {
  if (k.dim() != 2 || !is_neat(a, k).neat)
    throw error("square separable: K is not a neat quadratic subalgebra");
  QuadraticSplit qs = quadratic_split(a, k);
  std::vector<Matrix> cand =
      detail::meet_space(a, a.syms_space(), qs.c_prime_basis);
  Poly even = Poly(a.field());
  auto found = detail::search_span(a.field(), cand, ctl, [&](const Matrix& x) {
    return detail::square_separable_accept(a, x, even);
  });
  if (!found) throw budget_exhausted("square separable: not found (budget)");
  bool warn =
      a.field()->is_finite() && a.field()->cardinality() <= a.capacity();
  return {*found, even, warn};
}

/// Neat subalgebra L of degree capacity/2 commuting with a neat quadratic K
/// such that KL is neat of degree capacity. For capacity 2 the scalars
/// qualify. For split K, matching split components are found corner by
/// corner and paired. For a field K, the square of a square-separable
/// element generates L.
inline Subalgebra extend_neat_quadratic(const AlgebraWithInvolution& a,
                                        const Subalgebra& k,
                                        SearchControl ctl = {}) {
  if (k.dim() != 2 || !is_neat(a, k).neat)
    throw error("extend neat quadratic: K is not neat");
  FieldPtr f = a.field();
  size_t kappa = a.capacity();
  auto construct = [&]() -> Subalgebra {
    if (kappa == 2) return Subalgebra(&a, {});
    auto gen = quadratic_generator(a, k);
    if (!QuadExt::get(f, gen.second)->is_field()) {
      EtaleDescription kd = idempotents(k, gen.first);
      std::vector<std::vector<Matrix>> parts;
      for (const Matrix& e : kd.primitive_idempotents) {
        AlgebraWithInvolution b = corner(a, e);
        if (b.capacity() * 2 != kappa)
          throw error("extend neat quadratic: unbalanced corners");
        std::vector<Matrix> cand = b.space_matrices(b.syms_space());
        auto found =
            detail::search_span(f, cand, ctl, [&](const Matrix& x) {
              Subalgebra li(&a, {x}, e);
              if (li.dim() * 2 != kappa || !li.in_symm()) return false;
              Poly mu = li.min_poly(x);
              if (!mu.is_separable()) return false;
              return mu.roots(ctl.enumeration_budget).size() ==
                     static_cast<size_t>(mu.degree());
            });
        if (!found)
          throw budget_exhausted("extend neat quadratic: not found (budget)");
        Subalgebra li(&a, {*found}, e);
        parts.push_back(idempotents(li, *found).primitive_idempotents);
      }
      std::vector<Matrix> lgens;
      for (size_t j = 0; j < parts[0].size(); ++j)
        lgens.push_back(parts[0][j] + parts[1][j]);
      return Subalgebra(&a, lgens);
    }
    // Field K: search a square-separable element whose square generates a
    // half-capacity subalgebra.
    QuadraticSplit qs = quadratic_split(a, k);
    std::vector<Matrix> cand =
        detail::meet_space(a, a.syms_space(), qs.c_prime_basis);
    Poly even = Poly(f);
    auto found =
        detail::search_span(f, cand, ctl, [&](const Matrix& x) {
          if (!detail::square_separable_accept(a, x, even)) return false;
          return Subalgebra(&a, {x * x}).dim() * 2 == kappa;
        });
    if (!found)
      throw budget_exhausted("extend neat quadratic: not found (budget)");
    return Subalgebra(&a, {*found * *found});
  };
  Subalgebra l = construct();
  if (l.dim() * 2 != kappa && kappa != 2)
    throw error("extend neat quadratic: construction failed verification");
  if (!is_neat(a, l).neat)
    throw error("extend neat quadratic: construction failed verification");
  for (const Matrix& x : l.basis())
    for (const Matrix& y : k.basis())
      if (x * y != y * x)
        throw error("extend neat quadratic: construction failed verification");
  std::vector<Matrix> pg = k.basis();
  for (const Matrix& x : l.basis()) pg.push_back(x);
  Subalgebra kl(&a, pg);
  if (kl.dim() != k.dim() * l.dim() || kl.dim() != kappa ||
      !is_neat(a, kl).neat)
    throw error("extend neat quadratic: construction failed verification");
  return l;
}

// ---------------------------------------------------------------------------
// Vanishing first and third coefficients
// ---------------------------------------------------------------------------

/// Symmetrized element outside the scalars whose characteristic polynomial
/// has c_1 = c_3 = 0, for capacity divisible by 4. A split neat degree-2
/// family yields a witness directly (e_1 - e_2 away from characteristic 2,
/// e_1 in characteristic 2); a bounded search is the fallback.
inline Matrix find_c1c3_zero(const AlgebraWithInvolution& a,
                             SearchControl ctl = {}) {
  if (a.capacity() % 4 != 0)
    throw error("find c1c3 zero: capacity is not a multiple of 4");
  FieldPtr f = a.field();
  auto good = [&](const Matrix& x) {
    if (!a.in_syms(x)) return false;
    if (detail::scalar_multiple_of_unit(a, x)) return false;
    ChiResult r = chi(a, x);
    return r.c[0].is_zero() && r.c[2].is_zero();
  };
  try {
    std::vector<Matrix> es = split_neat_idempotents(a, 2);
    Matrix x = f->characteristic() == 2 ? es[0] : es[0] - es[1];
    if (good(x)) return x;
  } catch (const error&) {
  }
  auto found = detail::search_span(
      f, a.space_matrices(a.syms_space()), ctl, good);
  if (!found) throw budget_exhausted("find c1c3 zero: not found (budget)");
  return *found;
}

// ---------------------------------------------------------------------------
// Certified subalgebras
// ---------------------------------------------------------------------------

/// A constructed subalgebra together with generators witnessing its shape:
/// kind is one of "biquadratic", "triquadratic", "quaternion". Generators of
/// the etale kinds each generate a quadratic etale subalgebra, commute
/// pairwise, and together generate the subalgebra; the quaternion kind
/// carries the quadratic generator of K and the anticommuting unit.
struct EtaleCertificate {
  std::string kind;
  std::vector<Matrix> generators;
};

struct CertifiedSubalgebra {
  Subalgebra l;
  EtaleCertificate certificate;
};

/// sigma-stable neat biquadratic etale subalgebra (degree 4 generated by two
/// commuting quadratic etale subalgebras) of an algebra of capacity 4. With
/// zero divisors present the split pair starts the construction; otherwise a
/// c_1 = c_3 = 0 element provides the first quadratic subalgebra, repaired
/// inside its centralizer in characteristic 2 if inseparable.
inline CertifiedSubalgebra neat_biquadratic(const AlgebraWithInvolution& a,
                                            SearchControl ctl = {}) {
  if (a.capacity() != 4) throw error("neat biquadratic: capacity is not 4");
  FieldPtr f = a.field();
  std::optional<Subalgebra> kopt;
  if (a.degree() > a.index()) {
    kopt = split_neat(a, 2);
  } else {
    Matrix x = find_c1c3_zero(a, ctl);
    Matrix x2 = x * x;
    Subalgebra e = detail::scalar_multiple_of_unit(a, x2)
                       ? Subalgebra(&a, {x})
                       : Subalgebra(&a, {x2});
    if (e.dim() != 2) throw error("neat biquadratic: quadratic step failed");
    if (is_etale(e)) {
      kopt = e;
    } else {
      Subalgebra cent = centralizer(a, e.basis());
      std::vector<Matrix> cand =
          detail::meet_space(a, a.symm_space(), cent.basis());
      auto found =
          detail::search_span(f, cand, ctl, [&](const Matrix& y) {
            if (e.contains(y)) return false;
            return e.contains(y * y + y);
          });
      if (!found)
        throw budget_exhausted("neat biquadratic: not found (budget)");
      kopt = Subalgebra(&a, {*found * *found});
      if (kopt->dim() != 2 || !is_etale(*kopt))
        throw error("neat biquadratic: quadratic step failed");
    }
  }
  Subalgebra l = extend_neat_quadratic(a, *kopt, ctl);
  std::vector<Matrix> gens = kopt->basis();
  for (const Matrix& b : l.basis()) gens.push_back(b);
  Subalgebra kl(&a, gens);
  Matrix uk = quadratic_generator(a, *kopt).first;
  Matrix ul = quadratic_generator(a, l).first;
  if (kl.dim() != 4 || !is_neat(a, kl).neat || uk * ul != ul * uk ||
      Subalgebra(&a, {uk}).dim() != 2 || Subalgebra(&a, {ul}).dim() != 2 ||
      Subalgebra(&a, {uk, ul}).dim() != 4)
    throw error("neat biquadratic: construction failed verification");
  return {kl, {"biquadratic", {uk, ul}}};
}

/// sigma-stable quaternion subalgebra containing a neat quadratic K in a
/// capacity-2 algebra: K plus a symmetric element anticommuting with K whose
/// square is a nonzero scalar. Existence is guaranteed by nondegeneracy of
/// the form on the skew component, so exhaustion is a hard error.
inline CertifiedSubalgebra stable_quaternion_cap2(
    const AlgebraWithInvolution& a, const Subalgebra& k,
    SearchControl ctl = {}) {
  if (a.capacity() != 2)
    throw error("stable quaternion: capacity is not 2");
  if (k.dim() != 2 || !is_neat(a, k).neat)
    throw error("stable quaternion: K is not a neat quadratic subalgebra");
  QuadraticSplit qs = quadratic_split(a, k);
  std::vector<Matrix> cand =
      detail::meet_space(a, a.symm_space(), qs.c_prime_basis);
  auto found = detail::search_span(a.field(), cand, ctl, [&](const Matrix& x) {
    auto lam = detail::scalar_multiple_of_unit(a, x * x);
    return lam.has_value() && !lam->is_zero();
  });
  if (!found)
    throw error(
        "stable quaternion: search exhausted despite guaranteed existence");
  std::vector<Matrix> gens = k.basis();
  gens.push_back(*found);
  Subalgebra q(&a, gens);
  if (q.dim() != 4)
    throw error("stable quaternion: construction failed verification");
  for (const Matrix& b : q.basis())
    if (!q.contains(a.sigma(b)))
      throw error("stable quaternion: construction failed verification");
  return {q, {"quaternion", {qs.u, *found}}};
}

/// sigma-stable triquadratic etale subalgebra of a symplectic algebra of
/// degree 8, containing a split biquadratic neat L: each corner of a
/// primitive idempotent e supplies an idempotent g with sigma(g) = e - g,
/// and their sum h satisfies h + sigma(h) = 1, so M = L[h] is etale of
/// degree 8 and sigma-stable with three commuting quadratic generators.
inline CertifiedSubalgebra triquadratic_split(const AlgebraWithInvolution& a,
                                              const Subalgebra& l,
                                              SearchControl ctl = {}) {
  if (a.type() != Type::symplectic || a.degree() != 8)
    throw error("triquadratic: algebra must be symplectic of degree 8");
  if (l.dim() != 4 || !is_neat(a, l).neat)
    throw error("triquadratic: L is not neat");
  EtaleDescription ld = idempotents(l);
  if (!ld.split || ld.primitive_idempotents.size() != 4)
    throw error("triquadratic: L is not split biquadratic");
  FieldPtr f = a.field();
  Matrix h(f, a.ambient(), a.ambient());
  for (const Matrix& e : ld.primitive_idempotents) {
    AlgebraWithInvolution b = corner(a, e);
    if (b.type() != Type::symplectic)
      throw error("triquadratic: corner is not symplectic");
    auto found =
        detail::search_span(f, b.basis(), ctl, [&](const Matrix& x) {
          if (x * x != x || x == e) return false;
          return a.sigma(x) == e - x;
        });
    if (!found) throw budget_exhausted("triquadratic: not found (budget)");
    h = h + *found;
  }
  if (h * h != h || h + a.sigma(h) != a.unit())
    throw error("triquadratic: construction failed verification");
  std::vector<Matrix> gens = l.basis();
  gens.push_back(h);
  Subalgebra m(&a, gens);
  if (m.dim() != 8 || !m.commutative() || !is_etale(m))
    throw error("triquadratic: construction failed verification");
  for (const Matrix& b : m.basis())
    if (!m.contains(a.sigma(b)))
      throw error("triquadratic: construction failed verification");
  const auto& es = ld.primitive_idempotents;
  Matrix g1 = es[0] + es[1];
  Matrix g2 = es[0] + es[2];
  if (Subalgebra(&a, {g1}).dim() != 2 || Subalgebra(&a, {g2}).dim() != 2 ||
      Subalgebra(&a, {h}).dim() != 2 ||
      Subalgebra(&a, {g1, g2, h}).dim() != 8)
    throw error("triquadratic: construction failed verification");
  return {m, {"triquadratic", {g1, g2, h}}};
}

}  // namespace invol
