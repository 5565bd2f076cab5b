#pragma once

// Concrete models of algebras with involution over an exact field F:
// an F-subspace of an ambient matrix space closed under multiplication,
// a designated unit, and an F-linear involution, together with the derived
// classification data (kind, type, degree, capacity), the symmetrized
// subspaces, and a reduced module that realizes the reduced characteristic
// polynomial as an honest characteristic polynomial.
//
// Validation at construction:
//   - basis independent, span multiplicatively closed, unit two-sided;
//   - sigma maps the span to itself, sigma^2 = id, sigma(xy) = sigma(y)sigma(x)
//     on all basis pairs, sigma(unit) = unit;
//   - the centre is etale of dimension 1 or 2; dimension 2 requires sigma to
//     act nontrivially on it (either as the conjugation of a quadratic field
//     extension or by swapping two split components), so that the fixed part
//     of the centre is exactly F times the unit;
//   - the F-dimension is (a double of) a perfect square, giving the degree;
//   - a cyclic module of the reduced dimension exists inside the ambient
//     column space and carries the algebra action.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "kelem.hpp"
#include "matrix.hpp"
#include "poly.hpp"

namespace invol {

enum class Kind { first, second };
enum class Type { orthogonal, symplectic, unitary };
enum class CentreTag { base, quad_field, split };

inline std::string kind_name(Kind k) {
  return k == Kind::first ? "first" : "second";
}
inline std::string type_name(Type t) {
  switch (t) {
    case Type::orthogonal: return "orthogonal";
    case Type::symplectic: return "symplectic";
    default: return "unitary";
  }
}

inline std::vector<Scalar> vec_matrix(const Matrix& m) {
  std::vector<Scalar> v;
  v.reserve(m.rows() * m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) v.push_back(m.at(i, j));
  return v;
}

inline Matrix mat_from_vec(FieldPtr f, size_t n,
                           const std::vector<Scalar>& v) {
  if (v.size() != n * n) throw error("mat_from_vec: size mismatch");
  Matrix m(f, n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m.at(i, j) = v[i * n + j];
  return m;
}

/// Exact solver for B c = y with a fixed full-column-rank B: pivot rows are
/// located once, then each solve is a small multiply plus a verification.
class ColumnSolver {
 public:
  ColumnSolver() = default;
  explicit ColumnSolver(Matrix b) : b_(std::move(b)) {
    Matrix t = b_.transpose();
    t.rref();
    size_t r = 0;
    for (size_t j = 0; j < t.cols() && r < t.rows(); ++j) {
      if (!t.at(r, j).is_zero()) {
        pivot_rows_.push_back(j);
        ++r;
      }
    }
    if (pivot_rows_.size() != b_.cols())
      throw error("column solver: columns are dependent");
    Matrix square(b_.field(), b_.cols(), b_.cols());
    for (size_t i = 0; i < pivot_rows_.size(); ++i)
      for (size_t j = 0; j < b_.cols(); ++j)
        square.at(i, j) = b_.at(pivot_rows_[i], j);
    inv_ = square.inverse();
  }

  size_t cols() const { return b_.cols(); }

  std::optional<std::vector<Scalar>> solve(
      const std::vector<Scalar>& y) const {
    if (y.size() != b_.rows()) throw error("column solver: size mismatch");
    FieldPtr f = b_.field();
    std::vector<Scalar> c(b_.cols(), f->zero());
    for (size_t i = 0; i < b_.cols(); ++i) {
      Scalar acc = f->zero();
      for (size_t j = 0; j < b_.cols(); ++j)
        acc += inv_.at(i, j) * y[pivot_rows_[j]];
      c[i] = acc;
    }
    for (size_t r = 0; r < b_.rows(); ++r) {
      Scalar acc = f->zero();
      for (size_t j = 0; j < b_.cols(); ++j) acc += b_.at(r, j) * c[j];
      if (acc != y[r]) return std::nullopt;
    }
    return c;
  }

 private:
  Matrix b_;
  Matrix inv_;
  std::vector<size_t> pivot_rows_;
};

class AlgebraWithInvolution {
 public:
  struct BuildOptions {
    BuildOptions() : trusted_closure(false) {}
    // Caller guarantees multiplicative closure structurally (canonical
    // builders, corners); otherwise every basis product is membership-checked.
    bool trusted_closure;
    // Closed-form sigma used to validate the anti-automorphism law without
    // coordinate solves; must agree with sigma_images on the basis.
    std::function<Matrix(const Matrix&)> sigma_fn;
    // Designated central idempotent pair (zeta1, zeta2) for a split centre;
    // fixes which component reduced characteristic polynomials refer to.
    std::optional<std::pair<Matrix, Matrix>> split_centre_hint;
  };

  AlgebraWithInvolution(FieldPtr f, size_t ambient, std::vector<Matrix> basis,
                        std::vector<Matrix> sigma_images, Matrix unit,
                        std::string model, BuildOptions opts = {})
      : f_(f),
        ambient_(ambient),
        basis_(std::move(basis)),
        sigma_images_(std::move(sigma_images)),
        unit_(std::move(unit)),
        model_(std::move(model)) {
    if (basis_.empty()) throw error("algebra: empty basis");
    if (sigma_images_.size() != basis_.size())
      throw error("algebra: involution images do not match basis");
    for (const auto& b : basis_)
      if (b.rows() != ambient_ || b.cols() != ambient_ || b.field() != f_)
        throw error("algebra: basis element has wrong shape or field");
    build_solver();
    validate_unit();
    validate_sigma(opts);
    compute_centre(opts);
    compute_degree();
    compute_spaces();
    classify_type();
    build_module();
  }

  FieldPtr field() const { return f_; }
  size_t ambient() const { return ambient_; }
  size_t dim() const { return basis_.size(); }
  const std::vector<Matrix>& basis() const { return basis_; }
  const std::vector<Matrix>& sigma_images() const { return sigma_images_; }
  const Matrix& unit() const { return unit_; }
  const std::string& model() const { return model_; }

  Kind kind() const { return kind_; }
  Type type() const { return type_; }
  CentreTag centre_tag() const { return centre_tag_; }
  size_t degree() const { return degree_; }
  size_t capacity() const { return capacity_; }
  size_t index() const { return 1; }  // every supported model is split
  size_t coindex() const { return degree_; }

  QuadExtPtr quad_ext() const {
    if (centre_tag_ == CentreTag::base)
      throw error("algebra: centre is the base field");
    return k_;
  }
  /// z with z^2 - z = c times the unit generating the centre (second kind).
  const Matrix& centre_generator() const {
    if (centre_tag_ == CentreTag::base)
      throw error("algebra: centre is the base field");
    return z_;
  }
  const Matrix& zeta1() const { return require_split(), zeta1_; }
  const Matrix& zeta2() const { return require_split(), zeta2_; }

  bool contains(const Matrix& x) const { return try_coords(x).has_value(); }
  std::optional<std::vector<Scalar>> try_coords(const Matrix& x) const {
    if (x.rows() != ambient_ || x.cols() != ambient_ || x.field() != f_)
      return std::nullopt;
    return solver_.solve(vec_matrix(x));
  }
  std::vector<Scalar> coords(const Matrix& x) const {
    auto c = try_coords(x);
    if (!c) throw error("algebra: element lies outside the span");
    return *c;
  }
  Matrix from_coords(const std::vector<Scalar>& c) const {
    if (c.size() != dim()) throw error("algebra: coordinate size mismatch");
    Matrix acc(f_, ambient_, ambient_);
    for (size_t i = 0; i < dim(); ++i) {
      if (c[i].is_zero()) continue;
      acc = acc + c[i] * basis_[i];
    }
    return acc;
  }

  Matrix sigma(const Matrix& x) const {
    auto c = coords(x);
    Matrix acc(f_, ambient_, ambient_);
    for (size_t i = 0; i < dim(); ++i) {
      if (c[i].is_zero()) continue;
      acc = acc + c[i] * sigma_images_[i];
    }
    return acc;
  }

  /// Symmetrized subspaces in algebra coordinates.
  const Subspace& symm_space() const { return symm_; }
  const Subspace& skew_space() const { return skew_; }
  const Subspace& symd_space() const { return symd_; }
  const Subspace& syms_space() const {
    return type_ == Type::symplectic ? symd_ : symm_;
  }
  bool in_symm(const Matrix& x) const {
    auto c = try_coords(x);
    return c && symm_.contains(*c);
  }
  bool in_syms(const Matrix& x) const {
    auto c = try_coords(x);
    return c && syms_space().contains(*c);
  }
  std::vector<Matrix> space_matrices(const Subspace& s) const {
    std::vector<Matrix> out;
    for (const auto& row : s.basis()) out.push_back(from_coords(row));
    return out;
  }

  /// Reduced module: an A-invariant column space on which the algebra acts
  /// with its reduced degree. For a quadratic field centre the columns come
  /// in pairs (v, z v), realizing the centre action as the stored extension.
  size_t module_dim() const { return module_.cols(); }
  const Matrix& module_basis() const { return module_; }

  Matrix reduced_action(const Matrix& x) const {
    Matrix xw = x * module_;
    auto r = module_solver_.solve_matrix(xw);
    if (!r) throw error("algebra: element does not preserve the module");
    return *r;
  }

  /// Action as a matrix over the centre extension K (quadratic field or
  /// split centre); entries are read off the paired module basis.
  std::vector<std::vector<KElem>> k_action(const Matrix& x) const {
    if (centre_tag_ != CentreTag::quad_field)
      throw error("algebra: centre is not a quadratic field");
    Matrix r = reduced_action(x);
    size_t d = degree_;
    const Scalar& c = k_->param();
    std::vector<std::vector<KElem>> out;
    out.reserve(d);
    for (size_t i = 0; i < d; ++i) {
      std::vector<KElem> row;
      row.reserve(d);
      for (size_t j = 0; j < d; ++j) {
        Scalar a = r.at(2 * i, 2 * j);
        Scalar b = r.at(2 * i + 1, 2 * j);
        // action on the z-partner column is determined by K-linearity
        if (r.at(2 * i, 2 * j + 1) != c * b ||
            r.at(2 * i + 1, 2 * j + 1) != a + b)
          throw error("algebra: action is not linear over the centre");
        row.push_back(KElem(k_, a, b));
      }
      out.push_back(std::move(row));
    }
    return out;
  }

  std::string describe() const {
    return model_ + " over " + f_->describe() + ", " + kind_name(kind_) +
           " kind, " + type_name(type_) + ", degree " +
           std::to_string(degree_) + ", capacity " + std::to_string(capacity_);
  }

 private:
  // Matrix-valued variant of ColumnSolver::solve, column by column.
  struct ModuleSolver {
    ColumnSolver cs;
    std::optional<Matrix> solve_matrix(const Matrix& y) const {
      Matrix r(y.field(), cs.cols(), y.cols());
      std::vector<Scalar> col(y.rows(), y.field()->zero());
      for (size_t j = 0; j < y.cols(); ++j) {
        for (size_t i = 0; i < y.rows(); ++i) col[i] = y.at(i, j);
        auto c = cs.solve(col);
        if (!c) return std::nullopt;
        for (size_t i = 0; i < cs.cols(); ++i) r.at(i, j) = (*c)[i];
      }
      return r;
    }
  };

  void build_solver() {
    Matrix b(f_, ambient_ * ambient_, dim());
    for (size_t k = 0; k < dim(); ++k) {
      auto v = vec_matrix(basis_[k]);
      for (size_t r = 0; r < v.size(); ++r) b.at(r, k) = v[r];
    }
    try {
      solver_ = ColumnSolver(std::move(b));
    } catch (const error&) {
      throw error("algebra: basis is linearly dependent");
    }
  }

  void validate_unit() {
    if (!contains(unit_)) throw error("algebra: unit outside the span");
    for (const auto& b : basis_) {
      if (unit_ * b != b || b * unit_ != b)
        throw error("algebra: unit is not a two-sided identity");
    }
  }

  void validate_sigma(const BuildOptions& opts) {
    for (const auto& s : sigma_images_)
      if (!contains(s))
        throw error("algebra: involution image outside the span");
    // sigma^2 = id on the coordinate matrix.
    sigma_mat_ = Matrix(f_, dim(), dim());
    for (size_t j = 0; j < dim(); ++j) {
      auto c = coords(sigma_images_[j]);
      for (size_t i = 0; i < dim(); ++i) sigma_mat_.at(i, j) = c[i];
    }
    if (sigma_mat_ * sigma_mat_ != Matrix::identity(f_, dim()))
      throw error("algebra: involution does not square to the identity");
    if (sigma(unit_) != unit_)
      throw error("algebra: involution moves the unit");
    // Anti-automorphism law on all basis pairs; closure of products rides
    // along when the caller could not guarantee it structurally.
    for (size_t i = 0; i < dim(); ++i) {
      for (size_t j = 0; j < dim(); ++j) {
        Matrix prod = basis_[i] * basis_[j];
        if (!opts.trusted_closure && !contains(prod))
          throw error("algebra: span is not multiplicatively closed");
        Matrix lhs = opts.sigma_fn && opts.trusted_closure
                         ? opts.sigma_fn(prod)
                         : sigma(prod);  // membership check included
        if (lhs != sigma_images_[j] * sigma_images_[i])
          throw error("algebra: involution is not an anti-automorphism");
      }
    }
  }

  void compute_centre(const BuildOptions& opts) {
    // Intersect the kernels of the commutator maps x -> x b - b x over the
    // basis; once only multiples of the unit survive we may stop, since the
    // unit commutes with everything.
    std::vector<std::vector<Scalar>> coords_list;
    std::vector<Matrix> mats = basis_;
    for (size_t i = 0; i < dim(); ++i) {
      std::vector<Scalar> c(dim(), f_->zero());
      c[i] = f_->one();
      coords_list.push_back(std::move(c));
    }
    for (size_t j = 0; j < dim() && mats.size() > 1; ++j) {
      Matrix m(f_, ambient_ * ambient_, mats.size());
      for (size_t k = 0; k < mats.size(); ++k) {
        auto v = vec_matrix(mats[k] * basis_[j] - basis_[j] * mats[k]);
        for (size_t r = 0; r < v.size(); ++r) m.at(r, k) = v[r];
      }
      auto ker = m.kernel();
      std::vector<std::vector<Scalar>> next_coords;
      std::vector<Matrix> next_mats;
      for (const auto& combo : ker) {
        std::vector<Scalar> nc(dim(), f_->zero());
        Matrix nm(f_, ambient_, ambient_);
        for (size_t k = 0; k < combo.size(); ++k) {
          if (combo[k].is_zero()) continue;
          for (size_t t = 0; t < dim(); ++t)
            nc[t] += combo[k] * coords_list[k][t];
          nm = nm + combo[k] * mats[k];
        }
        next_coords.push_back(std::move(nc));
        next_mats.push_back(std::move(nm));
      }
      coords_list = std::move(next_coords);
      mats = std::move(next_mats);
    }
    size_t zdim = mats.size();
    if (zdim == 0 || zdim > 2)
      throw error("algebra: centre has dimension " + std::to_string(zdim));
    if (zdim == 1) {
      centre_tag_ = CentreTag::base;
      kind_ = Kind::first;
      return;
    }
    kind_ = Kind::second;
    // Pick a central element independent from the unit and normalize it to
    // u with u^2 - u = c * unit; this is possible exactly when the centre
    // is etale.
    Matrix g = mats[0];
    {
      Matrix two(f_, ambient_ * ambient_, 1);
      auto uv = vec_matrix(unit_);
      for (size_t r = 0; r < uv.size(); ++r) two.at(r, 0) = uv[r];
      if (two.solve(vec_matrix(g)).has_value()) g = mats[1];
    }
    Matrix pair(f_, ambient_ * ambient_, 2);
    {
      auto uv = vec_matrix(unit_);
      auto gv = vec_matrix(g);
      for (size_t r = 0; r < uv.size(); ++r) {
        pair.at(r, 0) = uv[r];
        pair.at(r, 1) = gv[r];
      }
    }
    auto sq = pair.solve(vec_matrix(g * g));
    if (!sq) throw error("algebra: centre is not closed");
    Scalar beta = (*sq)[0], alpha = (*sq)[1];
    Scalar c(f_->zero());
    Matrix u(f_, ambient_, ambient_);
    if (f_->characteristic() == 2) {
      if (alpha.is_zero()) throw error("algebra: centre is not etale");
      Scalar lam = alpha.inverse();
      u = lam * g;
      c = lam * lam * beta;
    } else {
      Scalar mu = (f_->one() - alpha) / f_->from_int(2);
      u = g + mu * unit_;
      c = beta + mu * mu - mu;
    }
    k_ = QuadExt::get(f_, c);  // rejects an inseparable centre
    z_ = u;
    Matrix su = sigma(u);
    if (su == u)
      throw error("algebra: involution fixes the centre pointwise");
    if (su != unit_ - u)
      throw error("algebra: involution does not act on the centre");
    if (opts.split_centre_hint) {
      zeta1_ = opts.split_centre_hint->first;
      zeta2_ = opts.split_centre_hint->second;
      validate_zetas();
      centre_tag_ = CentreTag::split;
      // Normalize the stored generator so that z acts as 0 on the designated
      // component and as 1 on the other.
      z_ = zeta2_;
      k_ = QuadExt::get(f_, f_->zero());
      return;
    }
    if (k_->is_field()) {
      centre_tag_ = CentreTag::quad_field;
      return;
    }
    centre_tag_ = CentreTag::split;
    Scalar ra = *k_->split_root();
    Scalar rb = f_->one() - ra;
    Scalar r1 = Scalar::canonical_less(ra, rb) ? ra : rb;
    Scalar r2 = f_->one() - r1;
    Scalar inv = (r1 - r2).inverse();
    zeta1_ = inv * (z_ - r2 * unit_);
    zeta2_ = unit_ - zeta1_;
    validate_zetas();
    z_ = r1 * zeta1_ + r2 * zeta2_;
  }

  void validate_zetas() {
    if (zeta1_ * zeta1_ != zeta1_ || zeta2_ * zeta2_ != zeta2_ ||
        !(zeta1_ * zeta2_).is_zero() || zeta1_ + zeta2_ != unit_)
      throw error("algebra: invalid split-centre idempotents");
    if (sigma(zeta1_) != zeta2_)
      throw error("algebra: involution does not swap the split components");
    for (const auto& b : basis_) {
      if (zeta1_ * b != b * zeta1_)
        throw error("algebra: split-centre idempotents are not central");
    }
  }

  void compute_degree() {
    size_t over_centre = dim();
    if (centre_tag_ != CentreTag::base) {
      if (over_centre % 2 != 0)
        throw error("algebra: dimension is odd over a quadratic centre");
      over_centre /= 2;
    }
    size_t d = 0;
    while ((d + 1) * (d + 1) <= over_centre) ++d;
    if (d * d != over_centre)
      throw error("algebra: dimension over the centre is not a square");
    degree_ = d;
  }

  void compute_spaces() {
    Matrix id = Matrix::identity(f_, dim());
    Matrix plus = sigma_mat_ + id;
    Matrix minus = sigma_mat_ - id;
    symm_ = Subspace(f_, dim());
    for (const auto& v : minus.kernel()) symm_.add(v);
    skew_ = Subspace(f_, dim());
    for (const auto& v : plus.kernel()) skew_.add(v);
    symd_ = Subspace(f_, dim());
    for (size_t j = 0; j < dim(); ++j) {
      std::vector<Scalar> col(dim());
      for (size_t i = 0; i < dim(); ++i) col[i] = plus.at(i, j);
      symd_.add(std::move(col));
    }
    // x -> x + sigma(x) has kernel Skew and image Symd.
    if (skew_.dim() + symd_.dim() != dim())
      throw error("algebra: symmetrization rank mismatch");
    // The fixed part of the centre must be exactly F times the unit.
    Subspace centre(f_, dim());
    centre.add(coords(unit_));
    if (centre_tag_ != CentreTag::base) centre.add(coords(z_));
    Subspace fixed_centre = intersect(centre, symm_);
    if (fixed_centre.dim() != 1 || !fixed_centre.contains(coords(unit_)))
      throw error("algebra: fixed centre is larger than the base field");
  }

  void classify_type() {
    if (kind_ == Kind::second) {
      type_ = Type::unitary;
      capacity_ = degree_;
      return;
    }
    bool symplectic = symd_.dim() < skew_.dim() && symd_.contains(coords(unit_));
    type_ = symplectic ? Type::symplectic : Type::orthogonal;
    if (symplectic) {
      if (degree_ % 2 != 0)
        throw error("algebra: symplectic degree must be even");
      capacity_ = degree_ / 2;
    } else {
      capacity_ = degree_;
    }
  }

  void build_module() {
    size_t want = centre_tag_ == CentreTag::quad_field ? 2 * degree_ : degree_;
    for (size_t j = 0; j < ambient_; ++j) {
      std::vector<Scalar> seed(ambient_, f_->zero());
      seed[j] = f_->one();
      if (centre_tag_ == CentreTag::split) {
        // Module of the designated component.
        std::vector<Scalar> s2(ambient_, f_->zero());
        for (size_t r = 0; r < ambient_; ++r) s2[r] = zeta1_.at(r, j);
        seed = std::move(s2);
        bool zero = true;
        for (const auto& x : seed) zero = zero && x.is_zero();
        if (zero) continue;
      }
      Subspace orbit(f_, ambient_);
      std::vector<std::vector<Scalar>> cols;
      for (const auto& b : basis_) {
        std::vector<Scalar> w(ambient_, f_->zero());
        for (size_t r = 0; r < ambient_; ++r)
          for (size_t t = 0; t < ambient_; ++t)
            w[r] += b.at(r, t) * seed[t];
        if (orbit.add(w)) cols.push_back(std::move(w));
      }
      if (orbit.dim() != want) continue;
      if (centre_tag_ == CentreTag::quad_field) {
        arrange_paired_module(cols);
      } else {
        module_ = Matrix(f_, ambient_, want);
        for (size_t k = 0; k < cols.size(); ++k)
          for (size_t r = 0; r < ambient_; ++r)
            module_.at(r, k) = cols[k][r];
      }
      module_solver_.cs = ColumnSolver(module_);
      return;
    }
    throw error("algebra: no reduced module found");
  }

  void arrange_paired_module(const std::vector<std::vector<Scalar>>& cols) {
    // Greedy K-basis of the orbit: take each new column together with its
    // image under the centre generator z.
    Subspace seen(f_, ambient_);
    std::vector<std::vector<Scalar>> paired;
    for (const auto& v : cols) {
      if (seen.contains(v)) continue;
      std::vector<Scalar> zv(ambient_, f_->zero());
      for (size_t r = 0; r < ambient_; ++r)
        for (size_t t = 0; t < ambient_; ++t) zv[r] += z_.at(r, t) * v[t];
      seen.add(v);
      seen.add(zv);
      paired.push_back(v);
      paired.push_back(std::move(zv));
    }
    if (paired.size() != 2 * degree_)
      throw error("algebra: centre pairing failed on the module");
    module_ = Matrix(f_, ambient_, paired.size());
    for (size_t k = 0; k < paired.size(); ++k)
      for (size_t r = 0; r < ambient_; ++r)
        module_.at(r, k) = paired[k][r];
  }

  void require_split() const {
    if (centre_tag_ != CentreTag::split)
      throw error("algebra: centre is not split");
  }

  FieldPtr f_;
  size_t ambient_;
  std::vector<Matrix> basis_;
  std::vector<Matrix> sigma_images_;
  Matrix unit_;
  std::string model_;
  ColumnSolver solver_;
  Matrix sigma_mat_;
  Kind kind_ = Kind::first;
  Type type_ = Type::orthogonal;
  CentreTag centre_tag_ = CentreTag::base;
  size_t degree_ = 0, capacity_ = 0;
  QuadExtPtr k_ = nullptr;
  Matrix z_, zeta1_, zeta2_;
  Subspace symm_{nullptr, 0}, skew_{nullptr, 0}, symd_{nullptr, 0};
  Matrix module_;
  ModuleSolver module_solver_;
};

struct Classification {
  Kind kind;
  Type type;
};
inline Classification classify(const AlgebraWithInvolution& a) {
  return {a.kind(), a.type()};
}

struct SymmetrizedSpaces {
  std::vector<Matrix> symm, skew, symd, syms;
  size_t capacity;
};
inline SymmetrizedSpaces symmetrized_spaces(const AlgebraWithInvolution& a) {
  return {a.space_matrices(a.symm_space()), a.space_matrices(a.skew_space()),
          a.space_matrices(a.symd_space()), a.space_matrices(a.syms_space()),
          a.capacity()};
}

// ---------------------------------------------------------------------------
// Canonical model builders
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<Matrix> matrix_units(FieldPtr f, size_t n) {
  std::vector<Matrix> b;
  b.reserve(n * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      Matrix e(f, n, n);
      e.at(i, j) = f->one();
      b.push_back(std::move(e));
    }
  }
  return b;
}

}  // namespace detail

/// (M_n(F), transpose): the basic orthogonal model.
inline AlgebraWithInvolution transpose_model(FieldPtr f, size_t n) {
  auto basis = detail::matrix_units(f, n);
  std::vector<Matrix> images;
  for (const auto& b : basis) images.push_back(b.transpose());
  AlgebraWithInvolution::BuildOptions opts;
  opts.trusted_closure = true;
  opts.sigma_fn = [](const Matrix& x) { return x.transpose(); };
  return AlgebraWithInvolution(f, n, std::move(basis), std::move(images),
                               Matrix::identity(f, n),
                               "matrix(" + std::to_string(n) + ")", opts);
}

/// (M_n(F), Int(m) o t) for invertible m with m^t = m or m^t = -m. The
/// requested type must match what m determines: symmetric non-alternating m
/// gives an orthogonal involution, alternating m a symplectic one.
inline AlgebraWithInvolution int_mt_model(FieldPtr f, const Matrix& m,
                                          Type requested) {
  size_t n = m.rows();
  if (!m.is_square() || m.field() != f) throw error("int-mt: bad form matrix");
  if (!m.invertible()) throw error("int-mt: form matrix is singular");
  bool symmetric = m.transpose() == m;
  bool antisymmetric = m.transpose() == -m;
  if (!symmetric && !antisymmetric)
    throw error("int-mt: form matrix must be symmetric or antisymmetric");
  bool alternating = antisymmetric;
  if (f->characteristic() == 2) {
    alternating = true;
    for (size_t i = 0; i < n; ++i)
      if (!m.at(i, i).is_zero()) alternating = false;
  }
  Type determined = alternating ? Type::symplectic : Type::orthogonal;
  if (determined != requested)
    throw error(requested == Type::orthogonal
                    ? "int-mt: alternating form cannot give an orthogonal "
                      "involution"
                    : "int-mt: non-alternating form cannot give a symplectic "
                      "involution");
  Matrix minv = m.inverse();
  auto sig = [m, minv](const Matrix& x) { return m * x.transpose() * minv; };
  auto basis = detail::matrix_units(f, n);
  std::vector<Matrix> images;
  for (const auto& b : basis) images.push_back(sig(b));
  AlgebraWithInvolution::BuildOptions opts;
  opts.trusted_closure = true;
  opts.sigma_fn = sig;
  return AlgebraWithInvolution(f, n, std::move(basis), std::move(images),
                               Matrix::identity(f, n),
                               "int-mt(" + std::to_string(n) + ")", opts);
}

/// J = [[0, I], [-I, 0]] of size n = 2m.
inline Matrix symplectic_form(FieldPtr f, size_t n) {
  if (n % 2 != 0) throw error("symplectic form needs even size");
  Matrix j(f, n, n);
  for (size_t i = 0; i < n / 2; ++i) {
    j.at(i, n / 2 + i) = f->one();
    j.at(n / 2 + i, i) = -f->one();
  }
  return j;
}

/// (M_{2m}(F), s) with s = Int(J) o t: the canonical symplectic model,
/// hyperbolic pairs (e_i, e_{m+i}).
inline AlgebraWithInvolution symplectic_model(FieldPtr f, size_t n) {
  auto a = int_mt_model(f, symplectic_form(f, n), Type::symplectic);
  return a;
}

/// (M_d(F) x M_d(F)^op, switch) stored block-diagonally: (alpha, beta^op) is
/// kept as alpha x beta^t, under which the switch involution becomes
/// x -> S x^t S for the block swap S.
inline AlgebraWithInvolution switch_model(FieldPtr f, size_t d) {
  size_t n = 2 * d;
  Matrix s(f, n, n);
  for (size_t i = 0; i < d; ++i) {
    s.at(i, d + i) = f->one();
    s.at(d + i, i) = f->one();
  }
  auto sig = [s](const Matrix& x) { return s * x.transpose() * s; };
  std::vector<Matrix> basis;
  for (size_t blk = 0; blk < 2; ++blk) {
    size_t off = blk * d;
    for (size_t i = 0; i < d; ++i) {
      for (size_t j = 0; j < d; ++j) {
        Matrix e(f, n, n);
        e.at(off + i, off + j) = f->one();
        basis.push_back(std::move(e));
      }
    }
  }
  std::vector<Matrix> images;
  for (const auto& b : basis) images.push_back(sig(b));
  Matrix zeta1(f, n, n), zeta2(f, n, n);
  for (size_t i = 0; i < d; ++i) {
    zeta1.at(i, i) = f->one();
    zeta2.at(d + i, d + i) = f->one();
  }
  AlgebraWithInvolution::BuildOptions opts;
  opts.trusted_closure = true;
  opts.sigma_fn = sig;
  opts.split_centre_hint = std::make_pair(zeta1, zeta2);
  return AlgebraWithInvolution(f, n, std::move(basis), std::move(images),
                               Matrix::identity(f, n),
                               "switch(" + std::to_string(d) + ")", opts);
}

/// Smallest c (in canonical order) making X^2 - X - c irreducible over F.
inline Scalar smallest_field_param(FieldPtr f) {
  if (f->is_finite()) {
    for (uint64_t i = 0; i < f->cardinality(); ++i) {
      Scalar c = f->element(i);
      if (f->characteristic() != 2 &&
          (f->from_int(4) * c + f->one()).is_zero())
        continue;
      if (QuadExt::get(f, c)->is_field()) return c;
    }
    throw error("no quadratic field extension parameter found");
  }
  for (uint64_t i = 0; i < 64; ++i) {
    Scalar c = f->element(i);
    if ((f->from_int(4) * c + f->one()).is_zero()) continue;
    if (QuadExt::get(f, c)->is_field()) return c;
  }
  throw error("no quadratic field extension parameter found");
}

/// 2x2 block realizing multiplication by a + b*theta on the basis (1, theta).
inline Matrix kelem_block(FieldPtr f, const Scalar& a, const Scalar& b,
                          const Scalar& c) {
  Matrix m(f, 2, 2);
  m.at(0, 0) = a;
  m.at(0, 1) = b * c;
  m.at(1, 0) = b;
  m.at(1, 1) = a + b;
  return m;
}

/// (M_d(K), unitary adjoint of the diagonal hermitian form h) for the
/// quadratic field K = F[theta], theta^2 = theta + c, realized inside
/// M_{2d}(F) by the regular representation of K. The entries of h must be
/// nonzero elements of F (such diagonals are automatically hermitian).
inline AlgebraWithInvolution unitary_model(FieldPtr f, size_t d,
                                           const Scalar& c,
                                           std::vector<Scalar> h) {
  QuadExtPtr k = QuadExt::get(f, c);
  if (!k->is_field())
    throw error("unitary model: defining polynomial is not irreducible");
  if (h.size() != d) throw error("unitary model: hermitian diagonal size");
  for (const auto& x : h)
    if (x.is_zero() || x.field() != f)
      throw error("unitary model: hermitian form is singular");
  size_t n = 2 * d;
  // sigma(x)[i][j] = (h_j / h_i) * conj(x[j][i]) over K.
  auto sig = [f, d, c, h](const Matrix& x) {
    Matrix out(x.field(), 2 * d, 2 * d);
    for (size_t i = 0; i < d; ++i) {
      for (size_t j = 0; j < d; ++j) {
        Scalar a = x.at(2 * j, 2 * i);
        Scalar b = x.at(2 * j + 1, 2 * i);
        // conj(a + b theta) = (a + b) - b theta
        Scalar ca = a + b, cb = -b;
        Scalar scale = h[j] / h[i];
        out.set_block(2 * i, 2 * j,
                      kelem_block(f, scale * ca, scale * cb, c));
      }
    }
    return out;
  };
  std::vector<Matrix> basis;
  for (int with_theta = 0; with_theta < 2; ++with_theta) {
    for (size_t i = 0; i < d; ++i) {
      for (size_t j = 0; j < d; ++j) {
        Matrix e(f, n, n);
        e.set_block(2 * i, 2 * j,
                    kelem_block(f, with_theta ? f->zero() : f->one(),
                                with_theta ? f->one() : f->zero(), c));
        basis.push_back(std::move(e));
      }
    }
  }
  std::vector<Matrix> images;
  for (const auto& b : basis) images.push_back(sig(b));
  AlgebraWithInvolution::BuildOptions opts;
  opts.trusted_closure = true;
  opts.sigma_fn = sig;
  return AlgebraWithInvolution(f, n, std::move(basis), std::move(images),
                               Matrix::identity(f, n),
                               "unitary(" + std::to_string(d) + ")", opts);
}

inline AlgebraWithInvolution unitary_model_default(FieldPtr f, size_t d) {
  return unitary_model(f, d, smallest_field_param(f),
                       std::vector<Scalar>(d, f->one()));
}

/// diag(alpha, alpha): the embedding of (M_m(F), t) into (M_{2m}(F), s).
inline Matrix phi_embed(const Matrix& alpha) {
  size_t m = alpha.rows();
  Matrix out(alpha.field(), 2 * m, 2 * m);
  out.set_block(0, 0, alpha);
  out.set_block(m, m, alpha);
  return out;
}

/// The image of phi as a standalone algebra with involution: a copy of
/// (M_m(F), t) acting diagonally on two copies of the column space.
inline AlgebraWithInvolution phi_image_model(FieldPtr f, size_t m) {
  std::vector<Matrix> basis;
  for (const auto& e : detail::matrix_units(f, m))
    basis.push_back(phi_embed(e));
  std::vector<Matrix> images;
  for (const auto& b : basis) images.push_back(b.transpose());
  AlgebraWithInvolution::BuildOptions opts;
  opts.trusted_closure = true;
  opts.sigma_fn = [](const Matrix& x) { return x.transpose(); };
  return AlgebraWithInvolution(f, 2 * m, std::move(basis), std::move(images),
                               Matrix::identity(f, 2 * m),
                               "phi-image(" + std::to_string(m) + ")", opts);
}

/// Corner algebra (eAe, sigma restricted) for a sigma-fixed idempotent e.
inline AlgebraWithInvolution corner(const AlgebraWithInvolution& a,
                                    const Matrix& e) {
  if (!a.contains(e)) throw error("corner: idempotent outside the algebra");
  if (e * e != e) throw error("corner: not an idempotent");
  if (e.is_zero()) throw error("corner: idempotent is zero");
  if (a.sigma(e) != e) throw error("corner: idempotent is not fixed");
  Subspace span(a.field(), a.ambient() * a.ambient());
  std::vector<Matrix> basis;
  for (const auto& b : a.basis()) {
    Matrix c = e * b * e;
    if (span.add(vec_matrix(c))) basis.push_back(std::move(c));
  }
  // Canonicalize so equal corners get equal bases.
  std::vector<Matrix> canon;
  for (const auto& row : span.basis())
    canon.push_back(mat_from_vec(a.field(), a.ambient(), row));
  std::vector<Matrix> images;
  for (const auto& b : canon) images.push_back(a.sigma(b));
  AlgebraWithInvolution::BuildOptions opts;
  opts.trusted_closure = true;  // e(eae)(ebe)e stays in eAe
  return AlgebraWithInvolution(a.field(), a.ambient(), std::move(canon),
                               std::move(images), e,
                               "corner of " + a.model(), opts);
}

// ---------------------------------------------------------------------------
// Subalgebras
// ---------------------------------------------------------------------------

/// An F-subspace of an algebra, closed under multiplication and containing
/// its own unit (the parent's unit unless specified, e.g. for corner-local
/// subalgebras). Flags are recomputed from the data, never trusted.
class Subalgebra {
 public:
  Subalgebra(const AlgebraWithInvolution* parent, std::vector<Matrix> gens,
             std::optional<Matrix> unit = std::nullopt)
      : parent_(parent),
        unit_(unit.value_or(parent->unit())) {
    FieldPtr f = parent_->field();
    size_t n = parent_->ambient();
    Subspace span(f, n * n);
    std::vector<Matrix> mats;
    auto push = [&](const Matrix& m) {
      if (!parent_->contains(m))
        throw error("subalgebra: generator outside the parent algebra");
      if (span.add(vec_matrix(m))) mats.push_back(m);
    };
    push(unit_);
    for (const auto& g : gens) push(g);
    // Close under multiplication.
    for (size_t lo = 0; lo < mats.size();) {
      size_t hi = mats.size();
      for (size_t i = 0; i < hi; ++i) {
        for (size_t j = (i < lo ? lo : 0); j < hi; ++j) {
          Matrix p = mats[i] * mats[j];
          if (span.add(vec_matrix(p))) mats.push_back(std::move(p));
        }
      }
      lo = hi;
    }
    for (const auto& row : span.basis())
      basis_.push_back(mat_from_vec(f, n, row));
    for (const auto& b : basis_) {
      if (unit_ * b != b || b * unit_ != b)
        throw error("subalgebra: unit is not an identity on the span");
    }
    Matrix bm(f, n * n, basis_.size());
    for (size_t k = 0; k < basis_.size(); ++k) {
      auto v = vec_matrix(basis_[k]);
      for (size_t r = 0; r < v.size(); ++r) bm.at(r, k) = v[r];
    }
    solver_ = ColumnSolver(std::move(bm));
    commutative_ = true;
    for (size_t i = 0; i < basis_.size() && commutative_; ++i)
      for (size_t j = i + 1; j < basis_.size() && commutative_; ++j)
        commutative_ = basis_[i] * basis_[j] == basis_[j] * basis_[i];
    in_symm_ = true;
    for (const auto& b : basis_)
      in_symm_ = in_symm_ && parent_->in_symm(b);
  }

  const AlgebraWithInvolution& parent() const { return *parent_; }
  const std::vector<Matrix>& basis() const { return basis_; }
  const Matrix& unit() const { return unit_; }
  size_t dim() const { return basis_.size(); }
  bool commutative() const { return commutative_; }
  bool in_symm() const { return in_symm_; }

  bool contains(const Matrix& x) const {
    return x.rows() == parent_->ambient() && x.field() == parent_->field() &&
           solver_.solve(vec_matrix(x)).has_value();
  }
  std::vector<Scalar> coords(const Matrix& x) const {
    auto c = solver_.solve(vec_matrix(x));
    if (!c) throw error("subalgebra: element outside the span");
    return *c;
  }
  Matrix from_coords(const std::vector<Scalar>& c) const {
    if (c.size() != dim()) throw error("subalgebra: coordinate size");
    Matrix acc(parent_->field(), parent_->ambient(), parent_->ambient());
    for (size_t i = 0; i < dim(); ++i)
      if (!c[i].is_zero()) acc = acc + c[i] * basis_[i];
    return acc;
  }

  /// Matrix of left multiplication by x on the subalgebra's own basis.
  Matrix left_mult_matrix(const Matrix& x) const {
    Matrix m(parent_->field(), dim(), dim());
    for (size_t j = 0; j < dim(); ++j) {
      auto c = coords(x * basis_[j]);
      for (size_t i = 0; i < dim(); ++i) m.at(i, j) = c[i];
    }
    return m;
  }

  /// Minimal polynomial of x over F inside this subalgebra.
  Poly min_poly(const Matrix& x) const {
    FieldPtr f = parent_->field();
    Subspace powers(f, parent_->ambient() * parent_->ambient());
    std::vector<Matrix> pw;
    Matrix cur = unit_;
    while (powers.add(vec_matrix(cur))) {
      pw.push_back(cur);
      cur = cur * x;
    }
    // cur is now a combination of lower powers.
    Matrix m(f, parent_->ambient() * parent_->ambient(), pw.size());
    for (size_t k = 0; k < pw.size(); ++k) {
      auto v = vec_matrix(pw[k]);
      for (size_t r = 0; r < v.size(); ++r) m.at(r, k) = v[r];
    }
    auto sol = m.solve(vec_matrix(cur));
    if (!sol) throw error("subalgebra: minimal polynomial solve failed");
    std::vector<Scalar> coeffs;
    for (const auto& s : *sol) coeffs.push_back(-s);
    coeffs.push_back(f->one());
    return Poly(f, std::move(coeffs));
  }

 private:
  const AlgebraWithInvolution* parent_;
  Matrix unit_;
  std::vector<Matrix> basis_;
  ColumnSolver solver_;
  bool commutative_ = false;
  bool in_symm_ = false;
};

/// C_A(L): everything in A commuting with the given generators.
inline Subalgebra centralizer(const AlgebraWithInvolution& a,
                              const std::vector<Matrix>& gens) {
  FieldPtr f = a.field();
  size_t n = a.ambient();
  std::vector<Matrix> mats = a.basis();
  for (const auto& g : gens) {
    if (!a.contains(g))
      throw error("centralizer: generator outside the algebra");
    if (mats.size() <= 1) break;
    Matrix m(f, n * n, mats.size());
    for (size_t k = 0; k < mats.size(); ++k) {
      auto v = vec_matrix(mats[k] * g - g * mats[k]);
      for (size_t r = 0; r < v.size(); ++r) m.at(r, k) = v[r];
    }
    auto ker = m.kernel();
    std::vector<Matrix> next;
    for (const auto& combo : ker) {
      Matrix nm(f, n, n);
      for (size_t k = 0; k < combo.size(); ++k)
        if (!combo[k].is_zero()) nm = nm + combo[k] * mats[k];
      next.push_back(std::move(nm));
    }
    mats = std::move(next);
  }
  return Subalgebra(&a, std::move(mats));
}

inline Subalgebra centralizer(const AlgebraWithInvolution& a,
                              const Subalgebra& l) {
  return centralizer(a, l.basis());
}

// ---------------------------------------------------------------------------
// The projection split along a quadratic etale subalgebra
// ---------------------------------------------------------------------------

/// Data of the decomposition A = C + C' along a quadratic etale K in
/// Symm(sigma) with dim C_A(K) = dim A / 2: C is the centralizer, C' the
/// twisted centralizer {x : xk = conj(k)x}, and phi the projection onto C
/// with kernel C'.
struct QuadraticSplit {
  Subalgebra c;
  std::vector<Matrix> c_prime_basis;
  Matrix u;       // generator of K with u^2 - u = cparam * unit
  Scalar cparam;  // the Artin-Schreier style constant
};

/// Normalized generator u of a quadratic subalgebra K = span(unit, g):
/// u with u^2 - u in F * unit. Exists exactly when K is etale-capable;
/// characteristic 2 additionally needs g's square term, which vanishing
/// would make K inseparable.
inline std::pair<Matrix, Scalar> quadratic_generator(
    const AlgebraWithInvolution& a, const Subalgebra& k) {
  if (k.dim() != 2) throw error("quadratic generator: dimension is not 2");
  FieldPtr f = a.field();
  // Pick a basis element independent from the unit.
  Matrix g = k.basis()[0];
  {
    Subspace unit_span(f, a.ambient() * a.ambient());
    unit_span.add(vec_matrix(k.unit()));
    if (unit_span.contains(vec_matrix(g))) g = k.basis()[1];
  }
  auto c2 = k.coords(g * g);
  auto cu = k.coords(k.unit());
  auto cg = k.coords(g);
  // Solve g^2 = alpha g + beta unit in the 2-dimensional span.
  Matrix m(f, 2, 2);
  m.at(0, 0) = cu[0];
  m.at(0, 1) = cg[0];
  m.at(1, 0) = cu[1];
  m.at(1, 1) = cg[1];
  auto sol = m.solve({c2[0], c2[1]});
  if (!sol) throw error("quadratic generator: span is not closed");
  Scalar beta = (*sol)[0], alpha = (*sol)[1];
  if (f->characteristic() == 2) {
    if (alpha.is_zero())
      throw error("quadratic generator: subalgebra is inseparable");
    Scalar lam = alpha.inverse();
    return {lam * g, lam * lam * beta};
  }
  Scalar mu = (f->one() - alpha) / f->from_int(2);
  return {g + mu * k.unit(), beta + mu * mu - mu};
}

/// The projection with image C_A(u) and kernel C' = {x : ux + xu = x}, for
/// any u with u^2 - u = cparam * 1 and 4 cparam + 1 invertible. Needs no
/// involution; see quadratic_split for the validated wrapper.
inline Matrix quadratic_projection(const Matrix& u, const Scalar& cparam,
                                   const Matrix& x) {
  FieldPtr f = x.field();
  Scalar denom = f->from_int(4) * cparam + f->one();
  if (denom.is_zero()) throw error("quadratic projection: inseparable");
  Scalar inv = denom.inverse();
  Scalar lead = f->from_int(2) * cparam + f->one();
  return inv * (lead * x - u * x - x * u + f->from_int(2) * (u * x * u));
}

inline QuadraticSplit quadratic_split(const AlgebraWithInvolution& a,
                                      const Subalgebra& k) {
  FieldPtr f = a.field();
  if (k.dim() != 2 || !k.commutative())
    throw error("quadratic split: K must be quadratic commutative");
  if (!k.in_symm())
    throw error("quadratic split: K must consist of fixed elements");
  auto [u, c] = quadratic_generator(a, k);
  Scalar denom = f->from_int(4) * c + f->one();
  if (denom.is_zero())
    throw error("quadratic split: inseparable K");  // cannot happen if etale
  Subalgebra cent = centralizer(a, {u});
  if (2 * cent.dim() != a.dim())
    throw error("quadratic split: centralizer has wrong dimension");
  auto phi = [u = u, c](const Matrix& x) {
    return quadratic_projection(u, c, x);
  };
  // C' = kernel of phi = image of (id - phi).
  Subspace cps(f, a.ambient() * a.ambient());
  std::vector<Matrix> cpb;
  for (const auto& b : a.basis()) {
    Matrix r = b - phi(b);
    if (cps.add(vec_matrix(r)))
      cpb.push_back(mat_from_vec(f, a.ambient(), vec_matrix(r)));
  }
  std::vector<Matrix> canon;
  for (const auto& row : cps.basis())
    canon.push_back(mat_from_vec(f, a.ambient(), row));
  if (canon.size() != cent.dim())
    throw error("quadratic split: projection rank mismatch");
  return QuadraticSplit{std::move(cent), std::move(canon), u, c};
}

/// The projection phi evaluated directly from a QuadraticSplit.
inline Matrix quadratic_split_phi(const QuadraticSplit& qs, const Matrix& x) {
  return quadratic_projection(qs.u, qs.cparam, x);
}

// ---------------------------------------------------------------------------
// Scalar extension
// ---------------------------------------------------------------------------

/// Embedding of GF(p^k) into GF(p^(k*m)) determined by the first root of the
/// source modulus in the target field.
class FieldEmbedding {
 public:
  FieldEmbedding(FieldPtr src, FieldPtr dst) : src_(src), dst_(dst) {
    if (!src->is_finite() || !dst->is_finite())
      throw error("unsupported extension");
    if (src->characteristic() != dst->characteristic() ||
        dst->degree() % src->degree() != 0)
      throw error("field embedding: no embedding exists");
    if (src->degree() == 1) {
      root_ = dst->one();  // digits are integers; the root is unused
      return;
    }
    Poly mod(dst, {});
    {
      std::vector<Scalar> cs;
      for (uint64_t digit : src->modulus())
        cs.push_back(dst->from_int(static_cast<long long>(digit)));
      mod = Poly(dst, std::move(cs));
    }
    for (uint64_t i = 0; i < dst->cardinality(); ++i) {
      Scalar cand = dst->element(i);
      if (mod.eval(cand).is_zero()) {
        root_ = cand;
        return;
      }
    }
    throw error("field embedding: no root of the modulus found");
  }

  FieldPtr source() const { return src_; }
  FieldPtr target() const { return dst_; }

  Scalar map(const Scalar& s) const {
    if (s.field() != src_) throw error("field embedding: wrong field");
    auto digits = s.coeffs();
    Scalar acc = dst_->zero();
    Scalar power = dst_->one();
    for (uint64_t digit : digits) {
      acc += dst_->from_int(static_cast<long long>(digit)) * power;
      power = power * root_;
    }
    return acc;
  }

  Matrix map(const Matrix& m) const {
    Matrix out(dst_, m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
      for (size_t j = 0; j < m.cols(); ++j) out.at(i, j) = map(m.at(i, j));
    return out;
  }

 private:
  FieldPtr src_;
  FieldPtr dst_;
  Scalar root_;
};

/// The same structure constants read over GF(q^m). Classification data is
/// recomputed from scratch; a unitary centre may become split.
inline AlgebraWithInvolution extend_scalars(const AlgebraWithInvolution& a,
                                            uint64_t m) {
  FieldPtr src = a.field();
  if (!src->is_finite()) throw error("unsupported extension");
  if (m == 0) throw error("extend scalars: zero extension degree");
  FieldPtr dst = Field::gf(src->characteristic(),
                           src->degree() * m);
  FieldEmbedding emb(src, dst);
  std::vector<Matrix> basis, images;
  for (const auto& b : a.basis()) basis.push_back(emb.map(b));
  for (const auto& s : a.sigma_images()) images.push_back(emb.map(s));
  AlgebraWithInvolution::BuildOptions opts;
  opts.trusted_closure = true;  // structure constants are preserved
  std::optional<std::pair<Matrix, Matrix>> hint;
  if (a.centre_tag() == CentreTag::split)
    opts.split_centre_hint =
        std::make_pair(emb.map(a.zeta1()), emb.map(a.zeta2()));
  return AlgebraWithInvolution(dst, a.ambient(), std::move(basis),
                               std::move(images), emb.map(a.unit()),
                               a.model() + " over " + dst->describe(), opts);
}

/// Maps a subalgebra along extend_scalars.
inline Subalgebra extend_subalgebra(const AlgebraWithInvolution& extended,
                                    const FieldEmbedding& emb,
                                    const Subalgebra& l) {
  std::vector<Matrix> gens;
  for (const auto& b : l.basis()) gens.push_back(emb.map(b));
  return Subalgebra(&extended, std::move(gens), emb.map(l.unit()));
}

}  // namespace invol
