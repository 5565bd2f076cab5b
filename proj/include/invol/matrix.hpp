#pragma once

// Dense matrices over a Field, exact Gaussian elimination, and a
// division-free characteristic polynomial.
//
// The characteristic polynomial is computed by the Berkowitz iteration so it
// stays exact over every coefficient field, including characteristic 2. The
// iteration is generic over the entry ring: it is reused verbatim for
// matrices whose entries live in a stored quadratic extension of the base
// field.

#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "poly.hpp"

namespace invol {

/// Characteristic polynomial coefficients (little-endian, length n+1) of an
/// n x n grid by the Berkowitz iteration. E needs +, -, * and the supplied
/// zero/one constants; no divisions are performed.
template <class E>
std::vector<E> berkowitz_char_poly(const std::vector<std::vector<E>>& m,
                                   const E& zero, const E& one) {
  const size_t n = m.size();
  std::vector<E> p{one};  // char poly of the empty matrix, leading first
  for (size_t k = 1; k <= n; ++k) {
    // Toeplitz column: [1, -m_kk, -(R C), -(R M C), ...] of length k+1,
    // where R / C are the row / column fringes of the leading k x k block.
    std::vector<E> col;
    col.reserve(k + 1);
    col.push_back(one);
    col.push_back(zero - m[k - 1][k - 1]);
    std::vector<E> v;
    for (size_t i = 0; i < k - 1; ++i) v.push_back(m[i][k - 1]);
    for (size_t step = 0; step + 2 <= k; ++step) {
      E dot = zero;
      for (size_t i = 0; i < k - 1; ++i) dot = dot + m[k - 1][i] * v[i];
      col.push_back(zero - dot);
      if (step + 3 <= k) {
        std::vector<E> nv(k - 1, zero);
        for (size_t i = 0; i < k - 1; ++i) {
          E acc = zero;
          for (size_t j = 0; j < k - 1; ++j) acc = acc + m[i][j] * v[j];
          nv[i] = acc;
        }
        v = std::move(nv);
      }
    }
    std::vector<E> np(k + 1, zero);
    for (size_t i = 0; i <= k; ++i) {
      for (size_t j = 0; j < p.size() && j <= i; ++j) {
        np[i] = np[i] + col[i - j] * p[j];
      }
    }
    p = std::move(np);
  }
  std::vector<E> out(p.rbegin(), p.rend());
  return out;
}

class Matrix {
 public:
  Matrix() : f_(nullptr), rows_(0), cols_(0) {}
  Matrix(FieldPtr f, size_t rows, size_t cols)
      : f_(f), rows_(rows), cols_(cols), e_(rows * cols, f->zero()) {}

  static Matrix identity(FieldPtr f, size_t n) {
    Matrix m(f, n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = f->one();
    return m;
  }
  static Matrix from_ints(FieldPtr f,
                          const std::vector<std::vector<long long>>& v) {
    Matrix m(f, v.size(), v.empty() ? 0 : v[0].size());
    for (size_t i = 0; i < v.size(); ++i) {
      if (v[i].size() != m.cols_) throw error("matrix: ragged rows");
      for (size_t j = 0; j < v[i].size(); ++j)
        m.at(i, j) = f->from_int(v[i][j]);
    }
    return m;
  }

  FieldPtr field() const { return f_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Scalar& at(size_t i, size_t j) { return e_[i * cols_ + j]; }
  const Scalar& at(size_t i, size_t j) const { return e_[i * cols_ + j]; }

  bool is_zero() const {
    for (const auto& x : e_)
      if (!x.is_zero()) return false;
    return true;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.match_shape(b);
    Matrix r = a;
    for (size_t i = 0; i < r.e_.size(); ++i) r.e_[i] += b.e_[i];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.match_shape(b);
    Matrix r = a;
    for (size_t i = 0; i < r.e_.size(); ++i) r.e_[i] -= b.e_[i];
    return r;
  }
  Matrix operator-() const {
    Matrix r = *this;
    for (auto& x : r.e_) x = -x;
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_ || a.f_ != b.f_)
      throw error("matrix: shape mismatch in product");
    Matrix r(a.f_, a.rows_, b.cols_);
    for (size_t i = 0; i < a.rows_; ++i) {
      for (size_t k = 0; k < a.cols_; ++k) {
        const Scalar& aik = a.at(i, k);
        if (aik.is_zero()) continue;
        for (size_t j = 0; j < b.cols_; ++j) {
          if (b.at(k, j).is_zero()) continue;
          r.at(i, j) += aik * b.at(k, j);
        }
      }
    }
    return r;
  }
  friend Matrix operator*(const Scalar& s, const Matrix& m) {
    Matrix r = m;
    for (auto& x : r.e_) x = s * x;
    return r;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.f_ != b.f_)
      return false;
    for (size_t i = 0; i < a.e_.size(); ++i)
      if (a.e_[i] != b.e_[i]) return false;
    return true;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) {
    return !(a == b);
  }

  Matrix transpose() const {
    Matrix r(f_, cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  Scalar trace() const {
    require_square();
    Scalar t = f_->zero();
    for (size_t i = 0; i < rows_; ++i) t += at(i, i);
    return t;
  }

  Matrix pow(uint64_t e) const {
    require_square();
    Matrix r = identity(f_, rows_);
    Matrix base = *this;
    while (e > 0) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  /// Copies the block of m into this matrix with top-left corner (i0, j0).
  void set_block(size_t i0, size_t j0, const Matrix& m) {
    for (size_t i = 0; i < m.rows_; ++i)
      for (size_t j = 0; j < m.cols_; ++j) at(i0 + i, j0 + j) = m.at(i, j);
  }
  Matrix block(size_t i0, size_t j0, size_t rows, size_t cols) const {
    Matrix r(f_, rows, cols);
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j) r.at(i, j) = at(i0 + i, j0 + j);
    return r;
  }

  size_t rank() const {
    Matrix m = *this;
    return m.echelonize().first;
  }

  Scalar det() const {
    require_square();
    Matrix m = *this;
    auto [rank, swaps] = m.echelonize();
    if (rank < rows_) return f_->zero();
    Scalar d = f_->one();
    for (size_t i = 0; i < rows_; ++i) d *= m.at(i, i);
    return swaps % 2 == 0 ? d : -d;
  }

  bool invertible() const { return is_square() && rank() == rows_; }

  Matrix inverse() const {
    require_square();
    Matrix aug(f_, rows_, 2 * rows_);
    aug.set_block(0, 0, *this);
    aug.set_block(0, rows_, identity(f_, rows_));
    aug.rref();
    for (size_t i = 0; i < rows_; ++i)
      if (aug.at(i, i).is_zero()) throw error("matrix: singular");
    return aug.block(0, rows_, rows_, rows_);
  }

  /// Canonical basis of the right kernel {x : Mx = 0}.
  std::vector<std::vector<Scalar>> kernel() const {
    Matrix m = *this;
    m.rref();
    std::vector<size_t> pivot_of_col(cols_, SIZE_MAX);
    size_t r = 0;
    for (size_t j = 0; j < cols_ && r < rows_; ++j) {
      if (!m.at(r, j).is_zero()) {
        pivot_of_col[j] = r;
        ++r;
      }
    }
    std::vector<std::vector<Scalar>> basis;
    for (size_t j = 0; j < cols_; ++j) {
      if (pivot_of_col[j] != SIZE_MAX) continue;
      std::vector<Scalar> v(cols_, f_->zero());
      v[j] = f_->one();
      for (size_t jj = 0; jj < j; ++jj) {
        if (pivot_of_col[jj] != SIZE_MAX)
          v[jj] = -m.at(pivot_of_col[jj], j);
      }
      basis.push_back(std::move(v));
    }
    return basis;
  }

  /// One solution of Mx = b, if consistent.
  std::optional<std::vector<Scalar>> solve(
      const std::vector<Scalar>& b) const {
    if (b.size() != rows_) throw error("matrix: rhs size mismatch");
    Matrix aug(f_, rows_, cols_ + 1);
    aug.set_block(0, 0, *this);
    for (size_t i = 0; i < rows_; ++i) aug.at(i, cols_) = b[i];
    aug.rref();
    std::vector<Scalar> x(cols_, f_->zero());
    for (size_t i = rows_; i-- > 0;) {
      size_t lead = SIZE_MAX;
      for (size_t j = 0; j <= cols_; ++j) {
        if (!aug.at(i, j).is_zero()) {
          lead = j;
          break;
        }
      }
      if (lead == SIZE_MAX) continue;
      if (lead == cols_) return std::nullopt;  // 0 = nonzero
      x[lead] = aug.at(i, cols_);
    }
    return x;
  }

  /// Reduced row echelon form in place.
  void rref() {
    size_t r = 0;
    for (size_t j = 0; j < cols_ && r < rows_; ++j) {
      size_t piv = SIZE_MAX;
      for (size_t i = r; i < rows_; ++i) {
        if (!at(i, j).is_zero()) {
          piv = i;
          break;
        }
      }
      if (piv == SIZE_MAX) continue;
      swap_rows(piv, r);
      Scalar inv = at(r, j).inverse();
      for (size_t jj = j; jj < cols_; ++jj) at(r, jj) *= inv;
      for (size_t i = 0; i < rows_; ++i) {
        if (i == r || at(i, j).is_zero()) continue;
        Scalar factor = at(i, j);
        for (size_t jj = j; jj < cols_; ++jj)
          at(i, jj) -= factor * at(r, jj);
      }
      ++r;
    }
  }

  /// det(XI - M) via Berkowitz; exact in every characteristic.
  Poly char_poly() const {
    require_square();
    std::vector<std::vector<Scalar>> grid(rows_,
                                          std::vector<Scalar>(cols_));
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) grid[i][j] = at(i, j);
    auto coeffs = berkowitz_char_poly<Scalar>(grid, f_->zero(), f_->one());
    return Poly(f_, std::move(coeffs));
  }

  std::string str() const {
    std::string s;
    for (size_t i = 0; i < rows_; ++i) {
      s += i == 0 ? "[" : " ";
      for (size_t j = 0; j < cols_; ++j) {
        if (j) s += " ";
        s += at(i, j).str();
      }
      s += i + 1 == rows_ ? "]" : "\n";
    }
    return s;
  }

 private:
  // Upper-triangular echelon form; returns (rank, row swap count).
  std::pair<size_t, size_t> echelonize() {
    size_t r = 0, swaps = 0;
    for (size_t j = 0; j < cols_ && r < rows_; ++j) {
      size_t piv = SIZE_MAX;
      for (size_t i = r; i < rows_; ++i) {
        if (!at(i, j).is_zero()) {
          piv = i;
          break;
        }
      }
      if (piv == SIZE_MAX) continue;
      if (piv != r) {
        swap_rows(piv, r);
        ++swaps;
      }
      for (size_t i = r + 1; i < rows_; ++i) {
        if (at(i, j).is_zero()) continue;
        Scalar factor = at(i, j) / at(r, j);
        for (size_t jj = j; jj < cols_; ++jj)
          at(i, jj) -= factor * at(r, jj);
      }
      ++r;
    }
    return {r, swaps};
  }

  void swap_rows(size_t a, size_t b) {
    if (a == b) return;
    for (size_t j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
  }

  void match_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || f_ != o.f_)
      throw error("matrix: shape mismatch");
  }
  void require_square() const {
    if (!is_square()) throw error("matrix: square matrix required");
  }

  FieldPtr f_;
  size_t rows_, cols_;
  std::vector<Scalar> e_;
};

inline Matrix eval_poly(const Poly& p, const Matrix& m) {
  if (!m.is_square()) throw error("eval_poly: square matrix required");
  Matrix acc(m.field(), m.rows(), m.cols());
  for (size_t i = p.coeffs().size(); i-- > 0;) {
    acc = acc * m;
    for (size_t d = 0; d < m.rows(); ++d) acc.at(d, d) += p.coeff(i);
  }
  return acc;
}

/// Row span of vectors in F^n kept in reduced row echelon form; the stored
/// rows are a canonical basis, so equal subspaces compare equal.
class Subspace {
 public:
  Subspace(FieldPtr f, size_t ambient) : f_(f), ambient_(ambient) {}

  FieldPtr field() const { return f_; }
  size_t ambient() const { return ambient_; }
  size_t dim() const { return rows_.size(); }
  const std::vector<std::vector<Scalar>>& basis() const { return rows_; }

  /// Adds a vector to the span; returns true if the dimension grew.
  bool add(std::vector<Scalar> v) {
    if (v.size() != ambient_) throw error("subspace: vector size mismatch");
    reduce_in_place(v);
    size_t lead = leading_index(v);
    if (lead == SIZE_MAX) return false;
    Scalar inv = v[lead].inverse();
    for (auto& x : v) x *= inv;
    // Eliminate the new pivot from existing rows and insert sorted.
    for (auto& row : rows_) {
      if (!row[lead].is_zero()) {
        Scalar factor = row[lead];
        for (size_t j = 0; j < ambient_; ++j) row[j] -= factor * v[j];
      }
    }
    size_t pos = 0;
    while (pos < rows_.size() && leading_index(rows_[pos]) < lead) ++pos;
    rows_.insert(rows_.begin() + pos, std::move(v));
    return true;
  }

  bool contains(const std::vector<Scalar>& v) const {
    std::vector<Scalar> r = v;
    reduce_in_place(r);
    return leading_index(r) == SIZE_MAX;
  }

  /// Residual of v after eliminating against the basis.
  std::vector<Scalar> reduce(std::vector<Scalar> v) const {
    reduce_in_place(v);
    return v;
  }

  /// Coordinates of v in the canonical basis, if v lies in the span.
  std::optional<std::vector<Scalar>> coordinates(
      const std::vector<Scalar>& v) const {
    std::vector<Scalar> r = v;
    std::vector<Scalar> coords(rows_.size(), f_->zero());
    for (size_t i = 0; i < rows_.size(); ++i) {
      size_t lead = leading_index(rows_[i]);
      if (!r[lead].is_zero()) {
        coords[i] = r[lead];
        Scalar factor = r[lead];
        for (size_t j = 0; j < ambient_; ++j)
          r[j] -= factor * rows_[i][j];
      }
    }
    if (leading_index(r) != SIZE_MAX) return std::nullopt;
    return coords;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    if (a.f_ != b.f_ || a.ambient_ != b.ambient_) return false;
    return a.rows_ == b.rows_;
  }

  friend Subspace intersect(const Subspace& a, const Subspace& b) {
    if (a.f_ != b.f_ || a.ambient_ != b.ambient_)
      throw error("subspace: ambient mismatch");
    // Zassenhaus: rref of [A | A; B | 0]; rows with zero left half carry
    // the intersection on the right.
    size_t n = a.ambient_;
    Matrix big(a.f_, a.dim() + b.dim(), 2 * n);
    for (size_t i = 0; i < a.dim(); ++i) {
      for (size_t j = 0; j < n; ++j) {
        big.at(i, j) = a.rows_[i][j];
        big.at(i, n + j) = a.rows_[i][j];
      }
    }
    for (size_t i = 0; i < b.dim(); ++i)
      for (size_t j = 0; j < n; ++j) big.at(a.dim() + i, j) = b.rows_[i][j];
    big.rref();
    Subspace out(a.f_, n);
    for (size_t i = 0; i < big.rows(); ++i) {
      bool left_zero = true;
      for (size_t j = 0; j < n && left_zero; ++j)
        left_zero = big.at(i, j).is_zero();
      if (!left_zero) continue;
      std::vector<Scalar> v(n);
      bool nonzero = false;
      for (size_t j = 0; j < n; ++j) {
        v[j] = big.at(i, n + j);
        nonzero = nonzero || !v[j].is_zero();
      }
      if (nonzero) out.add(std::move(v));
    }
    return out;
  }

 private:
  static size_t leading_index(const std::vector<Scalar>& v) {
    for (size_t j = 0; j < v.size(); ++j)
      if (!v[j].is_zero()) return j;
    return SIZE_MAX;
  }
  void reduce_in_place(std::vector<Scalar>& v) const {
    if (v.size() != ambient_) throw error("subspace: vector size mismatch");
    for (const auto& row : rows_) {
      size_t lead = leading_index(row);
      if (!v[lead].is_zero()) {
        Scalar factor = v[lead];
        for (size_t j = 0; j < ambient_; ++j) v[j] -= factor * row[j];
      }
    }
  }

  FieldPtr f_;
  size_t ambient_;
  std::vector<std::vector<Scalar>> rows_;
};

}  // namespace invol
