#pragma once

// Etale structure of commutative subalgebras: separability via the trace
// form, idempotent enumeration, and primitive elements of split algebras.

#include <cstdint>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "matrix.hpp"
#include "poly.hpp"

namespace invol {

/// Hard cap on exhaustive scans of a subalgebra's F-span.
inline constexpr uint64_t kEnumerationBudget = uint64_t(1) << 20;

/// Gram matrix of the trace form T(x, y) = Tr(L_xy) of the regular
/// representation, on the subalgebra's basis.
inline Matrix trace_form(const Subalgebra& l) {
  if (!l.commutative())
    throw error("etale: subalgebra is not commutative");
  FieldPtr f = l.parent().field();
  size_t dim = l.dim();
  // Tr(L_x) is linear in x, so tabulate it on the basis once.
  std::vector<Scalar> tau;
  tau.reserve(dim);
  for (const Matrix& b : l.basis())
    tau.push_back(l.left_mult_matrix(b).trace());
  Matrix gram(f, dim, dim);
  for (size_t i = 0; i < dim; ++i) {
    for (size_t j = i; j < dim; ++j) {
      auto c = l.coords(l.basis()[i] * l.basis()[j]);
      Scalar s = f->zero();
      for (size_t k = 0; k < dim; ++k) s += c[k] * tau[k];
      gram.at(i, j) = s;
      gram.at(j, i) = s;
    }
  }
  return gram;
}

/// A commutative subalgebra is etale exactly when its trace form is
/// nondegenerate.
inline bool is_etale(const Subalgebra& l) { return trace_form(l).invertible(); }

/// The complete decomposition of an etale subalgebra: its primitive
/// idempotents (pairwise orthogonal, summing to the subalgebra's unit), a
/// minimal polynomial presenting each component over F, and whether every
/// component is one-dimensional.
struct EtaleDescription {
  std::vector<Matrix> primitive_idempotents;
  std::vector<Poly> component_minpolys;
  bool split = false;
};

namespace detail {

/// Advance a base-q digit tuple in lexicographic order (last digit fastest).
/// Returns false once the tuple wraps around to all zeros.
inline bool next_tuple(std::vector<uint64_t>& digits, uint64_t q) {
  for (size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < q) return true;
    digits[i] = 0;
  }
  return false;
}

inline void validate_partition(const Subalgebra& l,
                               const std::vector<Matrix>& prim) {
  FieldPtr f = l.parent().field();
  size_t n = l.parent().ambient();
  Matrix zero(f, n, n);
  Matrix sum(f, n, n);
  for (size_t i = 0; i < prim.size(); ++i) {
    if (prim[i] * prim[i] != prim[i])
      throw error("etale: idempotent candidate fails e*e = e");
    if (prim[i] == zero) throw error("etale: zero primitive idempotent");
    for (size_t j = i + 1; j < prim.size(); ++j)
      if (prim[i] * prim[j] != zero)
        throw error("etale: primitive idempotents are not orthogonal");
    sum = sum + prim[i];
  }
  if (sum != l.unit())
    throw error("etale: primitive idempotents do not sum to the unit");
}

}  // namespace detail

/// Every idempotent of a finite commutative subalgebra, found by exhausting
/// the F-span and keeping the solutions of e*e = e, in lexicographic
/// coordinate order. Throws budget_exhausted when the span is infinite or
/// larger than kEnumerationBudget.
inline std::vector<Matrix> all_idempotents(const Subalgebra& l) {
  if (!l.commutative())
    throw error("etale: subalgebra is not commutative");
  FieldPtr f = l.parent().field();
  if (!f->is_finite())
    throw budget_exhausted("etale: idempotent enumeration infeasible");
  uint64_t q = f->cardinality();
  size_t dim = l.dim();
  uint64_t total = 1;
  for (size_t i = 0; i < dim; ++i) {
    if (total > kEnumerationBudget / q)
      throw budget_exhausted("etale: idempotent enumeration infeasible");
    total *= q;
  }
  // Structure constants: basis[i] * basis[j] in basis coordinates.
  std::vector<std::vector<std::vector<Scalar>>> table(dim);
  for (size_t i = 0; i < dim; ++i) {
    table[i].reserve(dim);
    for (size_t j = 0; j < dim; ++j)
      table[i].push_back(j < i ? table[j][i]
                               : l.coords(l.basis()[i] * l.basis()[j]));
  }
  std::vector<Matrix> out;
  std::vector<uint64_t> digits(dim, 0);
  std::vector<Scalar> c(dim, f->zero());
  std::vector<Scalar> sq(dim, f->zero());
  do {
    for (size_t i = 0; i < dim; ++i) c[i] = f->element(digits[i]);
    for (size_t k = 0; k < dim; ++k) sq[k] = f->zero();
    for (size_t i = 0; i < dim; ++i) {
      if (c[i].is_zero()) continue;
      for (size_t j = 0; j < dim; ++j) {
        if (c[j].is_zero()) continue;
        Scalar w = c[i] * c[j];
        const auto& row = table[i][j];
        for (size_t k = 0; k < dim; ++k) sq[k] += w * row[k];
      }
    }
    if (sq == c) out.push_back(l.from_coords(c));
  } while (detail::next_tuple(digits, q));
  return out;
}

/// Decomposition of a finite etale subalgebra by brute force: the primitive
/// idempotents are the minimal nonzero idempotents under e <= f iff ef = e,
/// and each component e*L is presented by the minimal polynomial of its
/// lexicographically first generator.
inline EtaleDescription idempotents(const Subalgebra& l) {
  if (!is_etale(l)) throw error("etale: subalgebra is not etale");
  FieldPtr f = l.parent().field();
  size_t n = l.parent().ambient();
  Matrix zero(f, n, n);
  std::vector<Matrix> all = all_idempotents(l);
  EtaleDescription d;
  for (const Matrix& e : all) {
    if (e == zero) continue;
    bool primitive = true;
    for (const Matrix& g : all) {
      if (g == zero || g == e) continue;
      if (g * e == g) {
        primitive = false;
        break;
      }
    }
    if (primitive) d.primitive_idempotents.push_back(e);
  }
  detail::validate_partition(l, d.primitive_idempotents);
  uint64_t q = f->cardinality();
  for (const Matrix& e : d.primitive_idempotents) {
    std::vector<Matrix> gens;
    for (const Matrix& b : l.basis()) gens.push_back(e * b);
    Subalgebra comp(&l.parent(), gens, e);
    std::vector<uint64_t> digits(comp.dim(), 0);
    std::vector<Scalar> c(comp.dim(), f->zero());
    bool found = false;
    do {
      for (size_t i = 0; i < comp.dim(); ++i) c[i] = f->element(digits[i]);
      Poly mu = comp.min_poly(comp.from_coords(c));
      if (mu.degree() == static_cast<int>(comp.dim())) {
        d.component_minpolys.push_back(mu);
        found = true;
        break;
      }
    } while (detail::next_tuple(digits, q));
    if (!found) throw error("etale: component has no generator");
  }
  d.split = d.primitive_idempotents.size() == l.dim();
  return d;
}

/// Decomposition of F[a] for a designated primitive element a whose minimal
/// polynomial splits into distinct linear factors found by exhaustive root
/// search; the primitive idempotents are the Lagrange interpolants at the
/// roots.
inline EtaleDescription idempotents(const Subalgebra& l,
                                    const Matrix& primitive) {
  if (!l.commutative())
    throw error("etale: subalgebra is not commutative");
  if (!l.contains(primitive))
    throw error("etale: designated element outside the subalgebra");
  Poly mu = l.min_poly(primitive);
  if (mu.degree() != static_cast<int>(l.dim()))
    throw error("etale: designated element is not primitive");
  if (!mu.is_separable()) throw error("etale: subalgebra is not etale");
  FieldPtr f = l.parent().field();
  std::vector<std::pair<Scalar, int>> rts;
  try {
    rts = mu.roots(kEnumerationBudget);
  } catch (const budget_exhausted&) {
    throw budget_exhausted("etale: idempotent enumeration infeasible");
  }
  if (rts.size() != static_cast<size_t>(mu.degree()))
    throw error("etale: idempotent enumeration infeasible");
  EtaleDescription d;
  for (size_t i = 0; i < rts.size(); ++i) {
    Matrix e = l.unit();
    for (size_t j = 0; j < rts.size(); ++j) {
      if (j == i) continue;
      Scalar scale = (rts[i].first - rts[j].first).inverse();
      e = e * (scale * (primitive - rts[j].first * l.unit()));
    }
    d.primitive_idempotents.push_back(std::move(e));
    d.component_minpolys.push_back(
        Poly(f, {-rts[i].first, f->one()}));
  }
  detail::validate_partition(l, d.primitive_idempotents);
  d.split = true;
  return d;
}

/// Element with pairwise distinct scalar coordinates across the primitive
/// idempotents of a split etale subalgebra, so its minimal polynomial is
/// separable of full degree. The scalar tuple is the lexicographically
/// smallest one, preferring all-nonzero tuples (an invertible element) and
/// falling back to a tuple containing zero only when the field has exactly
/// as many scalars as there are components.
inline Matrix primitive_element(const Subalgebra& l,
                                const EtaleDescription& d) {
  if (!d.split)
    throw error("etale: primitive element requires a split algebra");
  FieldPtr f = l.parent().field();
  size_t r = d.primitive_idempotents.size();
  uint64_t first = 1;
  if (f->is_finite() && f->cardinality() < r + 1) {
    if (f->cardinality() < r) throw error("etale: no primitive element");
    first = 0;
  }
  size_t n = l.parent().ambient();
  Matrix acc(f, n, n);
  for (size_t i = 0; i < r; ++i)
    acc = acc + f->element(first + i) * d.primitive_idempotents[i];
  if (l.min_poly(acc).degree() != static_cast<int>(l.dim()))
    throw error("etale: primitive element search failed");
  return acc;
}

inline Matrix primitive_element(const Subalgebra& l) {
  return primitive_element(l, idempotents(l));
}

}  // namespace invol
