#pragma once

// Elements of a stored quadratic etale extension K = F[theta] with
// theta^2 = theta + c, plus the handful of polynomial operations over K
// needed for characteristic polynomials of matrices with K entries.
//
// The X^2 - X - c presentation works uniformly in every characteristic
// (including 2, where X^2 - a is never separable).

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "poly.hpp"

namespace invol {

class QuadExt;
using QuadExtPtr = const QuadExt*;

/// Interned quadratic extension F[theta]/(theta^2 - theta - c). The defining
/// polynomial must be separable; it need not be irreducible (a split K is a
/// valid etale algebra), but most callers require is_field().
class QuadExt {
 public:
  static QuadExtPtr get(FieldPtr f, const Scalar& c) {
    if (c.field() != f) throw error("quadext: parameter field mismatch");
    if (f->characteristic() != 2) {
      Scalar disc = f->from_int(4) * c + f->one();
      if (disc.is_zero())
        throw error("quadext: inseparable defining polynomial");
    }
    static std::mutex mu;
    static std::map<std::tuple<FieldPtr, std::string>,
                    std::unique_ptr<QuadExt>>
        registry;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(f, c.str());
    auto it = registry.find(key);
    if (it == registry.end()) {
      it = registry.emplace(key, std::unique_ptr<QuadExt>(new QuadExt(f, c)))
               .first;
    }
    return it->second.get();
  }

  FieldPtr base() const { return f_; }
  const Scalar& param() const { return c_; }

  /// True iff X^2 - X - c is irreducible over F.
  bool is_field() const { return is_field_; }

  /// A root of X^2 - X - c in F when the extension splits.
  std::optional<Scalar> split_root() const { return split_root_; }

  std::string describe() const {
    return f_->describe() + "[t]/(t^2-t-" + c_.str() + ")";
  }

 private:
  QuadExt(FieldPtr f, Scalar c) : f_(f), c_(std::move(c)) {
    Poly defining =
        Poly::x(f_) * Poly::x(f_) - Poly::x(f_) - Poly::constant(c_);
    if (f_->characteristic() == 2 && f_->is_finite()) {
      // Artin-Schreier: X^2 + X + c has a root iff the absolute trace of c
      // vanishes; irreducibility needs no scan.
      Scalar tr = f_->zero();
      Scalar power = c_;
      for (uint64_t i = 0; i < f_->degree(); ++i) {
        tr += power;
        power = power * power;
      }
      is_field_ = tr.is_one();
      if (!is_field_) {
        auto roots = defining.roots();
        split_root_ = roots.at(0).first;
      }
      return;
    }
    Scalar disc = f_->from_int(4) * c_ + f_->one();
    if (f_->is_finite()) {
      // Euler criterion on the discriminant.
      Scalar chi = disc.pow((f_->cardinality() - 1) / 2);
      is_field_ = !chi.is_one();
      if (!is_field_) {
        auto roots = defining.roots();
        split_root_ = roots.at(0).first;
      }
      return;
    }
    auto sq = disc.sqrt_in_q();
    is_field_ = !sq.has_value();
    if (!is_field_) {
      Scalar half = f_->from_rational(BigRat(1, 2));
      split_root_ = half * (f_->one() + *sq);
    }
  }

  FieldPtr f_;
  Scalar c_;
  bool is_field_ = false;
  std::optional<Scalar> split_root_;
};

/// a + b*theta in a QuadExt.
class KElem {
 public:
  KElem() : k_(nullptr) {}
  KElem(QuadExtPtr k, Scalar a, Scalar b)
      : k_(k), a_(std::move(a)), b_(std::move(b)) {
    if (a_.field() != k_->base() || b_.field() != k_->base())
      throw error("kelem: component field mismatch");
  }
  static KElem from_base(QuadExtPtr k, const Scalar& a) {
    return KElem(k, a, k->base()->zero());
  }
  static KElem zero(QuadExtPtr k) {
    return KElem(k, k->base()->zero(), k->base()->zero());
  }
  static KElem one(QuadExtPtr k) {
    return KElem(k, k->base()->one(), k->base()->zero());
  }
  static KElem theta(QuadExtPtr k) {
    return KElem(k, k->base()->zero(), k->base()->one());
  }

  QuadExtPtr ext() const { return k_; }
  const Scalar& a() const { return a_; }
  const Scalar& b() const { return b_; }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool is_base() const { return b_.is_zero(); }

  friend KElem operator+(const KElem& x, const KElem& y) {
    x.match(y);
    return KElem(x.k_, x.a_ + y.a_, x.b_ + y.b_);
  }
  friend KElem operator-(const KElem& x, const KElem& y) {
    x.match(y);
    return KElem(x.k_, x.a_ - y.a_, x.b_ - y.b_);
  }
  KElem operator-() const { return KElem(k_, -a_, -b_); }
  friend KElem operator*(const KElem& x, const KElem& y) {
    x.match(y);
    // (a1 + b1 t)(a2 + b2 t) with t^2 = t + c.
    const Scalar& c = x.k_->param();
    return KElem(x.k_, x.a_ * y.a_ + x.b_ * y.b_ * c,
                 x.a_ * y.b_ + x.b_ * y.a_ + x.b_ * y.b_);
  }
  friend bool operator==(const KElem& x, const KElem& y) {
    return x.k_ == y.k_ && x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const KElem& x, const KElem& y) { return !(x == y); }

  /// The nontrivial F-automorphism theta -> 1 - theta.
  KElem conj() const { return KElem(k_, a_ + b_, -b_); }

  /// N(x) = x * conj(x), always in F.
  Scalar norm() const { return a_ * a_ + a_ * b_ - k_->param() * b_ * b_; }

  /// Tr(x) = x + conj(x), always in F.
  Scalar trace_to_base() const { return a_ + a_ + b_; }

  KElem inverse() const {
    Scalar n = norm();
    if (n.is_zero()) throw error("kelem: not invertible");
    Scalar ninv = n.inverse();
    KElem cj = conj();
    return KElem(k_, cj.a_ * ninv, cj.b_ * ninv);
  }

  KElem pow(uint64_t e) const {
    KElem r = one(k_);
    KElem base = *this;
    while (e > 0) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  std::string str() const { return "(" + a_.str() + "+" + b_.str() + "t)"; }

 private:
  void match(const KElem& o) const {
    if (k_ != o.k_) throw error("kelem: extension mismatch");
  }
  QuadExtPtr k_;
  Scalar a_, b_;
};

// --- Polynomials over K, little-endian coefficient vectors -----------------

inline void kpoly_trim(std::vector<KElem>& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline std::vector<KElem> kpoly_mul(const std::vector<KElem>& p,
                                    const std::vector<KElem>& q,
                                    QuadExtPtr k) {
  if (p.empty() || q.empty()) return {};
  std::vector<KElem> r(p.size() + q.size() - 1, KElem::zero(k));
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = 0; j < q.size(); ++j) r[i + j] = r[i + j] + p[i] * q[j];
  kpoly_trim(r);
  return r;
}

inline KElem kpoly_eval(const std::vector<KElem>& p, const KElem& x,
                        QuadExtPtr k) {
  KElem acc = KElem::zero(k);
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

/// Coefficientwise conjugate.
inline std::vector<KElem> kpoly_conj(std::vector<KElem> p) {
  for (auto& x : p) x = x.conj();
  return p;
}

/// Base-field coefficients, if every coefficient lies in F.
inline std::optional<std::vector<Scalar>> kpoly_base_coeffs(
    const std::vector<KElem>& p) {
  std::vector<Scalar> out;
  out.reserve(p.size());
  for (const auto& x : p) {
    if (!x.is_base()) return std::nullopt;
    out.push_back(x.a());
  }
  return out;
}

inline std::vector<KElem> kpoly_from_base(const Poly& p, QuadExtPtr k) {
  if (p.field() != k->base()) throw error("kpoly: base field mismatch");
  std::vector<KElem> out;
  for (const auto& c : p.coeffs()) out.push_back(KElem::from_base(k, c));
  return out;
}

/// Monic square root of a monic polynomial over K; throws if p is not a
/// perfect square. Mirrors the base-field routine: characteristic 2 inverts
/// Frobenius on the even part, elsewhere the coefficients are solved top
/// down and the result verified by squaring.
inline std::vector<KElem> kpoly_sqrt_monic(const std::vector<KElem>& p,
                                           QuadExtPtr k) {
  if (p.empty() || !(p.back() == KElem::one(k)))
    throw error("kpoly: sqrt requires a monic polynomial");
  size_t n = p.size() - 1;
  if (n % 2 != 0) throw error("kpoly: not a perfect square");
  size_t m = n / 2;
  FieldPtr f = k->base();
  std::vector<KElem> q(m + 1, KElem::zero(k));
  if (f->characteristic() == 2) {
    uint64_t card_k = f->cardinality() * f->cardinality();
    for (size_t i = 0; i <= n; ++i) {
      if (i % 2 == 1) {
        if (!p[i].is_zero()) throw error("kpoly: not a perfect square");
      } else {
        q[i / 2] = p[i].pow(card_k / 2);  // inverse Frobenius in K
      }
    }
  } else {
    KElem two_inv = KElem::from_base(k, f->from_int(2).inverse());
    q[m] = KElem::one(k);
    for (size_t i = m; i-- > 0;) {
      // Coefficient of X^(m+i) in q^2 is 2 q_i q_m + (known terms).
      KElem acc = KElem::zero(k);
      for (size_t a = i + 1; a < m; ++a) {
        size_t b = m + i - a;
        if (b > i && b <= m) acc = acc + q[a] * q[b];
      }
      q[i] = (p[m + i] - acc) * two_inv;
    }
  }
  if (!(kpoly_mul(q, q, k) == p)) throw error("kpoly: not a perfect square");
  return q;
}

}  // namespace invol
