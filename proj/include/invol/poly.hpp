#pragma once

// Dense univariate polynomials over a Field. Coefficients are little-endian
// and normalized: the zero polynomial has an empty coefficient vector and
// its degree is the dedicated sentinel kNegInfDegree, which sorts below
// every attainable degree.

#include <algorithm>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "field.hpp"

namespace invol {

class Poly {
 public:
  static constexpr int kNegInfDegree = std::numeric_limits<int>::min();

  explicit Poly(FieldPtr f) : f_(f) {}
  Poly(FieldPtr f, std::vector<Scalar> coeffs)
      : f_(f), c_(std::move(coeffs)) {
    normalize();
  }

  static Poly constant(const Scalar& c) {
    return Poly(c.field(), {c});
  }
  static Poly x(FieldPtr f) { return Poly(f, {f->zero(), f->one()}); }
  static Poly monomial(const Scalar& c, size_t deg) {
    std::vector<Scalar> v(deg + 1, c.field()->zero());
    v[deg] = c;
    return Poly(c.field(), std::move(v));
  }
  static Poly from_ints(FieldPtr f, const std::vector<long long>& coeffs) {
    std::vector<Scalar> v;
    v.reserve(coeffs.size());
    for (long long c : coeffs) v.push_back(f->from_int(c));
    return Poly(f, std::move(v));
  }
  static Poly from_roots(FieldPtr f, const std::vector<Scalar>& roots) {
    Poly p = constant(f->one());
    for (const Scalar& r : roots) p = p * Poly(f, {-r, f->one()});
    return p;
  }

  FieldPtr field() const { return f_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const {
    return c_.empty() ? kNegInfDegree : static_cast<int>(c_.size()) - 1;
  }
  /// Coefficient of X^i (zero beyond the degree).
  Scalar coeff(size_t i) const {
    return i < c_.size() ? c_[i] : f_->zero();
  }
  const std::vector<Scalar>& coeffs() const { return c_; }
  Scalar lead() const {
    if (is_zero()) throw error("poly: leading coefficient of zero");
    return c_.back();
  }
  bool is_monic() const { return !is_zero() && c_.back().is_one(); }

  friend Poly operator+(const Poly& a, const Poly& b) {
    a.match(b);
    std::vector<Scalar> v(std::max(a.c_.size(), b.c_.size()), a.f_->zero());
    for (size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) + b.coeff(i);
    return Poly(a.f_, std::move(v));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    a.match(b);
    std::vector<Scalar> v(std::max(a.c_.size(), b.c_.size()), a.f_->zero());
    for (size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) - b.coeff(i);
    return Poly(a.f_, std::move(v));
  }
  Poly operator-() const {
    std::vector<Scalar> v(c_);
    for (auto& ci : v) ci = -ci;
    return Poly(f_, std::move(v));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    a.match(b);
    if (a.is_zero() || b.is_zero()) return Poly(a.f_);
    std::vector<Scalar> v(a.c_.size() + b.c_.size() - 1, a.f_->zero());
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (size_t j = 0; j < b.c_.size(); ++j)
        v[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(a.f_, std::move(v));
  }
  friend Poly operator*(const Scalar& s, const Poly& p) {
    std::vector<Scalar> v(p.c_);
    for (auto& ci : v) ci = s * ci;
    return Poly(p.f_, std::move(v));
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    a.match(b);
    if (a.c_.size() != b.c_.size()) return false;
    for (size_t i = 0; i < a.c_.size(); ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Quotient and remainder; the divisor must be nonzero.
  std::pair<Poly, Poly> divmod(const Poly& d) const {
    match(d);
    if (d.is_zero()) throw error("poly: division by zero polynomial");
    Poly r = *this;
    Poly q(f_);
    q.c_.assign(c_.size(), f_->zero());
    Scalar lead_inv = d.lead().inverse();
    while (!r.is_zero() && r.degree() >= d.degree()) {
      size_t shift = static_cast<size_t>(r.degree() - d.degree());
      Scalar factor = r.lead() * lead_inv;
      q.c_[shift] = factor;
      for (size_t i = 0; i < d.c_.size(); ++i)
        r.c_[shift + i] -= factor * d.c_[i];
      r.normalize();
    }
    q.normalize();
    return {q, r};
  }
  Poly operator/(const Poly& d) const { return divmod(d).first; }
  Poly operator%(const Poly& d) const { return divmod(d).second; }

  Scalar eval(const Scalar& x) const {
    Scalar acc = f_->zero();
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }
  Poly compose(const Poly& inner) const {
    match(inner);
    Poly acc(f_);
    for (size_t i = c_.size(); i-- > 0;)
      acc = acc * inner + constant(c_[i]);
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly(f_);
    std::vector<Scalar> v(c_.size() - 1, f_->zero());
    for (size_t i = 1; i < c_.size(); ++i)
      v[i - 1] = f_->from_int(static_cast<long long>(i)) * c_[i];
    return Poly(f_, std::move(v));
  }

  Poly monic() const {
    if (is_zero()) throw error("poly: monic of zero");
    return lead().inverse() * *this;
  }

  /// Monic gcd; gcd(0, 0) = 0.
  friend Poly gcd(Poly a, Poly b) {
    a.match(b);
    while (!b.is_zero()) {
      Poly r = a % b;
      a = std::move(b);
      b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a.monic();
  }

  /// Squarefree with no repeated roots in any extension: gcd(f, f') constant.
  bool is_separable() const {
    if (is_zero()) throw error("poly: separability of zero is undefined");
    if (degree() == 0) return true;
    Poly d = derivative();
    if (d.is_zero()) return false;
    return gcd(*this, d).degree() == 0;
  }

  /// Resultant of two nonzero polynomials via the Euclidean reduction.
  friend Scalar resultant(const Poly& f, const Poly& g) {
    f.match(g);
    if (f.is_zero() || g.is_zero()) return f.f_->zero();
    if (g.degree() == 0) return g.c_[0].pow(static_cast<uint64_t>(f.degree()));
    if (f.degree() == 0) return f.c_[0].pow(static_cast<uint64_t>(g.degree()));
    Poly r = f % g;
    if (r.is_zero()) return f.f_->zero();
    Scalar sign = f.f_->one();
    if ((static_cast<uint64_t>(f.degree()) * static_cast<uint64_t>(g.degree())) % 2 == 1)
      sign = -sign;
    Scalar lc = g.lead().pow(static_cast<uint64_t>(f.degree() - r.degree()));
    return sign * lc * resultant(g, r);
  }

  /// disc(f) = (-1)^{n(n-1)/2} res(f, f') / lc(f); zero iff f inseparable.
  Scalar discriminant() const {
    int n = degree();
    if (n <= 0) throw error("poly: discriminant of a constant");
    Poly d = derivative();
    Scalar res = d.is_zero() ? f_->zero() : resultant(*this, d);
    Scalar r = res / lead();
    if ((static_cast<uint64_t>(n) * static_cast<uint64_t>(n - 1) / 2) % 2 == 1)
      r = -r;
    return r;
  }

  /// The monic square root of a monic polynomial, if one exists.
  /// In characteristic 2 coefficients are recovered with the inverse
  /// Frobenius; elsewhere by solving from the top coefficient down.
  Poly sqrt_monic() const {
    if (!is_monic()) throw error("poly: sqrt requires a monic polynomial");
    int n = degree();
    if (n % 2 != 0) throw error("poly: not a perfect square");
    size_t m = static_cast<size_t>(n) / 2;
    std::vector<Scalar> q(m + 1, f_->zero());
    q[m] = f_->one();
    if (f_->characteristic() == 2) {
      for (size_t i = 0; i < m; ++i) {
        if (!coeff(2 * i + 1).is_zero())
          throw error("poly: not a perfect square");
        q[i] = coeff(2 * i).pth_root();
      }
    } else {
      Scalar two_inv = f_->from_int(2).inverse();
      for (size_t d = m; d-- > 0;) {
        // Coefficient of X^{m+d} in q^2 must equal coeff(m+d).
        Scalar cross = f_->zero();
        for (size_t i = d + 1; i < m; ++i) {
          size_t j = m + d - i;
          if (j <= m && j > d) cross += q[i] * q[j];
        }
        q[d] = (coeff(m + d) - cross) * two_inv;
      }
    }
    Poly root(f_, std::move(q));
    if (root * root != *this) throw error("poly: not a perfect square");
    return root;
  }

  /// Roots in the base field with multiplicities, ordered canonically.
  /// Finite fields scan all elements; Q uses the rational root theorem on
  /// the cleared-denominator form (divisor search is budgeted).
  std::vector<std::pair<Scalar, int>> roots(uint64_t budget = 1 << 20) const {
    if (is_zero()) throw error("poly: roots of the zero polynomial");
    std::vector<Scalar> candidates;
    if (f_->is_finite()) {
      if (f_->cardinality() > budget)
        throw budget_exhausted("poly: root scan over budget");
      for (uint64_t i = 0; i < f_->cardinality(); ++i)
        candidates.push_back(f_->element(i));
    } else {
      candidates = rational_root_candidates(budget);
    }
    std::vector<std::pair<Scalar, int>> out;
    for (const Scalar& r : candidates) {
      if (!eval(r).is_zero()) continue;
      Poly lin(f_, {-r, f_->one()});
      Poly rest = *this;
      int mult = 0;
      while (true) {
        auto [q2, rem] = rest.divmod(lin);
        if (!rem.is_zero()) break;
        ++mult;
        rest = q2;
      }
      out.emplace_back(r, mult);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return Scalar::canonical_less(a.first, b.first);
    });
    return out;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (size_t i = c_.size(); i-- > 0;) {
      if (c_[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      if (i == 0 || !c_[i].is_one()) s += c_[i].str();
      if (i > 0) {
        if (!c_[i].is_one()) s += "*";
        s += "X";
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s;
  }

 private:
  void normalize() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  void match(const Poly& other) const {
    if (f_ != other.f_) throw error("poly: field mismatch");
  }

  std::vector<Scalar> rational_root_candidates(uint64_t budget) const {
    // Clear denominators to an integer polynomial a_n X^n + ... + a_0.
    BigInt lcm = 1;
    for (const Scalar& c : c_) {
      BigInt d = denominator(c.rational());
      lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
    }
    std::vector<BigInt> a;
    for (const Scalar& c : c_)
      a.push_back(BigInt(numerator(c.rational() * BigRat(lcm))));
    size_t low = 0;
    while (low < a.size() && a[low] == 0) ++low;
    std::vector<Scalar> out{f_->zero()};
    if (low == a.size()) return out;  // should not happen: nonzero poly
    BigInt a0 = BigInt(boost::multiprecision::abs(a[low]));
    BigInt an = BigInt(boost::multiprecision::abs(a.back()));
    auto divisors = [&](BigInt v) {
      std::vector<BigInt> ds;
      uint64_t steps = 0;
      for (BigInt d = 1; d * d <= v; ++d) {
        if (++steps > budget)
          throw budget_exhausted("poly: rational root divisor search");
        if (v % d == 0) {
          ds.push_back(d);
          if (v / d != d) ds.push_back(v / d);
        }
      }
      return ds;
    };
    for (const BigInt& u : divisors(a0)) {
      for (const BigInt& v : divisors(an)) {
        if (boost::multiprecision::gcd(u, v) != 1) continue;
        out.push_back(f_->from_rational(BigRat(u, v)));
        out.push_back(f_->from_rational(BigRat(-u, v)));
      }
    }
    return out;
  }

  FieldPtr f_;
  std::vector<Scalar> c_;
};

/// Elementary symmetric functions e_1..e_n from power sums p_1..p_n by the
/// Newton identities; requires characteristic zero or > n.
inline std::vector<Scalar> newton_from_power_sums(
    const std::vector<Scalar>& p) {
  if (p.empty()) return {};
  FieldPtr f = p[0].field();
  size_t n = p.size();
  if (f->characteristic() != 0 && f->characteristic() <= n)
    throw error("newton: characteristic too small");
  std::vector<Scalar> e{f->one()};  // e_0
  for (size_t k = 1; k <= n; ++k) {
    Scalar acc = f->zero();
    Scalar sign = f->one();
    for (size_t i = 1; i <= k; ++i) {
      acc += sign * e[k - i] * p[i - 1];
      sign = -sign;
    }
    e.push_back(acc / f->from_int(static_cast<long long>(k)));
  }
  return std::vector<Scalar>(e.begin() + 1, e.end());
}

}  // namespace invol
