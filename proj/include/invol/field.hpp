#pragma once

// Exact coefficient fields: GF(p), GF(p^k) with a stored irreducible modulus,
// and Q with arbitrary-precision values in lowest terms.
//
// Field instances are immutable and interned; handles are plain pointers and
// equality of fields is pointer equality. Scalar is a small value type bound
// to its field. Finite-field elements are stored as a packed index
// sum c_i p^i over the little-endian coefficient vector (c_0 .. c_{k-1}),
// which doubles as the canonical scalar encoding used by serialization and
// by deterministic enumeration.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace invol {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

class Field;
using FieldPtr = const Field*;

class Scalar;

namespace detail {

// Polynomial helpers over GF(p) on raw little-endian coefficient vectors.
// Used for modulus validation and reduction tables before Scalar exists.

inline std::vector<uint64_t> polmod_trim(std::vector<uint64_t> a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

inline std::vector<uint64_t> polmod_rem(std::vector<uint64_t> a,
                                        const std::vector<uint64_t>& f,
                                        uint64_t p) {
  // f monic. Reduces a mod f in place.
  const size_t k = f.size() - 1;
  a = polmod_trim(std::move(a));
  while (a.size() > k) {
    const uint64_t c = a.back();
    const size_t shift = a.size() - 1 - k;
    if (c != 0) {
      for (size_t i = 0; i < k; ++i) {
        uint64_t sub = (c * f[i]) % p;
        a[shift + i] = (a[shift + i] + p - sub) % p;
      }
    }
    a.pop_back();
    a = polmod_trim(std::move(a));
  }
  return a;
}

inline std::vector<uint64_t> polmod_mul(const std::vector<uint64_t>& a,
                                        const std::vector<uint64_t>& b,
                                        const std::vector<uint64_t>& f,
                                        uint64_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<uint64_t> c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    }
  }
  return polmod_rem(std::move(c), f, p);
}

inline std::vector<uint64_t> polmod_pow_x(uint64_t e,
                                          const std::vector<uint64_t>& f,
                                          uint64_t p) {
  // X^e mod f by square and multiply.
  std::vector<uint64_t> result{1};
  std::vector<uint64_t> base{0, 1};
  base = polmod_rem(std::move(base), f, p);
  while (e > 0) {
    if (e & 1) result = polmod_mul(result, base, f, p);
    base = polmod_mul(base, base, f, p);
    e >>= 1;
  }
  return result;
}

inline uint64_t mod_inverse_prime(uint64_t a, uint64_t p) {
  // Extended Euclid for a != 0 mod p.
  int64_t t = 0, newt = 1;
  int64_t r = static_cast<int64_t>(p), newr = static_cast<int64_t>(a % p);
  while (newr != 0) {
    int64_t q = r / newr;
    t -= q * newt;
    std::swap(t, newt);
    r -= q * newr;
    std::swap(r, newr);
  }
  if (r != 1) throw error("mod_inverse: not invertible");
  if (t < 0) t += static_cast<int64_t>(p);
  return static_cast<uint64_t>(t);
}

inline std::vector<uint64_t> polmod_gcd(std::vector<uint64_t> a,
                                        std::vector<uint64_t> b, uint64_t p) {
  a = polmod_trim(std::move(a));
  b = polmod_trim(std::move(b));
  while (!b.empty()) {
    // a mod b with b made monic on the fly.
    uint64_t lead_inv = mod_inverse_prime(b.back(), p);
    std::vector<uint64_t> bm(b);
    for (auto& c : bm) c = (c * lead_inv) % p;
    a = polmod_rem(std::move(a), bm, p);
    std::swap(a, b);
  }
  return a;
}

inline bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline bool is_irreducible_mod_p(const std::vector<uint64_t>& f, uint64_t p) {
  // Rabin's test. f monic of degree k >= 1 over GF(p).
  const size_t k = f.size() - 1;
  if (k == 0) return false;
  if (k == 1) return true;
  uint64_t pk = 1;
  for (size_t i = 0; i < k; ++i) pk *= p;
  // X^{p^k} == X (mod f)
  std::vector<uint64_t> xq = polmod_pow_x(pk, f, p);
  std::vector<uint64_t> x = polmod_rem({0, 1}, f, p);
  if (polmod_trim(xq) != polmod_trim(x)) return false;
  // gcd(X^{p^{k/r}} - X, f) == 1 for every prime r | k
  for (size_t r = 2; r <= k; ++r) {
    if (k % r != 0 || !is_prime_u64(r)) continue;
    uint64_t e = 1;
    for (size_t i = 0; i < k / r; ++i) e *= p;
    std::vector<uint64_t> g = polmod_pow_x(e, f, p);
    // g - X
    if (g.size() < 2) g.resize(2, 0);
    g[1] = (g[1] + p - 1) % p;
    std::vector<uint64_t> d = polmod_gcd(g, f, p);
    if (d.size() != 1) return false;
  }
  return true;
}

}  // namespace detail

/// An exact base field. Construct through the interning factories; compare
/// by pointer.
class Field {
 public:
  enum class Kind { finite, rationals };

  static FieldPtr rationals() { return intern_key("Q", 0, 0, {}); }

  /// GF(p), p prime.
  static FieldPtr gf(uint64_t p) { return gf(p, 1); }

  /// GF(p^k) with the shipped default modulus (p in {2,3,5}, k <= 8).
  static FieldPtr gf(uint64_t p, unsigned k) {
    if (k == 0) throw error("field: degree must be positive");
    if (k == 1) return intern_key("F", p, 1, {});
    return gf(p, k, default_modulus(p, k));
  }

  /// GF(p^k) with an explicit monic irreducible modulus (little-endian,
  /// length k+1). The modulus is re-verified on every construction.
  static FieldPtr gf(uint64_t p, unsigned k, std::vector<uint64_t> modulus) {
    if (k < 2) throw error("field: explicit modulus requires degree >= 2");
    return intern_key("F", p, k, std::move(modulus));
  }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::finite; }
  uint64_t characteristic() const { return p_; }  // 0 for Q
  unsigned degree() const { return k_; }
  /// Number of elements; 0 means infinite.
  uint64_t cardinality() const { return card_; }
  /// Little-endian monic modulus over GF(p); empty for prime fields and Q.
  const std::vector<uint64_t>& modulus() const { return modulus_; }

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(long long v) const;
  Scalar from_rational(const BigRat& v) const;
  /// Finite fields: element with packed index i (coefficients of i base p).
  /// Q: i-th element of the canonical height enumeration.
  Scalar element(uint64_t index) const;
  Scalar from_coeffs(const std::vector<uint64_t>& coeffs) const;

  std::string describe() const {
    if (kind_ == Kind::rationals) return "Q";
    if (k_ == 1) return "GF(" + std::to_string(p_) + ")";
    return "GF(" + std::to_string(p_) + "^" + std::to_string(k_) + ")";
  }

  // --- arithmetic on packed finite-field indices ---
  uint64_t f_add(uint64_t a, uint64_t b) const {
    if (k_ == 1) return (a + b) % p_;
    if (!add_lut_.empty()) return add_lut_[a * card_ + b];
    auto ca = unpack(a), cb = unpack(b);
    for (unsigned i = 0; i < k_; ++i) ca[i] = (ca[i] + cb[i]) % p_;
    return pack(ca);
  }
  uint64_t f_neg(uint64_t a) const {
    if (k_ == 1) return (p_ - a) % p_;
    auto ca = unpack(a);
    for (unsigned i = 0; i < k_; ++i) ca[i] = (p_ - ca[i]) % p_;
    return pack(ca);
  }
  uint64_t f_sub(uint64_t a, uint64_t b) const { return f_add(a, f_neg(b)); }
  uint64_t f_mul(uint64_t a, uint64_t b) const {
    if (k_ == 1) return (a * b) % p_;
    if (!mul_lut_.empty()) return mul_lut_[a * card_ + b];
    return mul_slow(a, b);
  }
  uint64_t f_inv(uint64_t a) const {
    if (a == 0) throw error("division by zero");
    if (k_ == 1) return detail::mod_inverse_prime(a, p_);
    return f_pow(a, card_ - 2);
  }
  uint64_t f_pow(uint64_t a, uint64_t e) const {
    uint64_t r = 1, base = a;
    while (e > 0) {
      if (e & 1) r = f_mul(r, base);
      base = f_mul(base, base);
      e >>= 1;
    }
    return r;
  }

 private:
  Field(Kind kind, uint64_t p, unsigned k, std::vector<uint64_t> modulus)
      : kind_(kind), p_(p), k_(k), modulus_(std::move(modulus)) {
    if (kind_ == Kind::rationals) {
      card_ = 0;
      return;
    }
    if (!detail::is_prime_u64(p_)) throw error("field: p must be prime");
    if (p_ >= (uint64_t(1) << 31)) throw error("field: p too large");
    card_ = 1;
    for (unsigned i = 0; i < k_; ++i) {
      if (card_ > (uint64_t(1) << 40) / p_) throw error("field: too large");
      card_ *= p_;
    }
    if (k_ > 1) {
      if (modulus_.size() != k_ + 1 || modulus_.back() != 1)
        throw error("field: modulus must be monic of degree k");
      for (auto c : modulus_)
        if (c >= p_) throw error("field: modulus coefficients out of range");
      if (!detail::is_irreducible_mod_p(modulus_, p_))
        throw error("field: modulus is reducible");
      // Reduction rows: X^{k+i} mod modulus, 0 <= i < k-1.
      std::vector<uint64_t> cur(k_, 0);
      for (unsigned i = 0; i < k_; ++i) cur[i] = (p_ - modulus_[i]) % p_;
      red_rows_.push_back(cur);
      for (unsigned i = 1; i + 1 < k_; ++i) {
        std::vector<uint64_t> nxt(k_, 0);
        uint64_t top = cur[k_ - 1];
        for (unsigned j = k_ - 1; j > 0; --j) nxt[j] = cur[j - 1];
        nxt[0] = 0;
        if (top != 0) {
          for (unsigned j = 0; j < k_; ++j)
            nxt[j] = (nxt[j] + top * red_rows_[0][j]) % p_;
        }
        red_rows_.push_back(nxt);
        cur = nxt;
      }
      if (card_ <= kLutLimit) {
        mul_lut_.resize(card_ * card_);
        add_lut_.resize(card_ * card_);
        for (uint64_t a = 0; a < card_; ++a) {
          for (uint64_t b = 0; b < card_; ++b) {
            mul_lut_[a * card_ + b] = static_cast<uint32_t>(mul_slow(a, b));
            auto ca = unpack(a), cb = unpack(b);
            for (unsigned i = 0; i < k_; ++i) ca[i] = (ca[i] + cb[i]) % p_;
            add_lut_[a * card_ + b] = static_cast<uint32_t>(pack(ca));
          }
        }
      }
    }
  }

  static constexpr uint64_t kLutLimit = 1024;

  std::array<uint64_t, 16> unpack(uint64_t idx) const {
    std::array<uint64_t, 16> c{};
    for (unsigned i = 0; i < k_; ++i) {
      c[i] = idx % p_;
      idx /= p_;
    }
    return c;
  }
  uint64_t pack(const std::array<uint64_t, 16>& c) const {
    uint64_t idx = 0;
    for (unsigned i = k_; i-- > 0;) idx = idx * p_ + c[i];
    return idx;
  }
  uint64_t mul_slow(uint64_t a, uint64_t b) const {
    auto ca = unpack(a), cb = unpack(b);
    std::array<uint64_t, 32> prod{};
    for (unsigned i = 0; i < k_; ++i) {
      if (ca[i] == 0) continue;
      for (unsigned j = 0; j < k_; ++j)
        prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p_;
    }
    std::array<uint64_t, 16> out{};
    for (unsigned i = 0; i < k_; ++i) out[i] = prod[i];
    for (unsigned i = 0; i + 1 < k_; ++i) {
      uint64_t c = prod[k_ + i];
      if (c == 0) continue;
      for (unsigned j = 0; j < k_; ++j)
        out[j] = (out[j] + c * red_rows_[i][j]) % p_;
    }
    return pack(out);
  }

  static const std::vector<uint64_t>& default_modulus(uint64_t p, unsigned k);

  static FieldPtr intern_key(const std::string& tag, uint64_t p, unsigned k,
                             std::vector<uint64_t> modulus) {
    struct Registry {
      std::mutex mu;
      std::map<std::tuple<std::string, uint64_t, unsigned,
                          std::vector<uint64_t>>,
               std::unique_ptr<Field>>
          fields;
    };
    static Registry registry;
    auto key = std::make_tuple(tag, p, k, modulus);
    std::lock_guard<std::mutex> lock(registry.mu);
    auto it = registry.fields.find(key);
    if (it != registry.fields.end()) return it->second.get();
    Kind kind = tag == "Q" ? Kind::rationals : Kind::finite;
    std::unique_ptr<Field> f(new Field(kind, p, k, std::move(modulus)));
    auto* ptr = f.get();
    registry.fields.emplace(std::move(key), std::move(f));
    return ptr;
  }

  Kind kind_;
  uint64_t p_ = 0;
  unsigned k_ = 1;
  uint64_t card_ = 0;
  std::vector<uint64_t> modulus_;
  std::vector<std::vector<uint64_t>> red_rows_;
  std::vector<uint32_t> mul_lut_;
  std::vector<uint32_t> add_lut_;

  // Lazily extended canonical enumeration of Q by height.
  mutable std::mutex q_mu_;
  mutable std::vector<BigRat> q_enum_;
  friend class Scalar;

  const BigRat& q_element(uint64_t index) const {
    std::lock_guard<std::mutex> lock(q_mu_);
    if (q_enum_.empty()) q_enum_.push_back(BigRat(0));
    uint64_t h = 1;
    // Recompute the next height from the current tail.
    if (q_enum_.size() > 1) {
      const BigRat& last = q_enum_.back();
      BigInt n = BigInt(boost::multiprecision::abs(numerator(last)));
      BigInt d = BigInt(denominator(last));
      h = static_cast<uint64_t>(n > d ? n : d) + 1;
    }
    while (q_enum_.size() <= index) {
      for (uint64_t d = 1; d <= h; ++d) {
        for (int64_t n = -static_cast<int64_t>(h);
             n <= static_cast<int64_t>(h); ++n) {
          if (n == 0) continue;
          uint64_t an = static_cast<uint64_t>(n < 0 ? -n : n);
          if (std::max(an, d) != h) continue;
          if (boost::multiprecision::gcd(BigInt(an), BigInt(d)) != 1) continue;
          q_enum_.push_back(BigRat(BigInt(n), BigInt(d)));
        }
      }
      ++h;
    }
    return q_enum_[index];
  }
};

/// An element of a Field. Value type; the zero-argument constructor makes an
/// unbound scalar that only supports assignment.
class Scalar {
 public:
  Scalar() : f_(nullptr), idx_(0) {}

  FieldPtr field() const { return f_; }
  bool bound() const { return f_ != nullptr; }

  bool is_zero() const {
    check();
    return f_->is_finite() ? idx_ == 0 : q_ == 0;
  }
  bool is_one() const {
    check();
    return f_->is_finite() ? idx_ == 1 : q_ == 1;
  }

  /// Packed index encoding (finite fields only).
  uint64_t index() const {
    check();
    if (!f_->is_finite()) throw error("scalar: index on infinite field");
    return idx_;
  }
  const BigRat& rational() const {
    check();
    if (f_->is_finite()) throw error("scalar: rational on finite field");
    return q_;
  }
  std::vector<uint64_t> coeffs() const {
    check();
    if (!f_->is_finite()) throw error("scalar: coeffs on infinite field");
    std::vector<uint64_t> c(f_->degree());
    uint64_t v = idx_;
    for (auto& ci : c) {
      ci = v % f_->characteristic();
      v /= f_->characteristic();
    }
    return c;
  }

  Scalar operator-() const {
    check();
    if (f_->is_finite()) return Scalar(f_, f_->f_neg(idx_));
    return Scalar(f_, -q_);
  }
  Scalar inverse() const {
    check();
    if (is_zero()) throw error("division by zero");
    if (f_->is_finite()) return Scalar(f_, f_->f_inv(idx_));
    return Scalar(f_, BigRat(1) / q_);
  }
  Scalar pow(uint64_t e) const {
    check();
    if (f_->is_finite()) return Scalar(f_, f_->f_pow(idx_, e));
    BigRat r(1), b = q_;
    while (e > 0) {
      if (e & 1) r *= b;
      b *= b;
      e >>= 1;
    }
    return Scalar(f_, r);
  }
  /// The unique p-th root in a finite field (inverse Frobenius).
  Scalar pth_root() const {
    check();
    if (!f_->is_finite()) throw error("scalar: pth_root on infinite field");
    uint64_t e = 1;
    for (unsigned i = 0; i + 1 < f_->degree(); ++i) e *= f_->characteristic();
    return pow(e);
  }
  /// Exact square root in Q if it exists.
  std::optional<Scalar> sqrt_in_q() const {
    check();
    if (f_->is_finite()) throw error("scalar: sqrt_in_q on finite field");
    if (q_ < 0) return std::nullopt;
    BigInt n = numerator(q_), d = denominator(q_);
    BigInt sn = boost::multiprecision::sqrt(n);
    BigInt sd = boost::multiprecision::sqrt(d);
    if (sn * sn != n || sd * sd != d) return std::nullopt;
    return Scalar(f_, BigRat(sn, sd));
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    a.match(b);
    if (a.f_->is_finite()) return Scalar(a.f_, a.f_->f_add(a.idx_, b.idx_));
    return Scalar(a.f_, a.q_ + b.q_);
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) {
    a.match(b);
    if (a.f_->is_finite()) return Scalar(a.f_, a.f_->f_sub(a.idx_, b.idx_));
    return Scalar(a.f_, a.q_ - b.q_);
  }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    a.match(b);
    if (a.f_->is_finite()) return Scalar(a.f_, a.f_->f_mul(a.idx_, b.idx_));
    return Scalar(a.f_, a.q_ * b.q_);
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    return a * b.inverse();
  }
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
  Scalar& operator/=(const Scalar& b) { return *this = *this / b; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    a.match(b);
    return a.f_->is_finite() ? a.idx_ == b.idx_ : a.q_ == b.q_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) {
    return !(a == b);
  }

  /// Deterministic total order used for lexicographic tie-breaking.
  static bool canonical_less(const Scalar& a, const Scalar& b) {
    a.match(b);
    if (a.f_->is_finite()) return a.idx_ < b.idx_;
    BigInt na = BigInt(boost::multiprecision::abs(numerator(a.q_)));
    BigInt nb = BigInt(boost::multiprecision::abs(numerator(b.q_)));
    BigInt ha = std::max(na, BigInt(denominator(a.q_)));
    BigInt hb = std::max(nb, BigInt(denominator(b.q_)));
    if (ha != hb) return ha < hb;
    return a.q_ < b.q_;
  }

  std::string str() const {
    if (!f_) return "<unbound>";
    if (!f_->is_finite()) {
      std::ostringstream os;
      os << q_;
      return os.str();
    }
    if (f_->degree() == 1) return std::to_string(idx_);
    std::string s = "[";
    auto c = coeffs();
    for (size_t i = 0; i < c.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(c[i]);
    }
    return s + "]";
  }

 private:
  friend class Field;
  Scalar(FieldPtr f, uint64_t idx) : f_(f), idx_(idx) {}
  Scalar(FieldPtr f, BigRat q) : f_(f), idx_(0), q_(std::move(q)) {}

  void check() const {
    if (!f_) throw error("scalar: unbound");
  }
  void match(const Scalar& other) const {
    check();
    other.check();
    if (f_ != other.f_) throw error("scalar: field mismatch");
  }

  FieldPtr f_;
  uint64_t idx_;
  BigRat q_;
};

inline Scalar Field::zero() const {
  return is_finite() ? Scalar(this, uint64_t(0)) : Scalar(this, BigRat(0));
}
inline Scalar Field::one() const {
  return is_finite() ? Scalar(this, uint64_t(1)) : Scalar(this, BigRat(1));
}
inline Scalar Field::from_int(long long v) const {
  if (!is_finite()) return Scalar(this, BigRat(v));
  long long m = v % static_cast<long long>(p_);
  if (m < 0) m += static_cast<long long>(p_);
  return Scalar(this, static_cast<uint64_t>(m));
}
inline Scalar Field::from_rational(const BigRat& v) const {
  if (!is_finite()) return Scalar(this, v);
  throw error("field: from_rational on finite field");
}
inline Scalar Field::element(uint64_t index) const {
  if (is_finite()) {
    if (index >= card_) throw error("field: element index out of range");
    return Scalar(this, index);
  }
  return Scalar(this, q_element(index));
}
inline Scalar Field::from_coeffs(const std::vector<uint64_t>& coeffs) const {
  if (!is_finite()) throw error("field: from_coeffs on infinite field");
  if (coeffs.size() != k_) throw error("field: coefficient count mismatch");
  uint64_t idx = 0;
  for (unsigned i = k_; i-- > 0;) {
    if (coeffs[i] >= p_) throw error("field: coefficient out of range");
    idx = idx * p_ + coeffs[i];
  }
  return Scalar(this, idx);
}

inline const std::vector<uint64_t>& Field::default_modulus(uint64_t p,
                                                           unsigned k) {
  // Lexicographically-first monic irreducibles (by packed coefficient
  // index); re-verified by the constructor's Rabin test on every load.
  static const std::map<std::pair<uint64_t, unsigned>, std::vector<uint64_t>>
      table = {
          {{2, 2}, {1, 1, 1}},
          {{2, 3}, {1, 1, 0, 1}},
          {{2, 4}, {1, 1, 0, 0, 1}},
          {{2, 5}, {1, 0, 1, 0, 0, 1}},
          {{2, 6}, {1, 1, 0, 0, 0, 0, 1}},
          {{2, 7}, {1, 1, 0, 0, 0, 0, 0, 1}},
          {{2, 8}, {1, 1, 0, 1, 1, 0, 0, 0, 1}},
          {{3, 2}, {1, 0, 1}},
          {{3, 3}, {1, 2, 0, 1}},
          {{3, 4}, {2, 1, 0, 0, 1}},
          {{3, 5}, {1, 2, 0, 0, 0, 1}},
          {{3, 6}, {2, 1, 0, 0, 0, 0, 1}},
          {{3, 7}, {2, 0, 1, 0, 0, 0, 0, 1}},
          {{3, 8}, {2, 0, 1, 0, 0, 0, 0, 0, 1}},
          {{5, 2}, {2, 0, 1}},
          {{5, 3}, {1, 1, 0, 1}},
          {{5, 4}, {2, 0, 0, 0, 1}},
          {{5, 5}, {1, 4, 0, 0, 0, 1}},
          {{5, 6}, {2, 1, 0, 0, 0, 0, 1}},
          {{5, 7}, {1, 1, 0, 0, 0, 0, 0, 1}},
          {{5, 8}, {2, 0, 0, 0, 0, 0, 0, 0, 1}},
      };
  auto it = table.find({p, k});
  if (it == table.end())
    throw error("field: no shipped modulus for GF(" + std::to_string(p) +
                "^" + std::to_string(k) + "); pass one explicitly");
  return it->second;
}

}  // namespace invol
