#pragma once

// Canonical JSON encoding of fields, scalars, matrices, algebras with
// involution, subalgebras, and certified constructions. Round trips are
// bit-exact: the basis, involution images, and unit are stored verbatim,
// and reconstruction runs the full constructor validation. Certificate
// blocks carry their generators together with a transcript of the checks
// re-run when the certificate is verified.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "invol/algebra.hpp"
#include "invol/etale.hpp"
#include "invol/field.hpp"
#include "invol/matrix.hpp"
#include "invol/neat.hpp"

namespace invol {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Fields and scalars
// ---------------------------------------------------------------------------

inline json field_to_json(FieldPtr f) {
  if (!f->is_finite()) return json{{"kind", "q"}};
  json j{{"kind", "gf"},
         {"p", f->characteristic()},
         {"k", static_cast<uint64_t>(f->degree())}};
  if (f->degree() > 1) j["modulus"] = f->modulus();
  return j;
}

inline FieldPtr field_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "q") return Field::rationals();
  if (kind != "gf") throw error("serialize: unknown field kind '" + kind + "'");
  uint64_t p = j.at("p").get<uint64_t>();
  unsigned k = j.at("k").get<unsigned>();
  if (k > 1 && j.contains("modulus"))
    return Field::gf(p, k, j.at("modulus").get<std::vector<uint64_t>>());
  return Field::gf(p, k);
}

/// Finite scalars are encoded by their packed index; rationals by the exact
/// string "n/d" (or "n" for integers).
inline json scalar_to_json(const Scalar& s) {
  if (s.field()->is_finite()) return json(s.index());
  return json(s.rational().str());
}

inline Scalar scalar_from_json(FieldPtr f, const json& j) {
  if (f->is_finite()) {
    if (!j.is_number_unsigned())
      throw error("serialize: finite scalar must be an unsigned index");
    uint64_t idx = j.get<uint64_t>();
    if (idx >= f->cardinality())
      throw error("serialize: scalar index out of range");
    return f->element(idx);
  }
  if (!j.is_string())
    throw error("serialize: rational scalar must be an 'n/d' string");
  try {
    return f->from_rational(BigRat(j.get<std::string>()));
  } catch (const std::exception&) {
    throw error("serialize: malformed rational '" + j.get<std::string>() +
                "'");
  }
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (size_t j = 0; j < m.cols(); ++j)
      row.push_back(scalar_to_json(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(FieldPtr f, const json& j) {
  if (!j.is_array() || j.empty() || !j.at(0).is_array() || j.at(0).empty())
    throw error("serialize: matrix must be a nonempty array of rows");
  const size_t rows = j.size();
  const size_t cols = j.at(0).size();
  Matrix m(f, rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (j.at(i).size() != cols) throw error("serialize: ragged matrix rows");
    for (size_t c = 0; c < cols; ++c)
      m.at(i, c) = scalar_from_json(f, j.at(i).at(c));
  }
  return m;
}

inline json matrices_to_json(const std::vector<Matrix>& ms) {
  json out = json::array();
  for (const Matrix& m : ms) out.push_back(matrix_to_json(m));
  return out;
}

inline std::vector<Matrix> matrices_from_json(FieldPtr f, const json& j) {
  if (!j.is_array()) throw error("serialize: expected an array of matrices");
  std::vector<Matrix> out;
  out.reserve(j.size());
  for (const auto& m : j) out.push_back(matrix_from_json(f, m));
  return out;
}

// ---------------------------------------------------------------------------
// Algebras with involution
// ---------------------------------------------------------------------------

inline json algebra_to_json(const AlgebraWithInvolution& a) {
  json j;
  j["schema"] = "invol-algebra/1";
  j["field"] = field_to_json(a.field());
  j["ambient"] = static_cast<uint64_t>(a.ambient());
  j["model"] = a.model();
  j["basis"] = matrices_to_json(a.basis());
  j["sigma_images"] = matrices_to_json(a.sigma_images());
  j["unit"] = matrix_to_json(a.unit());
  if (a.centre_tag() == CentreTag::split) {
    j["zeta1"] = matrix_to_json(a.zeta1());
    j["zeta2"] = matrix_to_json(a.zeta2());
  }
  return j;
}

inline AlgebraWithInvolution algebra_from_json(const json& j) {
  if (j.value("schema", std::string()) != "invol-algebra/1")
    throw error("serialize: unknown algebra schema");
  FieldPtr f = field_from_json(j.at("field"));
  size_t ambient = j.at("ambient").get<uint64_t>();
  std::vector<Matrix> basis = matrices_from_json(f, j.at("basis"));
  std::vector<Matrix> images = matrices_from_json(f, j.at("sigma_images"));
  Matrix unit = matrix_from_json(f, j.at("unit"));
  AlgebraWithInvolution::BuildOptions opts;
  if (j.contains("zeta1") && j.contains("zeta2"))
    opts.split_centre_hint = std::make_pair(matrix_from_json(f, j.at("zeta1")),
                                            matrix_from_json(f, j.at("zeta2")));
  return AlgebraWithInvolution(f, ambient, std::move(basis), std::move(images),
                               std::move(unit),
                               j.value("model", std::string("restored")),
                               opts);
}

// ---------------------------------------------------------------------------
// Subalgebras
// ---------------------------------------------------------------------------

/// The stored basis is the subalgebra's canonical reduced basis, so
/// rebuilding from it reproduces the same basis verbatim.
inline json subalgebra_to_json(const Subalgebra& l) {
  json j;
  j["basis"] = matrices_to_json(l.basis());
  return j;
}

inline Subalgebra subalgebra_from_json(const AlgebraWithInvolution& a,
                                       const json& j) {
  std::vector<Matrix> gens = matrices_from_json(a.field(), j.at("basis"));
  return Subalgebra(&a, std::move(gens));
}

// ---------------------------------------------------------------------------
// Certified subalgebras
// ---------------------------------------------------------------------------

namespace detail {

inline void cert_check(bool ok, const std::string& what,
                       std::vector<std::string>& transcript) {
  if (!ok) throw error("certificate: failed check: " + what);
  transcript.push_back(what);
}

}  // namespace detail

/// Re-verifies a certificate against its parent algebra from scratch and
/// returns the transcript of checks performed. Throws on the first failed
/// check. Kinds:
///   "split"        generators are nonzero pairwise-orthogonal symmetric
///                  idempotents summing to the unit, spanning a neat etale
///                  subalgebra;
///   "biquadratic"  two commuting quadratic etale generators spanning a
///                  neat subalgebra of degree 4;
///   "quaternion"   a quadratic etale generator u plus a symmetric unit w
///                  with w u + u w = w and w^2 a nonzero scalar, spanning a
///                  sigma-stable subalgebra of dimension 4;
///   "triquadratic" three commuting quadratic generators spanning a
///                  sigma-stable commutative etale subalgebra of degree 8,
///                  the third an idempotent h with h + sigma(h) = 1.
inline std::vector<std::string> verify_certificate(
    const AlgebraWithInvolution& a, const EtaleCertificate& cert) {
  std::vector<std::string> t;
  auto check = [&](bool ok, const std::string& what) {
    detail::cert_check(ok, what, t);
  };
  const auto& g = cert.generators;
  check(!g.empty(), "certificate has generators");
  for (const Matrix& m : g)
    check(a.contains(m), "generators lie in the algebra");

  if (cert.kind == "split") {
    Matrix sum(a.field(), a.ambient(), a.ambient());
    for (size_t i = 0; i < g.size(); ++i) {
      check(g[i] * g[i] == g[i] && !g[i].is_zero(),
            "generator " + std::to_string(i) + " is a nonzero idempotent");
      check(a.sigma(g[i]) == g[i],
            "generator " + std::to_string(i) + " is symmetric");
      for (size_t j = i + 1; j < g.size(); ++j)
        check((g[i] * g[j]).is_zero() && (g[j] * g[i]).is_zero(),
              "generators " + std::to_string(i) + "," + std::to_string(j) +
                  " are orthogonal");
      sum = sum + g[i];
    }
    check(sum == a.unit(), "idempotents sum to the unit");
    Subalgebra l(&a, g);
    check(l.dim() == g.size(), "span has dimension " +
                                   std::to_string(g.size()));
    check(is_etale(l), "span is etale");
    check(is_neat(a, l).neat, "span is neat");
    return t;
  }

  if (cert.kind == "biquadratic") {
    check(g.size() == 2, "biquadratic certificate has two generators");
    for (size_t i = 0; i < 2; ++i) {
      Subalgebra ki(&a, {g[i]});
      check(ki.dim() == 2,
            "generator " + std::to_string(i) + " is quadratic");
      check(is_etale(ki),
            "generator " + std::to_string(i) + " generates an etale algebra");
    }
    check(g[0] * g[1] == g[1] * g[0], "generators commute");
    Subalgebra kl(&a, g);
    check(kl.dim() == 4, "joint span has dimension 4");
    check(is_etale(kl), "joint span is etale");
    check(is_neat(a, kl).neat, "joint span is neat");
    return t;
  }

  if (cert.kind == "quaternion") {
    check(g.size() == 2, "quaternion certificate has two generators");
    const Matrix& u = g[0];
    const Matrix& w = g[1];
    Subalgebra k(&a, {u});
    check(k.dim() == 2, "u is quadratic");
    check(is_etale(k), "u generates an etale algebra");
    check(is_neat(a, k).neat, "F[u] is neat");
    check(a.sigma(w) == w, "w is symmetric");
    check(w * u + u * w == w, "w conjugates u to its Galois conjugate");
    auto lam = detail::scalar_multiple_of_unit(a, w * w);
    check(lam.has_value() && !lam->is_zero(), "w^2 is a nonzero scalar");
    Subalgebra q(&a, {u, w});
    check(q.dim() == 4, "span is a quaternion algebra");
    bool stable = true;
    for (const Matrix& b : q.basis()) stable = stable && q.contains(a.sigma(b));
    check(stable, "span is sigma-stable");
    return t;
  }

  if (cert.kind == "triquadratic") {
    check(g.size() == 3, "triquadratic certificate has three generators");
    for (size_t i = 0; i < 3; ++i) {
      check(Subalgebra(&a, {g[i]}).dim() == 2,
            "generator " + std::to_string(i) + " is quadratic");
      for (size_t j = i + 1; j < 3; ++j)
        check(g[i] * g[j] == g[j] * g[i],
              "generators " + std::to_string(i) + "," + std::to_string(j) +
                  " commute");
    }
    const Matrix& h = g[2];
    check(h * h == h, "h is an idempotent");
    check(h + a.sigma(h) == a.unit(), "h + sigma(h) = 1");
    Subalgebra m(&a, g);
    check(m.dim() == 8, "joint span has dimension 8");
    check(m.commutative(), "joint span is commutative");
    check(is_etale(m), "joint span is etale");
    bool stable = true;
    for (const Matrix& b : m.basis()) stable = stable && m.contains(a.sigma(b));
    check(stable, "joint span is sigma-stable");
    return t;
  }

  throw error("certificate: unknown kind '" + cert.kind + "'");
}

/// Serializes a certified subalgebra together with the transcript of a
/// fresh verification of its certificate.
inline json certified_to_json(const AlgebraWithInvolution& a,
                              const CertifiedSubalgebra& c) {
  json j = subalgebra_to_json(c.l);
  json cert;
  cert["kind"] = c.certificate.kind;
  cert["generators"] = matrices_to_json(c.certificate.generators);
  cert["transcript"] = verify_certificate(a, c.certificate);
  j["certificate"] = cert;
  return j;
}

/// Restores a certified subalgebra and re-verifies its certificate.
inline CertifiedSubalgebra certified_from_json(const AlgebraWithInvolution& a,
                                               const json& j) {
  Subalgebra l = subalgebra_from_json(a, j);
  const json& cert = j.at("certificate");
  EtaleCertificate c{cert.at("kind").get<std::string>(),
                     matrices_from_json(a.field(), cert.at("generators"))};
  verify_certificate(a, c);
  return {std::move(l), std::move(c)};
}

}  // namespace invol
