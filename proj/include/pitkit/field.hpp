#pragma once

// Exact arithmetic over prime fields F_p, extension fields F_{p^m} and the
// rationals. Field descriptions are interned, so Field handles compare by
// pointer and elements stay cheap to copy. Elements are always held in
// canonical form: residues in [0,p), extension coefficient vectors of length
// exactly m with entries in [0,p), rationals with positive denominator and
// gcd(num,den)=1. Equal elements therefore have identical representations.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "pitkit/errors.hpp"

namespace pitkit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class FieldKind { prime, extension, rational };

// Coefficient vector of an extension-field element, low degree first.
using ExtCoeffs = boost::container::small_vector<std::uint64_t, 4>;

namespace detail {

// Largest characteristic we accept; keeps a+b and a*b (via __uint128_t)
// overflow-free on canonical residues.
inline constexpr std::uint64_t kMaxCharacteristic = std::uint64_t{1} << 62;

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  const std::uint64_t t = p - b;
  return a >= t ? a - t : a + b;
}

inline std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + (p - b);
}

inline std::uint64_t neg_mod(std::uint64_t a, std::uint64_t p) {
  return a == 0 ? 0 : p - a;
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b) % p);
}

inline std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t base = a % p, acc = 1 % p;
  while (e > 0) {
    if (e & 1) acc = mul_mod(acc, base, p);
    e >>= 1;
    if (e) base = mul_mod(base, base, p);
  }
  return acc;
}

// p is prime, a != 0: Fermat inverse.
inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  return pow_mod(a, p - 2, p);
}

// Deterministic trial division; adequate at desk scale.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t i = 3; i <= n / i; i += 2) {
    if (n % i == 0) return false;
  }
  return true;
}

// --- dense polynomials over F_p: coefficients low degree first, trimmed ---

using FpPoly = std::vector<std::uint64_t>;

inline void fp_trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int fp_deg(const FpPoly& a) { return static_cast<int>(a.size()) - 1; }

inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  FpPoly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      c[i + j] = add_mod(c[i + j], mul_mod(a[i], b[j], p), p);
    }
  }
  fp_trim(c);
  return c;
}

// Remainder of a by b (b nonzero).
inline FpPoly fp_rem(FpPoly a, const FpPoly& b, std::uint64_t p) {
  fp_trim(a);
  const int db = fp_deg(b);
  const std::uint64_t lead_inv = inv_mod(b.back(), p);
  while (fp_deg(a) >= db) {
    const std::uint64_t q = mul_mod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t j = 0; j < b.size(); ++j) {
      a[shift + j] = sub_mod(a[shift + j], mul_mod(q, b[j], p), p);
    }
    fp_trim(a);
  }
  return a;
}

inline std::pair<FpPoly, FpPoly> fp_divmod(FpPoly a, const FpPoly& b, std::uint64_t p) {
  fp_trim(a);
  const int db = fp_deg(b);
  const std::uint64_t lead_inv = inv_mod(b.back(), p);
  FpPoly quot(a.size() > b.size() - 1 ? a.size() - b.size() + 1 : 0, 0);
  while (fp_deg(a) >= db) {
    const std::uint64_t q = mul_mod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - b.size();
    quot[shift] = q;
    for (std::size_t j = 0; j < b.size(); ++j) {
      a[shift + j] = sub_mod(a[shift + j], mul_mod(q, b[j], p), p);
    }
    fp_trim(a);
  }
  fp_trim(quot);
  return {quot, a};
}

// Bezout coefficient u with u*a + v*mod = gcd; used for inverses mod an
// irreducible modulus, where the gcd is a nonzero constant.
inline FpPoly fp_inverse_mod(const FpPoly& a, const FpPoly& modulus, std::uint64_t p) {
  FpPoly r0 = modulus, r1 = a;
  fp_trim(r1);
  FpPoly s0 = {}, s1 = {1};  // coefficients of `a` in each remainder
  while (!r1.empty()) {
    auto [q, r2] = fp_divmod(r0, r1, p);
    FpPoly qs1 = fp_mul(q, s1, p);
    FpPoly s2 = s0;
    if (s2.size() < qs1.size()) s2.resize(qs1.size(), 0);
    for (std::size_t i = 0; i < qs1.size(); ++i) s2[i] = sub_mod(s2[i], qs1[i], p);
    fp_trim(s2);
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r0 = gcd(a, modulus), a unit since the modulus is irreducible and a != 0.
  const std::uint64_t scale = inv_mod(r0[0], p);
  for (auto& c : s0) c = mul_mod(c, scale, p);
  return fp_rem(std::move(s0), modulus, p);
}

// Monic polynomial of degree m whose non-leading coefficients are the base-p
// digits of `index` with c_0 as the most significant digit; this makes the
// enumeration lexicographic over the low-degree-first coefficient vector.
inline FpPoly monic_at(std::uint64_t index, std::uint64_t p, unsigned m) {
  FpPoly f(m + 1, 0);
  f[m] = 1;
  for (unsigned j = m; j-- > 0;) {
    if (index == 0) break;
    f[j] = index % p;
    index /= p;
  }
  return f;
}

// No monic factor of degree in [1, m/2] divides f. Brute force by design.
inline bool fp_is_irreducible(const FpPoly& f, std::uint64_t p) {
  const unsigned m = static_cast<unsigned>(fp_deg(f));
  if (m == 0) return false;
  for (unsigned t = 1; t <= m / 2; ++t) {
    BigInt total = boost::multiprecision::pow(BigInt(p), t);
    for (BigInt idx = 0; idx < total; ++idx) {
      FpPoly g = monic_at(static_cast<std::uint64_t>(idx), p, t);
      if (fp_rem(f, g, p).empty()) return false;
    }
  }
  return true;
}

struct FieldRep {
  FieldKind kind;
  std::uint64_t p = 0;  // characteristic; 0 for the rationals
  unsigned m = 1;       // extension degree; 1 for prime fields
  FpPoly modulus;       // size m+1, monic, extension fields only
  BigInt card;          // p^m; 0 means infinite
};

// Interning registry: one immutable FieldRep per distinct field description,
// never deallocated, so raw pointers stay valid for the process lifetime and
// field equality is pointer equality.
inline const FieldRep* intern_field(FieldRep&& rep) {
  using Key = std::tuple<int, std::uint64_t, unsigned, FpPoly>;
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<FieldRep>>* registry =
      new std::map<Key, std::unique_ptr<FieldRep>>();
  Key key{static_cast<int>(rep.kind), rep.p, rep.m, rep.modulus};
  std::lock_guard<std::mutex> lock(mu);
  auto it = registry->find(key);
  if (it == registry->end()) {
    it = registry->emplace(std::move(key), std::make_unique<FieldRep>(std::move(rep))).first;
  }
  return it->second.get();
}

}  // namespace detail

// Lexicographically first monic irreducible polynomial of degree m over F_p,
// as a low-degree-first coefficient list of length m+1.
inline std::vector<std::uint64_t> find_irreducible(std::uint64_t p, unsigned m) {
  if (m == 0) raise(Errc::bad_modulus_degree, "extension degree must be >= 1");
  BigInt total = boost::multiprecision::pow(BigInt(p), m);
  for (BigInt idx = 0; idx < total; ++idx) {
    detail::FpPoly f = detail::monic_at(static_cast<std::uint64_t>(idx), p, m);
    if (detail::fp_is_irreducible(f, p)) return f;
  }
  raise(Errc::reducible_modulus, "no irreducible polynomial found");  // unreachable
}

class FieldElement;

class Field {
 public:
  Field() = default;

  static Field prime(std::uint64_t p) {
    validate_characteristic(p);
    detail::FieldRep rep;
    rep.kind = FieldKind::prime;
    rep.p = p;
    rep.m = 1;
    rep.card = p;
    return Field(detail::intern_field(std::move(rep)));
  }

  static Field extension(std::uint64_t p, unsigned m) {
    validate_characteristic(p);
    if (m == 0) raise(Errc::bad_modulus_degree, "extension degree must be >= 1");
    return extension_unchecked(p, m, find_irreducible(p, m));
  }

  static Field extension(std::uint64_t p, unsigned m, std::vector<std::uint64_t> modulus) {
    validate_characteristic(p);
    if (m == 0) raise(Errc::bad_modulus_degree, "extension degree must be >= 1");
    if (modulus.size() != static_cast<std::size_t>(m) + 1) {
      raise(Errc::bad_modulus_degree, "modulus must list exactly m+1 coefficients");
    }
    for (auto& c : modulus) c %= p;
    if (modulus.back() != 1) raise(Errc::bad_modulus_degree, "modulus must be monic");
    if (!detail::fp_is_irreducible(modulus, p)) {
      raise(Errc::reducible_modulus, "modulus factors over F_p");
    }
    return extension_unchecked(p, m, std::move(modulus));
  }

  static Field rationals() {
    detail::FieldRep rep;
    rep.kind = FieldKind::rational;
    rep.card = 0;
    return Field(detail::intern_field(std::move(rep)));
  }

  bool valid() const { return rep_ != nullptr; }
  FieldKind kind() const { return rep_->kind; }
  std::uint64_t characteristic() const { return rep_->p; }
  unsigned extension_degree() const { return rep_->m; }
  const std::vector<std::uint64_t>& modulus() const { return rep_->modulus; }
  bool is_finite() const { return rep_->kind != FieldKind::rational; }
  const BigInt& cardinality() const { return rep_->card; }

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_integer(long long v) const;
  FieldElement from_residue(std::uint64_t r) const;
  FieldElement from_coeffs(std::vector<std::uint64_t> coeffs) const;
  FieldElement from_rational(Rational r) const;

  // Canonical enumeration: primes and rationals run 0,1,2,...; extensions run
  // over coefficient vectors in lexicographic order (c_0 compared first).
  FieldElement element_at(std::uint64_t index) const;

  std::string describe() const {
    switch (rep_->kind) {
      case FieldKind::prime: return "F_" + std::to_string(rep_->p);
      case FieldKind::extension:
        return "F_" + std::to_string(rep_->p) + "^" + std::to_string(rep_->m);
      case FieldKind::rational: return "Q";
    }
    return "?";
  }

  friend bool operator==(Field a, Field b) { return a.rep_ == b.rep_; }
  friend bool operator!=(Field a, Field b) { return a.rep_ != b.rep_; }

  const detail::FieldRep* rep() const { return rep_; }
  static Field handle(const detail::FieldRep* rep) { return Field(rep); }

 private:
  explicit Field(const detail::FieldRep* rep) : rep_(rep) {}

  static void validate_characteristic(std::uint64_t p) {
    if (p >= detail::kMaxCharacteristic) {
      raise(Errc::not_prime, "characteristic too large for exact word arithmetic");
    }
    if (!detail::is_prime_u64(p)) {
      raise(Errc::not_prime, std::to_string(p) + " is not prime");
    }
  }

  static Field extension_unchecked(std::uint64_t p, unsigned m, std::vector<std::uint64_t> modulus) {
    detail::FieldRep rep;
    rep.kind = FieldKind::extension;
    rep.p = p;
    rep.m = m;
    rep.modulus = std::move(modulus);
    rep.card = boost::multiprecision::pow(BigInt(p), m);
    return Field(detail::intern_field(std::move(rep)));
  }

  const detail::FieldRep* rep_ = nullptr;
};

class FieldElement {
 public:
  FieldElement() = default;

  Field field() const { return Field::handle(rep_); }
  bool valid() const { return rep_ != nullptr; }

  bool is_zero() const {
    switch (rep_->kind) {
      case FieldKind::prime: return residue() == 0;
      case FieldKind::extension: {
        for (auto c : coeffs()) {
          if (c != 0) return false;
        }
        return true;
      }
      case FieldKind::rational: return rational() == 0;
    }
    return false;
  }

  bool is_one() const {
    switch (rep_->kind) {
      case FieldKind::prime: return residue() == 1 % rep_->p;
      case FieldKind::extension: {
        const auto& c = coeffs();
        if (c[0] != 1 % rep_->p) return false;
        for (std::size_t i = 1; i < c.size(); ++i) {
          if (c[i] != 0) return false;
        }
        return true;
      }
      case FieldKind::rational: return rational() == 1;
    }
    return false;
  }

  std::uint64_t residue() const { return std::get<std::uint64_t>(v_); }
  const ExtCoeffs& coeffs() const { return std::get<ExtCoeffs>(v_); }
  const Rational& rational() const { return std::get<Rational>(v_); }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    a.check_same_field(b);
    switch (a.rep_->kind) {
      case FieldKind::prime:
        return FieldElement(a.rep_, detail::add_mod(a.residue(), b.residue(), a.rep_->p));
      case FieldKind::extension: {
        ExtCoeffs c = a.coeffs();
        const auto& d = b.coeffs();
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = detail::add_mod(c[i], d[i], a.rep_->p);
        return FieldElement(a.rep_, std::move(c));
      }
      case FieldKind::rational: return FieldElement(a.rep_, a.rational() + b.rational());
    }
    raise(Errc::field_mismatch, "invalid element");
  }

  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    a.check_same_field(b);
    switch (a.rep_->kind) {
      case FieldKind::prime:
        return FieldElement(a.rep_, detail::sub_mod(a.residue(), b.residue(), a.rep_->p));
      case FieldKind::extension: {
        ExtCoeffs c = a.coeffs();
        const auto& d = b.coeffs();
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = detail::sub_mod(c[i], d[i], a.rep_->p);
        return FieldElement(a.rep_, std::move(c));
      }
      case FieldKind::rational: return FieldElement(a.rep_, a.rational() - b.rational());
    }
    raise(Errc::field_mismatch, "invalid element");
  }

  FieldElement operator-() const {
    switch (rep_->kind) {
      case FieldKind::prime: return FieldElement(rep_, detail::neg_mod(residue(), rep_->p));
      case FieldKind::extension: {
        ExtCoeffs c = coeffs();
        for (auto& x : c) x = detail::neg_mod(x, rep_->p);
        return FieldElement(rep_, std::move(c));
      }
      case FieldKind::rational: return FieldElement(rep_, -rational());
    }
    raise(Errc::field_mismatch, "invalid element");
  }

  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    a.check_same_field(b);
    switch (a.rep_->kind) {
      case FieldKind::prime:
        return FieldElement(a.rep_, detail::mul_mod(a.residue(), b.residue(), a.rep_->p));
      case FieldKind::extension: return FieldElement(a.rep_, ext_mul(a.coeffs(), b.coeffs(), *a.rep_));
      case FieldKind::rational: return FieldElement(a.rep_, a.rational() * b.rational());
    }
    raise(Errc::field_mismatch, "invalid element");
  }

  FieldElement inv() const {
    if (is_zero()) raise(Errc::division_by_zero, "inverse of zero");
    switch (rep_->kind) {
      case FieldKind::prime: return FieldElement(rep_, detail::inv_mod(residue(), rep_->p));
      case FieldKind::extension: {
        detail::FpPoly a(coeffs().begin(), coeffs().end());
        detail::FpPoly r = detail::fp_inverse_mod(a, rep_->modulus, rep_->p);
        ExtCoeffs c(rep_->m, 0);
        for (std::size_t i = 0; i < r.size(); ++i) c[i] = r[i];
        return FieldElement(rep_, std::move(c));
      }
      case FieldKind::rational: return FieldElement(rep_, Rational(1) / rational());
    }
    raise(Errc::field_mismatch, "invalid element");
  }

  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inv(); }

  FieldElement pow(std::uint64_t e) const {
    FieldElement base = *this;
    FieldElement acc = field().one();
    while (e > 0) {
      if (e & 1) acc = acc * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return acc;
  }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    if (a.rep_ != b.rep_) return false;
    return a.v_ == b.v_;
  }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  // Total order within one field (canonical enumeration order for finite
  // fields, numeric order for rationals); used for deterministic sorting.
  static int cmp(const FieldElement& a, const FieldElement& b) {
    a.check_same_field(b);
    switch (a.rep_->kind) {
      case FieldKind::prime:
        return a.residue() < b.residue() ? -1 : (a.residue() == b.residue() ? 0 : 1);
      case FieldKind::extension: {
        const auto& x = a.coeffs();
        const auto& y = b.coeffs();
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (x[i] != y[i]) return x[i] < y[i] ? -1 : 1;
        }
        return 0;
      }
      case FieldKind::rational:
        return a.rational() < b.rational() ? -1 : (a.rational() == b.rational() ? 0 : 1);
    }
    return 0;
  }

  std::string to_string() const {
    switch (rep_->kind) {
      case FieldKind::prime: return std::to_string(residue());
      case FieldKind::extension: {
        std::string s = "[";
        const auto& c = coeffs();
        for (std::size_t i = 0; i < c.size(); ++i) {
          if (i) s += ",";
          s += std::to_string(c[i]);
        }
        return s + "]";
      }
      case FieldKind::rational: return rational().str();
    }
    return "?";
  }

  // Canonical byte encoding for hashing: residues and extension coefficients
  // as 8-byte little-endian words, rationals as their decimal string.
  void append_canonical_bytes(std::string& out) const {
    auto push_u64 = [&out](std::uint64_t v) {
      for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>(v & 0xff));
        v >>= 8;
      }
    };
    switch (rep_->kind) {
      case FieldKind::prime:
        push_u64(residue());
        return;
      case FieldKind::extension:
        for (auto c : coeffs()) push_u64(c);
        return;
      case FieldKind::rational:
        out += rational().str();
        out.push_back(';');
        return;
    }
  }

 private:
  friend class Field;
  friend class Embedding;

  using Payload = std::variant<std::uint64_t, ExtCoeffs, Rational>;

  FieldElement(const detail::FieldRep* rep, std::uint64_t r) : rep_(rep), v_(r) {}
  FieldElement(const detail::FieldRep* rep, ExtCoeffs c) : rep_(rep), v_(std::move(c)) {}
  FieldElement(const detail::FieldRep* rep, Rational r) : rep_(rep), v_(std::move(r)) {}

  void check_same_field(const FieldElement& o) const {
    if (rep_ != o.rep_) {
      raise(Errc::field_mismatch, "operands belong to different fields");
    }
  }

  static ExtCoeffs ext_mul(const ExtCoeffs& a, const ExtCoeffs& b, const detail::FieldRep& rep) {
    const std::uint64_t p = rep.p;
    const unsigned m = rep.m;
    boost::container::small_vector<std::uint64_t, 8> conv(2 * m - 1, 0);
    for (unsigned i = 0; i < m; ++i) {
      if (a[i] == 0) continue;
      for (unsigned j = 0; j < m; ++j) {
        conv[i + j] = detail::add_mod(conv[i + j], detail::mul_mod(a[i], b[j], p), p);
      }
    }
    // fold x^t for t >= m down through the monic modulus
    for (unsigned t = 2 * m - 2; t >= m && t < 2 * m; --t) {
      const std::uint64_t c = conv[t];
      if (c == 0) continue;
      conv[t] = 0;
      for (unsigned j = 0; j < m; ++j) {
        conv[t - m + j] = detail::sub_mod(conv[t - m + j], detail::mul_mod(c, rep.modulus[j], p), p);
      }
    }
    ExtCoeffs out(m, 0);
    for (unsigned i = 0; i < m; ++i) out[i] = conv[i];
    return out;
  }

  const detail::FieldRep* rep_ = nullptr;
  Payload v_;
};

inline FieldElement Field::zero() const {
  switch (rep_->kind) {
    case FieldKind::prime: return FieldElement(rep_, std::uint64_t{0});
    case FieldKind::extension: return FieldElement(rep_, ExtCoeffs(rep_->m, 0));
    case FieldKind::rational: return FieldElement(rep_, Rational(0));
  }
  raise(Errc::field_mismatch, "invalid field");
}

inline FieldElement Field::one() const { return from_integer(1); }

inline FieldElement Field::from_integer(long long v) const {
  switch (rep_->kind) {
    case FieldKind::prime: {
      long long r = v % static_cast<long long>(rep_->p);
      if (r < 0) r += static_cast<long long>(rep_->p);
      return FieldElement(rep_, static_cast<std::uint64_t>(r));
    }
    case FieldKind::extension: {
      long long r = v % static_cast<long long>(rep_->p);
      if (r < 0) r += static_cast<long long>(rep_->p);
      ExtCoeffs c(rep_->m, 0);
      c[0] = static_cast<std::uint64_t>(r);
      return FieldElement(rep_, std::move(c));
    }
    case FieldKind::rational: return FieldElement(rep_, Rational(v));
  }
  raise(Errc::field_mismatch, "invalid field");
}

inline FieldElement Field::from_residue(std::uint64_t r) const {
  if (rep_->kind != FieldKind::prime) raise(Errc::field_mismatch, "from_residue needs a prime field");
  return FieldElement(rep_, r % rep_->p);
}

inline FieldElement Field::from_coeffs(std::vector<std::uint64_t> coeffs) const {
  if (rep_->kind != FieldKind::extension) raise(Errc::field_mismatch, "from_coeffs needs an extension field");
  if (coeffs.size() != rep_->m) raise(Errc::dimension_mismatch, "coefficient vector must have length m");
  ExtCoeffs c(rep_->m, 0);
  for (unsigned i = 0; i < rep_->m; ++i) c[i] = coeffs[i] % rep_->p;
  return FieldElement(rep_, std::move(c));
}

inline FieldElement Field::from_rational(Rational r) const {
  if (rep_->kind != FieldKind::rational) raise(Errc::field_mismatch, "from_rational needs the rational field");
  return FieldElement(rep_, std::move(r));
}

inline FieldElement Field::element_at(std::uint64_t index) const {
  switch (rep_->kind) {
    case FieldKind::prime:
      if (index >= rep_->p) raise(Errc::index_out_of_range, "enumeration index exceeds field size");
      return FieldElement(rep_, index);
    case FieldKind::extension: {
      ExtCoeffs c(rep_->m, 0);
      for (unsigned j = rep_->m; j-- > 0;) {
        c[j] = index % rep_->p;
        index /= rep_->p;
      }
      if (index != 0) raise(Errc::index_out_of_range, "enumeration index exceeds field size");
      return FieldElement(rep_, std::move(c));
    }
    case FieldKind::rational: return FieldElement(rep_, Rational(index));
  }
  raise(Errc::field_mismatch, "invalid field");
}

// An operation-preserving map between two fields, attached to the result of
// ensure_min_size. Identity, constant lift F_p -> F_{p^m}, or a subfield
// embedding F_{p^m} -> F_{p^m'} sending the source generator to a root of the
// source modulus in the target.
class Embedding {
 public:
  static Embedding identity(Field f) { return Embedding(Kind::identity, f, f, {}); }

  static Embedding constant_lift(Field from, Field to) {
    return Embedding(Kind::constant, from, to, {});
  }

  static Embedding tower(Field from, Field to, FieldElement gen_image) {
    return Embedding(Kind::tower, from, to, std::move(gen_image));
  }

  Field from() const { return from_; }
  Field to() const { return to_; }
  bool is_identity() const { return kind_ == Kind::identity; }

  FieldElement operator()(const FieldElement& x) const {
    if (x.field() != from_) raise(Errc::field_mismatch, "element not in the embedding's source field");
    switch (kind_) {
      case Kind::identity: return x;
      case Kind::constant: {
        ExtCoeffs c(to_.extension_degree(), 0);
        c[0] = x.residue();
        return FieldElement(to_.rep(), std::move(c));
      }
      case Kind::tower: {
        // Horner evaluation of the source coefficient vector at the root.
        FieldElement acc = to_.zero();
        const auto& cs = x.coeffs();
        for (unsigned j = from_.extension_degree(); j-- > 0;) {
          acc = acc * gen_image_ + to_.from_integer(static_cast<long long>(cs[j]));
        }
        return acc;
      }
    }
    raise(Errc::field_mismatch, "invalid embedding");
  }

 private:
  enum class Kind { identity, constant, tower };

  Embedding(Kind k, Field from, Field to, FieldElement gen_image)
      : kind_(k), from_(from), to_(to), gen_image_(std::move(gen_image)) {}

  Kind kind_;
  Field from_, to_;
  FieldElement gen_image_;
};

// Smallest canonical field extending `f` with more than `bound` elements.
// The rationals and already-large fields come back unchanged with the
// identity embedding.
inline std::pair<Field, Embedding> ensure_min_size(const Field& f, const BigInt& bound) {
  if (!f.is_finite() || f.cardinality() > bound) {
    return {f, Embedding::identity(f)};
  }
  const std::uint64_t p = f.characteristic();
  const unsigned m0 = f.extension_degree();
  unsigned m = m0;
  BigInt card = f.cardinality();
  while (card <= bound) {
    m += m0;  // keep the source degree dividing the target degree
    card = boost::multiprecision::pow(BigInt(p), m);
  }
  Field big = Field::extension(p, m);
  if (f.kind() == FieldKind::prime) {
    return {big, Embedding::constant_lift(f, big)};
  }
  // Find the first root of the source modulus in the target, scanning the
  // canonical enumeration so the embedding is deterministic.
  const auto& mod = f.modulus();
  const BigInt total = big.cardinality();
  for (BigInt idx = 0; idx < total; ++idx) {
    FieldElement r = big.element_at(static_cast<std::uint64_t>(idx));
    FieldElement acc = big.zero();
    for (unsigned j = m0 + 1; j-- > 0;) {
      acc = acc * r + big.from_integer(static_cast<long long>(mod[j]));
    }
    if (acc.is_zero()) {
      return {big, Embedding::tower(f, big, r)};
    }
  }
  raise(Errc::field_too_small, "no embedding found (unreachable for m0 | m)");
}

}  // namespace pitkit
