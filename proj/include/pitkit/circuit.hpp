#pragma once

// The depth-3 circuit model: linear forms with zero constant term,
// multiplication terms c * l_1 * ... * l_d, and circuits summing at most k
// such terms of common degree d over n variables. A brute-force sparse
// expansion is included as the ground-truth identity oracle, together with
// homogenization of affine inputs via a dedicated variable at index 0.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pitkit/errors.hpp"
#include "pitkit/field.hpp"

namespace pitkit {

using Point = std::vector<FieldElement>;

inline constexpr std::size_t kDefaultExpandCap = 1'000'000;

// A linear polynomial with zero constant term, stored as its coefficient
// vector (a_1 ... a_n). The all-zero vector is the zero form.
class LinearForm {
 public:
  LinearForm() = default;
  explicit LinearForm(std::vector<FieldElement> coeffs) : coeffs_(std::move(coeffs)) {}

  std::size_t vars() const { return coeffs_.size(); }
  const FieldElement& coeff(std::size_t i) const { return coeffs_[i]; }
  const std::vector<FieldElement>& coeffs() const { return coeffs_; }

  Field field() const { return coeffs_.front().field(); }

  bool is_zero() const {
    for (const auto& c : coeffs_) {
      if (!c.is_zero()) return false;
    }
    return true;
  }

  FieldElement eval(const Point& p) const {
    if (p.size() != coeffs_.size()) raise(Errc::dimension_mismatch, "point has wrong arity");
    FieldElement acc = coeffs_.front().field().zero();
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (!coeffs_[i].is_zero()) acc = acc + coeffs_[i] * p[i];
    }
    return acc;
  }

  LinearForm scaled(const FieldElement& c) const {
    std::vector<FieldElement> out;
    out.reserve(coeffs_.size());
    for (const auto& a : coeffs_) out.push_back(a * c);
    return LinearForm(std::move(out));
  }

  friend LinearForm operator+(const LinearForm& a, const LinearForm& b) {
    if (a.vars() != b.vars()) raise(Errc::dimension_mismatch, "form arity mismatch");
    std::vector<FieldElement> out;
    out.reserve(a.vars());
    for (std::size_t i = 0; i < a.vars(); ++i) out.push_back(a.coeffs_[i] + b.coeffs_[i]);
    return LinearForm(std::move(out));
  }

  friend bool operator==(const LinearForm& a, const LinearForm& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const LinearForm& a, const LinearForm& b) { return !(a == b); }

  static int cmp(const LinearForm& a, const LinearForm& b) {
    for (std::size_t i = 0; i < a.vars() && i < b.vars(); ++i) {
      const int c = FieldElement::cmp(a.coeffs_[i], b.coeffs_[i]);
      if (c != 0) return c;
    }
    return a.vars() < b.vars() ? -1 : (a.vars() == b.vars() ? 0 : 1);
  }

  // x_i over n variables (0-based index).
  static LinearForm unit(const Field& f, std::size_t n, std::size_t i) {
    std::vector<FieldElement> c(n, f.zero());
    c[i] = f.one();
    return LinearForm(std::move(c));
  }

  static LinearForm zero(const Field& f, std::size_t n) {
    return LinearForm(std::vector<FieldElement>(n, f.zero()));
  }

 private:
  std::vector<FieldElement> coeffs_;
};

// c * l_1 * ... * l_d. A term whose form list acquired a zero form under a
// homomorphism is the zero polynomial; vanished() reports that. Construction
// from documents rejects zero forms, images of maps may carry them.
class MultiplicationTerm {
 public:
  MultiplicationTerm() = default;
  MultiplicationTerm(FieldElement scalar, std::vector<LinearForm> forms)
      : scalar_(std::move(scalar)), forms_(std::move(forms)) {}

  const FieldElement& scalar() const { return scalar_; }
  const std::vector<LinearForm>& forms() const { return forms_; }
  std::size_t degree() const { return forms_.size(); }
  Field field() const { return scalar_.field(); }

  std::size_t vars() const { return forms_.empty() ? 0 : forms_.front().vars(); }

  bool vanished() const {
    if (scalar_.is_zero()) return true;
    for (const auto& f : forms_) {
      if (f.is_zero()) return true;
    }
    return false;
  }

  FieldElement eval(const Point& p) const {
    FieldElement acc = scalar_;
    for (const auto& f : forms_) {
      if (acc.is_zero()) break;
      acc = acc * f.eval(p);
    }
    return acc;
  }

  friend bool operator==(const MultiplicationTerm& a, const MultiplicationTerm& b) {
    return a.scalar_ == b.scalar_ && a.forms_ == b.forms_;
  }

 private:
  FieldElement scalar_;
  std::vector<LinearForm> forms_;
};

// Sparse exact multivariate polynomial: exponent vector -> nonzero
// coefficient. The empty map is the zero polynomial. Deterministic iteration
// order (std::map) keeps every downstream artifact reproducible.
class SparsePoly {
 public:
  using Expo = std::vector<std::uint32_t>;

  SparsePoly(Field field, std::size_t n) : field_(field), n_(n) {}

  static SparsePoly zero(Field field, std::size_t n) { return SparsePoly(field, n); }

  static SparsePoly constant(Field field, std::size_t n, const FieldElement& c) {
    SparsePoly p(field, n);
    p.add_monomial(Expo(n, 0), c);
    return p;
  }

  Field field() const { return field_; }
  std::size_t vars() const { return n_; }
  const std::map<Expo, FieldElement>& monomials() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  void add_monomial(const Expo& e, const FieldElement& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  void add(const SparsePoly& o) {
    if (o.n_ != n_) raise(Errc::dimension_mismatch, "polynomial arity mismatch");
    for (const auto& [e, c] : o.terms_) add_monomial(e, c);
  }

  void negate() {
    for (auto& [e, c] : terms_) c = -c;
  }

  void scale(const FieldElement& c) {
    if (c.is_zero()) {
      terms_.clear();
      return;
    }
    for (auto& [e, v] : terms_) v = v * c;
  }

  // Multiply by a linear form; the intermediate result never exceeds `cap`
  // monomials or the expansion aborts loudly.
  SparsePoly times_form(const LinearForm& f, std::size_t cap) const {
    if (f.vars() != n_) raise(Errc::dimension_mismatch, "form arity mismatch");
    SparsePoly out(field_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const FieldElement& a = f.coeff(i);
      if (a.is_zero()) continue;
      for (const auto& [e, c] : terms_) {
        Expo e2 = e;
        ++e2[i];
        out.add_monomial(e2, c * a);
        if (out.terms_.size() > cap) {
          raise(Errc::expansion_too_large, "monomial cap exceeded");
        }
      }
    }
    return out;
  }

  SparsePoly times(const SparsePoly& o, std::size_t cap) const {
    if (o.n_ != n_) raise(Errc::dimension_mismatch, "polynomial arity mismatch");
    SparsePoly out(field_, n_);
    for (const auto& [e1, c1] : terms_) {
      for (const auto& [e2, c2] : o.terms_) {
        Expo e = e1;
        for (std::size_t i = 0; i < n_; ++i) e[i] += e2[i];
        out.add_monomial(e, c1 * c2);
        if (out.terms_.size() > cap) {
          raise(Errc::expansion_too_large, "monomial cap exceeded");
        }
      }
    }
    return out;
  }

  FieldElement eval(const Point& p) const {
    if (p.size() != n_) raise(Errc::dimension_mismatch, "point has wrong arity");
    FieldElement acc = field_.zero();
    for (const auto& [e, c] : terms_) {
      FieldElement t = c;
      for (std::size_t i = 0; i < n_; ++i) {
        if (e[i]) t = t * p[i].pow(e[i]);
      }
      acc = acc + t;
    }
    return acc;
  }

  // Total degree of every monomial if the polynomial is homogeneous (the zero
  // polynomial reports degree 0).
  std::optional<std::uint32_t> homogeneous_degree() const {
    std::optional<std::uint32_t> deg;
    for (const auto& [e, c] : terms_) {
      std::uint32_t d = 0;
      for (auto x : e) d += x;
      if (!deg) {
        deg = d;
      } else if (*deg != d) {
        return std::nullopt;
      }
    }
    return deg ? deg : std::optional<std::uint32_t>(0);
  }

  // Substitute a value for one variable (its exponent collapses to zero).
  SparsePoly substituted(std::size_t var, const FieldElement& value) const {
    SparsePoly out(field_, n_);
    for (const auto& [e, c] : terms_) {
      Expo e2 = e;
      e2[var] = 0;
      out.add_monomial(e2, e[var] ? c * value.pow(e[var]) : c);
    }
    return out;
  }

  // Remove a variable whose exponent is zero in every monomial.
  SparsePoly dropped_var(std::size_t var) const {
    SparsePoly out(field_, n_ - 1);
    for (const auto& [e, c] : terms_) {
      if (e[var] != 0) raise(Errc::dimension_mismatch, "variable still occurs");
      Expo e2;
      e2.reserve(n_ - 1);
      for (std::size_t i = 0; i < n_; ++i) {
        if (i != var) e2.push_back(e[i]);
      }
      out.add_monomial(e2, c);
    }
    return out;
  }

  friend bool operator==(const SparsePoly& a, const SparsePoly& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

 private:
  Field field_;
  std::size_t n_;
  std::map<Expo, FieldElement> terms_;
};

// A sum of at most k multiplication terms, each of degree exactly d, over n
// variables. Fewer than k terms is allowed; the empty sum is the zero circuit.
class Circuit {
 public:
  Circuit(Field field, std::size_t n, std::size_t d, std::size_t k,
          std::vector<MultiplicationTerm> terms)
      : field_(field), n_(n), d_(d), k_(k), terms_(std::move(terms)) {
    if (n_ == 0) raise(Errc::malformed_document, "n must be >= 1");
    if (k_ == 0) raise(Errc::malformed_document, "k must be >= 1");
    if (terms_.size() > k_) raise(Errc::too_many_terms, "more than k terms");
    for (const auto& t : terms_) {
      if (t.field() != field_) raise(Errc::field_mismatch, "term in a different field");
      if (t.degree() != d_) raise(Errc::degree_mismatch, "term degree differs from d");
      if (t.scalar().is_zero()) raise(Errc::malformed_document, "term scalar must be nonzero");
      for (const auto& f : t.forms()) {
        if (f.vars() != n_) raise(Errc::dimension_mismatch, "form arity differs from n");
      }
    }
  }

  Field field() const { return field_; }
  std::size_t vars() const { return n_; }
  std::size_t degree() const { return d_; }
  std::size_t fanin_bound() const { return k_; }
  const std::vector<MultiplicationTerm>& terms() const { return terms_; }

  // Document-level invariant: no term may contain the zero form.
  void require_nonzero_forms() const {
    for (const auto& t : terms_) {
      for (const auto& f : t.forms()) {
        if (f.is_zero()) raise(Errc::zero_form_in_term, "term contains the zero form");
      }
    }
  }

  // All forms of all terms, in term order ("the list of size exactly kd").
  std::vector<LinearForm> form_list() const {
    std::vector<LinearForm> out;
    for (const auto& t : terms_) {
      for (const auto& f : t.forms()) out.push_back(f);
    }
    return out;
  }

  FieldElement evaluate(const Point& p) const {
    if (p.size() != n_) raise(Errc::dimension_mismatch, "point has wrong arity");
    for (const auto& x : p) {
      if (x.field() != field_) raise(Errc::field_mismatch, "point in a different field");
    }
    FieldElement acc = field_.zero();
    for (const auto& t : terms_) acc = acc + t.eval(p);
    return acc;
  }

  friend bool operator==(const Circuit& a, const Circuit& b) {
    return a.field_ == b.field_ && a.n_ == b.n_ && a.d_ == b.d_ && a.k_ == b.k_ &&
           a.terms_ == b.terms_;
  }

  Circuit subcircuit(const std::vector<std::size_t>& indices) const {
    std::vector<MultiplicationTerm> sel;
    sel.reserve(indices.size());
    for (std::size_t i : indices) {
      if (i >= terms_.size()) raise(Errc::index_out_of_range, "term index out of range");
      sel.push_back(terms_[i]);
    }
    return Circuit(field_, n_, d_, k_, std::move(sel));
  }

 private:
  Field field_;
  std::size_t n_, d_, k_;
  std::vector<MultiplicationTerm> terms_;
};

inline SparsePoly expand_term(const MultiplicationTerm& t, std::size_t n,
                              std::size_t cap = kDefaultExpandCap) {
  SparsePoly acc = SparsePoly::constant(t.field(), n, t.scalar());
  for (const auto& f : t.forms()) {
    acc = acc.times_form(f, cap);
    if (acc.is_zero()) break;
  }
  return acc;
}

// Ground-truth oracle: the fully multiplied-out polynomial. expand(C) is the
// zero map iff C is identically zero.
inline SparsePoly expand(const Circuit& c, std::size_t cap = kDefaultExpandCap) {
  SparsePoly acc(c.field(), c.vars());
  for (const auto& t : c.terms()) {
    acc.add(expand_term(t, c.vars(), cap));
    if (acc.size() > cap) raise(Errc::expansion_too_large, "monomial cap exceeded");
  }
  return acc;
}

// Affine front end: forms carry a leading constant entry (a_0, a_1 ... a_n)
// and terms may have unequal degrees up to d.
struct AffineForm {
  std::vector<FieldElement> coeffs;  // length n+1, index 0 is the constant
};

struct AffineTerm {
  FieldElement scalar;
  std::vector<AffineForm> forms;
};

struct AffineCircuit {
  Field field;
  std::size_t n, d, k;
  std::vector<AffineTerm> terms;
};

// Lift an affine circuit to the homogeneous model over n+1 variables. The
// constant of each affine factor becomes the coefficient of the new variable
// x_0, and short terms are padded with copies of x_0 up to degree d.
// Substituting x_0 = 1 recovers the input.
inline Circuit homogenize(const AffineCircuit& in) {
  const std::size_t n_out = in.n + 1;
  std::vector<MultiplicationTerm> terms;
  terms.reserve(in.terms.size());
  for (const auto& t : in.terms) {
    if (t.forms.size() > in.d) raise(Errc::degree_mismatch, "term degree exceeds d");
    std::vector<LinearForm> forms;
    forms.reserve(in.d);
    for (const auto& af : t.forms) {
      if (af.coeffs.size() != in.n + 1) {
        raise(Errc::dimension_mismatch, "affine form must list n+1 coefficients");
      }
      LinearForm lf{std::vector<FieldElement>(af.coeffs.begin(), af.coeffs.end())};
      if (lf.is_zero()) raise(Errc::zero_affine_factor, "affine factor is identically zero");
      forms.push_back(std::move(lf));
    }
    for (std::size_t pad = t.forms.size(); pad < in.d; ++pad) {
      forms.push_back(LinearForm::unit(in.field, n_out, 0));
    }
    terms.emplace_back(t.scalar, std::move(forms));
  }
  return Circuit(in.field, n_out, in.d, in.k, std::move(terms));
}

inline LinearForm embed_form(const LinearForm& f, const Embedding& emb) {
  std::vector<FieldElement> out;
  out.reserve(f.vars());
  for (const auto& c : f.coeffs()) out.push_back(emb(c));
  return LinearForm(std::move(out));
}

inline MultiplicationTerm embed_term(const MultiplicationTerm& t, const Embedding& emb) {
  std::vector<LinearForm> forms;
  forms.reserve(t.forms().size());
  for (const auto& f : t.forms()) forms.push_back(embed_form(f, emb));
  return MultiplicationTerm(emb(t.scalar()), std::move(forms));
}

// Coefficient-wise image of the circuit in a larger field.
inline Circuit embed_circuit(const Circuit& c, const Embedding& emb) {
  std::vector<MultiplicationTerm> terms;
  terms.reserve(c.terms().size());
  for (const auto& t : c.terms()) terms.push_back(embed_term(t, emb));
  return Circuit(emb.to(), c.vars(), c.degree(), c.fanin_bound(), std::move(terms));
}

}  // namespace pitkit
