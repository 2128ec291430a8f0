#pragma once

// The Vandermonde substitution x_i -> sum_j beta^{ij} y_j that maps circuits
// over n variables to circuits over k variables, plus exact rank computation
// for form sets and the deterministic family of such maps under which a
// circuit vanishes iff it is identically zero.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "pitkit/circuit.hpp"
#include "pitkit/errors.hpp"
#include "pitkit/field.hpp"
#include "pitkit/linalg.hpp"

namespace pitkit {

// The homomorphism x_i -> sum_{j in [k]} beta^{ij} y_j, held as the n x k
// matrix of powers beta^{ij} (i, j 1-based in the exponent). Scalars map to
// themselves.
class ReductionMap {
 public:
  // Builds the power matrix by cumulative products only.
  static ReductionMap build(const FieldElement& beta, std::size_t n, std::size_t k) {
    ReductionMap rm;
    rm.beta_ = beta;
    rm.n_ = n;
    rm.k_ = k;
    rm.matrix_.reserve(n);
    const Field f = beta.field();
    FieldElement row_base = f.one();  // beta^i for the current row
    for (std::size_t i = 0; i < n; ++i) {
      row_base = row_base * beta;
      std::vector<FieldElement> row;
      row.reserve(k);
      FieldElement entry = f.one();
      for (std::size_t j = 0; j < k; ++j) {
        entry = entry * row_base;  // beta^{i(j+1)} after this step
        row.push_back(entry);
      }
      rm.matrix_.push_back(std::move(row));
    }
    return rm;
  }

  const FieldElement& beta() const { return beta_; }
  std::size_t source_vars() const { return n_; }
  std::size_t target_vars() const { return k_; }

  // beta^{(i+1)(j+1)} for 0-based (i, j).
  const FieldElement& entry(std::size_t i, std::size_t j) const { return matrix_[i][j]; }

  // Image of a form: the vector-matrix product b_r = sum_i a_i beta^{ri}.
  LinearForm apply(const LinearForm& form) const {
    if (form.vars() != n_) raise(Errc::dimension_mismatch, "form arity differs from n");
    const Field f = beta_.field();
    std::vector<FieldElement> out(k_, f.zero());
    for (std::size_t i = 0; i < n_; ++i) {
      const FieldElement& a = form.coeff(i);
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < k_; ++j) {
        out[j] = out[j] + a * matrix_[i][j];
      }
    }
    return LinearForm(std::move(out));
  }

  MultiplicationTerm apply(const MultiplicationTerm& t) const {
    std::vector<LinearForm> forms;
    forms.reserve(t.forms().size());
    for (const auto& f : t.forms()) forms.push_back(apply(f));
    return MultiplicationTerm(t.scalar(), std::move(forms));
  }

  // Term-wise image; terms whose mapped forms include zero stay in place (the
  // term is then identically zero, see MultiplicationTerm::vanished) so term
  // indices line up with the source circuit. k and d are preserved.
  Circuit apply(const Circuit& c) const {
    if (c.vars() != n_) raise(Errc::dimension_mismatch, "circuit arity differs from n");
    std::vector<MultiplicationTerm> terms;
    terms.reserve(c.terms().size());
    for (const auto& t : c.terms()) terms.push_back(apply(t));
    return Circuit(c.field(), k_, c.degree(), c.fanin_bound(), std::move(terms));
  }

 private:
  ReductionMap() = default;

  FieldElement beta_;
  std::size_t n_ = 0, k_ = 0;
  std::vector<std::vector<FieldElement>> matrix_;
};

inline ReductionMap build_psi(const FieldElement& beta, std::size_t n, std::size_t k) {
  return ReductionMap::build(beta, n, k);
}

// Rank of a set of forms, viewed as vectors, by exact Gaussian elimination.
inline std::size_t rank(const std::vector<LinearForm>& forms) {
  if (forms.empty()) return 0;
  const Field f = forms.front().field();
  const std::size_t n = forms.front().vars();
  std::vector<Vec> rows;
  rows.reserve(forms.size());
  for (const auto& form : forms) {
    if (form.vars() != n) raise(Errc::dimension_mismatch, "form arity mismatch");
    if (form.field() != f) raise(Errc::field_mismatch, "forms in different fields");
    rows.push_back(form.coeffs());
  }
  return matrix_rank(std::move(rows), n);
}

// The deterministic family of dnk^2 + 1 maps with distinct beta drawn from
// the canonical field enumeration. A circuit is identically zero iff every
// map in the family sends it to the zero polynomial.
inline std::vector<ReductionMap> reduction_family(std::size_t k, std::size_t d, std::size_t n,
                                                  const Field& field) {
  const std::uint64_t count =
      static_cast<std::uint64_t>(d) * n * k * k + 1;
  if (field.is_finite() && field.cardinality() < BigInt(count)) {
    raise(Errc::field_too_small, "need more than d*n*k^2 field elements");
  }
  std::vector<ReductionMap> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    out.push_back(ReductionMap::build(field.element_at(i), n, k));
  }
  return out;
}

struct BadBetaReport {
  std::size_t count = 0;
  std::vector<FieldElement> bad;
};

// Diagnostic: which candidate betas drop the rank of S under the map into k
// variables.
inline BadBetaReport count_bad_betas(const std::vector<LinearForm>& forms,
                                     const std::vector<FieldElement>& candidates, std::size_t k) {
  BadBetaReport report;
  if (forms.empty()) return report;
  const std::size_t base_rank = rank(forms);
  const std::size_t n = forms.front().vars();
  for (const auto& beta : candidates) {
    ReductionMap rm = ReductionMap::build(beta, n, k);
    std::vector<LinearForm> mapped;
    mapped.reserve(forms.size());
    for (const auto& f : forms) mapped.push_back(rm.apply(f));
    if (rank(mapped) < base_rank) {
      report.bad.push_back(beta);
    }
  }
  report.count = report.bad.size();
  return report;
}

}  // namespace pitkit
