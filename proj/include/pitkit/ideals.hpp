#pragma once

// Ideals generated by multiplication terms and the structure built on them:
// the radical span (the linear span of all forms appearing in the
// generators), similarity classes of forms modulo that span, nodes, paths,
// and certificates proving a circuit nonzero. Ideal membership for
// homogeneous data is decided degree by degree with exact linear algebra:
// f of degree D lies in <f_1,...,f_m> iff it lies in the linear span of
// { x^e * f_j : |e| = D - deg f_j }, so one row reduction per degree answers
// every query.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pitkit/circuit.hpp"
#include "pitkit/errors.hpp"
#include "pitkit/field.hpp"
#include "pitkit/linalg.hpp"

namespace pitkit {

inline constexpr std::size_t kDefaultGradedCap = 100'000;
inline constexpr std::size_t kDefaultPathCap = 100'000;

// Generators of an ideal. The empty list generates <0>.
class IdealGens {
 public:
  IdealGens(Field field, std::size_t n) : field_(field), n_(n) {}

  static IdealGens zero_ideal(Field field, std::size_t n) { return IdealGens(field, n); }

  void push(MultiplicationTerm gen) {
    if (gen.field() != field_) raise(Errc::field_mismatch, "generator in a different field");
    for (const auto& f : gen.forms()) {
      if (f.vars() != n_) raise(Errc::dimension_mismatch, "generator arity mismatch");
    }
    gens_.push_back(std::move(gen));
  }

  Field field() const { return field_; }
  std::size_t vars() const { return n_; }
  const std::vector<MultiplicationTerm>& generators() const { return gens_; }
  bool is_zero_ideal() const { return gens_.empty(); }

 private:
  Field field_;
  std::size_t n_;
  std::vector<MultiplicationTerm> gens_;
};

namespace detail {

inline RowBasis radsp_basis(const IdealGens& gens) {
  std::vector<Vec> rows;
  for (const auto& g : gens.generators()) {
    for (const auto& f : g.forms()) rows.push_back(f.coeffs());
  }
  return row_reduce(std::move(rows), gens.vars());
}

}  // namespace detail

// Row-reduced basis of the span of all forms appearing in all generators.
// radsp(<0>) is the empty basis.
inline std::vector<LinearForm> radsp(const IdealGens& gens) {
  RowBasis basis = detail::radsp_basis(gens);
  std::vector<LinearForm> out;
  out.reserve(basis.rows.size());
  for (auto& row : basis.rows) out.emplace_back(std::move(row));
  return out;
}

// One similarity class of L(f) modulo the radical span: members are indices
// into f's form list, in order of first occurrence. Forms lying inside the
// span share the class with representative 0.
struct FormClass {
  LinearForm rep;
  bool rep_is_zero = false;
  std::vector<std::size_t> members;
};

// Partition of L(f) under l ~ l' iff l' lies in F* l + radsp(gens), decided
// by exact residue proportionality. Classes appear by first occurrence.
inline std::vector<FormClass> similarity_classes(const MultiplicationTerm& f,
                                                 const IdealGens& gens) {
  const RowBasis basis = detail::radsp_basis(gens);
  std::vector<FormClass> classes;
  std::vector<Vec> class_residues;  // parallel to classes; empty for the zero class
  for (std::size_t idx = 0; idx < f.forms().size(); ++idx) {
    const LinearForm& form = f.forms()[idx];
    Vec res = reduce_against(basis, form.coeffs());
    if (is_zero_vec(res)) {
      bool placed = false;
      for (auto& c : classes) {
        if (c.rep_is_zero) {
          c.members.push_back(idx);
          placed = true;
          break;
        }
      }
      if (!placed) {
        FormClass c;
        c.rep = LinearForm::zero(f.field(), f.vars());
        c.rep_is_zero = true;
        c.members.push_back(idx);
        classes.push_back(std::move(c));
        class_residues.emplace_back();
      }
      continue;
    }
    // nonzero residue: similar to an existing class iff residues are
    // proportional (the scalar is then automatically nonzero)
    bool placed = false;
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
      if (classes[ci].rep_is_zero) continue;
      const Vec& ref = class_residues[ci];
      std::size_t lead = 0;
      while (ref[lead].is_zero()) ++lead;
      if (res[lead].is_zero()) continue;
      const FieldElement ratio = res[lead] / ref[lead];
      bool proportional = true;
      for (std::size_t j = 0; j < ref.size(); ++j) {
        if (res[j] != ratio * ref[j]) {
          proportional = false;
          break;
        }
      }
      if (proportional) {
        classes[ci].members.push_back(idx);
        placed = true;
        break;
      }
    }
    if (!placed) {
      FormClass c;
      c.rep = form;
      c.members.push_back(idx);
      classes.push_back(std::move(c));
      class_residues.push_back(std::move(res));
    }
  }
  return classes;
}

// The nodes of f modulo the ideal: one multiplication term per similarity
// class, the product of that class's forms. Their product gives back f up to
// its scalar.
inline std::vector<MultiplicationTerm> nodes(const MultiplicationTerm& f, const IdealGens& gens) {
  std::vector<MultiplicationTerm> out;
  for (const auto& cls : similarity_classes(f, gens)) {
    std::vector<LinearForm> forms;
    forms.reserve(cls.members.size());
    for (std::size_t idx : cls.members) forms.push_back(f.forms()[idx]);
    out.emplace_back(f.field().one(), std::move(forms));
  }
  return out;
}

// A path: node choices v_1..v_i over a base ideal, v_j taken from the nodes
// of T_j modulo the ideal grown by the previous choices.
class Path {
 public:
  explicit Path(IdealGens base) : base_(std::move(base)) {}

  const IdealGens& base() const { return base_; }
  const std::vector<MultiplicationTerm>& node_terms() const { return nodes_; }
  std::size_t length() const { return nodes_.size(); }

  Path extended(MultiplicationTerm node) const {
    Path p = *this;
    p.nodes_.push_back(std::move(node));
    return p;
  }

  // Base generators followed by the chosen nodes.
  IdealGens combined() const {
    IdealGens g = base_;
    for (const auto& v : nodes_) g.push(v);
    return g;
  }

 private:
  IdealGens base_;
  std::vector<MultiplicationTerm> nodes_;
};

// Depth-first enumeration of all paths of the first `length` terms of C over
// the base ideal: v_1 ranges over nodes(T_1, base), v_2 over
// nodes(T_2, <base, v_1>), and so on. length 0 yields the single empty path.
inline std::vector<Path> enumerate_paths(const Circuit& c, std::size_t length,
                                         const IdealGens& base,
                                         std::size_t cap = kDefaultPathCap) {
  if (length > c.terms().size()) raise(Errc::index_out_of_range, "path length exceeds term count");
  std::vector<Path> out;
  std::size_t visited = 0;
  struct Frame {
    Path path;
    IdealGens gens;
  };
  // explicit stack keeps the visit order identical to the recursive DFS
  std::vector<Frame> stack;
  stack.push_back({Path(base), base});
  while (!stack.empty()) {
    Frame frame = std::move(stack.back());
    stack.pop_back();
    if (frame.path.length() == length) {
      out.push_back(std::move(frame.path));
      continue;
    }
    const std::size_t j = frame.path.length();
    std::vector<MultiplicationTerm> choices = nodes(c.terms()[j], frame.gens);
    // push in reverse so the first choice is explored first
    for (std::size_t idx = choices.size(); idx-- > 0;) {
      if (++visited > cap) raise(Errc::path_explosion, "node-choice tree exceeds cap");
      IdealGens g = frame.gens;
      g.push(choices[idx]);
      stack.push_back({frame.path.extended(std::move(choices[idx])), std::move(g)});
    }
  }
  return out;
}

// One explicit member of the combination proving graded membership:
// coeff * x^monomial * generators[gen].
struct CombinationPart {
  std::size_t gen;
  SparsePoly::Expo monomial;
  FieldElement coeff;
};

// Graded membership oracle for a fixed generator list. Builds one reduced
// basis of the product span per queried degree and caches it.
class MembershipOracle {
 public:
  explicit MembershipOracle(IdealGens gens, std::size_t cap = kDefaultGradedCap)
      : gens_(std::move(gens)), cap_(cap) {
    for (const auto& g : gens_.generators()) {
      gen_polys_.push_back(expand_term(g, gens_.vars(), cap_));
    }
  }

  const IdealGens& gens() const { return gens_; }

  bool contains(const SparsePoly& f) {
    if (f.is_zero()) return true;
    const Degree& d = degree_data(required_degree(f));
    return in_row_span(d.span, to_vector(f, d));
  }

  bool contains(const MultiplicationTerm& t) {
    return contains(expand_term(t, gens_.vars(), cap_));
  }

  // Canonical residue of f against the degree-matched product span; empty
  // vector means f was zero.
  Vec residue(const SparsePoly& f) {
    if (f.is_zero()) return {};
    const Degree& d = degree_data(required_degree(f));
    return reduce_against(d.span, to_vector(f, d));
  }

  // Explicit combination with sum coeff * x^mono * gen == f, or nullopt.
  std::optional<std::vector<CombinationPart>> express(const SparsePoly& f) {
    if (f.is_zero()) return std::vector<CombinationPart>{};
    const Degree& d = degree_data(required_degree(f));
    std::vector<Vec> cols;
    cols.reserve(d.products.size());
    for (const auto& pr : d.products) cols.push_back(pr.vec);
    auto sol = solve_columns(cols, to_vector(f, d), gens_.field());
    if (!sol) return std::nullopt;
    std::vector<CombinationPart> parts;
    for (std::size_t j = 0; j < sol->size(); ++j) {
      if (!(*sol)[j].is_zero()) {
        parts.push_back({d.products[j].gen, d.products[j].mono, (*sol)[j]});
      }
    }
    return parts;
  }

 private:
  struct Product {
    std::size_t gen;
    SparsePoly::Expo mono;
    Vec vec;
  };

  struct Degree {
    std::vector<SparsePoly::Expo> monomials;
    std::map<SparsePoly::Expo, std::size_t> index;
    std::vector<Product> products;
    RowBasis span;
  };

  std::uint32_t required_degree(const SparsePoly& f) const {
    if (f.vars() != gens_.vars()) raise(Errc::dimension_mismatch, "arity mismatch");
    if (f.field() != gens_.field()) raise(Errc::field_mismatch, "query in a different field");
    auto deg = f.homogeneous_degree();
    if (!deg) raise(Errc::not_homogeneous, "membership query must be homogeneous");
    return *deg;
  }

  static void enumerate_monomials(std::size_t n, std::uint32_t degree,
                                  std::vector<SparsePoly::Expo>& out) {
    SparsePoly::Expo e(n, 0);
    struct Rec {
      std::size_t n;
      std::vector<SparsePoly::Expo>& out;
      SparsePoly::Expo& e;
      void go(std::size_t pos, std::uint32_t remaining) {
        if (pos + 1 == n) {
          e[pos] = remaining;
          out.push_back(e);
          e[pos] = 0;
          return;
        }
        for (std::uint32_t t = remaining + 1; t-- > 0;) {
          e[pos] = t;
          go(pos + 1, remaining - t);
        }
        e[pos] = 0;
      }
    } rec{n, out, e};
    rec.go(0, degree);
  }

  static BigInt monomial_count(std::size_t n, std::uint32_t degree) {
    // C(degree + n - 1, n - 1)
    BigInt num = 1, den = 1;
    for (std::size_t i = 1; i < n; ++i) {
      num *= BigInt(degree + i);
      den *= BigInt(i);
    }
    return num / den;
  }

  Vec to_vector(const SparsePoly& f, const Degree& d) const {
    Vec v(d.monomials.size(), gens_.field().zero());
    for (const auto& [e, c] : f.monomials()) {
      auto it = d.index.find(e);
      if (it == d.index.end()) raise(Errc::not_homogeneous, "monomial of unexpected degree");
      v[it->second] = c;
    }
    return v;
  }

  const Degree& degree_data(std::uint32_t degree) {
    auto it = cache_.find(degree);
    if (it != cache_.end()) return it->second;
    const std::size_t n = gens_.vars();
    if (monomial_count(n, degree) > BigInt(cap_)) {
      raise(Errc::graded_space_too_large, "degree-" + std::to_string(degree) +
                                              " monomial space exceeds cap");
    }
    Degree d;
    enumerate_monomials(n, degree, d.monomials);
    for (std::size_t i = 0; i < d.monomials.size(); ++i) d.index.emplace(d.monomials[i], i);
    for (std::size_t j = 0; j < gen_polys_.size(); ++j) {
      const SparsePoly& gp = gen_polys_[j];
      if (gp.is_zero()) continue;  // a vanished generator contributes nothing
      const std::uint32_t gdeg = *gp.homogeneous_degree();
      if (gdeg > degree) continue;
      std::vector<SparsePoly::Expo> multipliers;
      enumerate_monomials(n, degree - gdeg, multipliers);
      for (const auto& m : multipliers) {
        Product pr;
        pr.gen = j;
        pr.mono = m;
        pr.vec = Vec(d.monomials.size(), gens_.field().zero());
        for (const auto& [e, c] : gp.monomials()) {
          SparsePoly::Expo shifted = e;
          for (std::size_t i = 0; i < n; ++i) shifted[i] += m[i];
          pr.vec[d.index.at(shifted)] = c;
        }
        d.products.push_back(std::move(pr));
      }
    }
    std::vector<Vec> rows;
    rows.reserve(d.products.size());
    for (const auto& pr : d.products) rows.push_back(pr.vec);
    d.span = row_reduce(std::move(rows), d.monomials.size());
    return cache_.emplace(degree, std::move(d)).first->second;
  }

  IdealGens gens_;
  std::size_t cap_;
  std::vector<SparsePoly> gen_polys_;
  std::map<std::uint32_t, Degree> cache_;
};

inline bool membership(const SparsePoly& f, const IdealGens& gens,
                       std::size_t cap = kDefaultGradedCap) {
  MembershipOracle oracle(gens, cap);
  return oracle.contains(f);
}

inline bool membership(const MultiplicationTerm& t, const IdealGens& gens,
                       std::size_t cap = kDefaultGradedCap) {
  MembershipOracle oracle(gens, cap);
  return oracle.contains(t);
}

// The product of exactly those forms of T lying in the radical span of the
// path; the empty product is the constant 1.
inline MultiplicationTerm strip_radsp_factors(const MultiplicationTerm& t, const Path& path) {
  const RowBasis basis = detail::radsp_basis(path.combined());
  std::vector<LinearForm> kept;
  for (const auto& f : t.forms()) {
    if (in_row_span(basis, f.coeffs())) kept.push_back(f);
  }
  return MultiplicationTerm(t.field().one(), std::move(kept));
}

// A verified witness that C is not identically zero: an index i, a path of
// the first i terms over <0>, and a scalar alpha with
//   C_{[i]'} - alpha * T_{i+1} in <path>   and   T_{i+1} not in <path>.
struct Certificate {
  std::size_t i = 0;
  Path path;
  FieldElement alpha;
};

struct CertificateOptions {
  std::size_t path_cap = kDefaultPathCap;
  std::size_t graded_cap = kDefaultGradedCap;
  std::size_t expand_cap = kDefaultExpandCap;
};

// First certificate in deterministic order: i ascending, paths in DFS order
// over node choices (classes by first occurrence in each term's form list).
// alpha is recovered from the residues, never enumerated.
inline Certificate find_certificate(const Circuit& c, const CertificateOptions& opt = {}) {
  if (expand(c, opt.expand_cap).is_zero()) {
    raise(Errc::circuit_is_zero, "certificates exist only for nonzero circuits");
  }
  const std::size_t t = c.terms().size();
  const IdealGens zero = IdealGens::zero_ideal(c.field(), c.vars());
  for (std::size_t i = 0; i < t; ++i) {
    for (const Path& path : enumerate_paths(c, i, zero, opt.path_cap)) {
      MembershipOracle oracle(path.combined(), opt.graded_cap);
      const SparsePoly next_term = expand_term(c.terms()[i], c.vars(), opt.expand_cap);
      Vec term_res = oracle.residue(next_term);
      if (is_zero_vec(term_res)) continue;  // T_{i+1} in <path>
      SparsePoly tail(c.field(), c.vars());
      for (std::size_t j = i; j < t; ++j) {
        tail.add(expand_term(c.terms()[j], c.vars(), opt.expand_cap));
      }
      Vec tail_res = oracle.residue(tail);
      if (tail_res.empty()) tail_res = Vec(term_res.size(), c.field().zero());
      std::size_t lead = 0;
      while (term_res[lead].is_zero()) ++lead;
      const FieldElement alpha = tail_res[lead] / term_res[lead];
      if (alpha.is_zero()) continue;
      bool proportional = true;
      for (std::size_t j = 0; j < term_res.size(); ++j) {
        if (tail_res[j] != alpha * term_res[j]) {
          proportional = false;
          break;
        }
      }
      if (proportional) {
        return Certificate{i, path, alpha};
      }
    }
  }
  raise(Errc::certificate_not_found,
        "no certificate found for a nonzero circuit (implementation bug)");
}

// Re-derives the path and checks the three membership conditions:
// C_{[i]} in <path>, C_{[i]'} - alpha*T_{i+1} in <path>, T_{i+1} not in <path>.
inline bool verify_certificate(const Circuit& c, const Certificate& cert,
                               std::size_t graded_cap = kDefaultGradedCap,
                               std::size_t expand_cap = kDefaultExpandCap) {
  const std::size_t t = c.terms().size();
  if (cert.i >= t) return false;
  if (cert.path.length() != cert.i) return false;
  if (!cert.path.base().is_zero_ideal()) return false;
  if (!cert.alpha.valid() || cert.alpha.field() != c.field() || cert.alpha.is_zero()) return false;

  // each node must re-derive as a node of its term modulo the grown ideal
  IdealGens grown = IdealGens::zero_ideal(c.field(), c.vars());
  for (std::size_t j = 0; j < cert.i; ++j) {
    const MultiplicationTerm& claimed = cert.path.node_terms()[j];
    bool found = false;
    for (const auto& candidate : nodes(c.terms()[j], grown)) {
      if (candidate.forms().size() != claimed.forms().size()) continue;
      auto a = candidate.forms();
      auto b = claimed.forms();
      auto order = [](const LinearForm& x, const LinearForm& y) {
        return LinearForm::cmp(x, y) < 0;
      };
      std::sort(a.begin(), a.end(), order);
      std::sort(b.begin(), b.end(), order);
      if (a == b) {
        found = true;
        break;
      }
    }
    if (!found) return false;
    grown.push(claimed);
  }

  MembershipOracle oracle(cert.path.combined(), graded_cap);
  SparsePoly head(c.field(), c.vars());
  for (std::size_t j = 0; j < cert.i; ++j) {
    head.add(expand_term(c.terms()[j], c.vars(), expand_cap));
  }
  if (!oracle.contains(head)) return false;

  const SparsePoly next_term = expand_term(c.terms()[cert.i], c.vars(), expand_cap);
  if (oracle.contains(next_term)) return false;

  SparsePoly tail(c.field(), c.vars());
  for (std::size_t j = cert.i; j < t; ++j) {
    tail.add(expand_term(c.terms()[j], c.vars(), expand_cap));
  }
  SparsePoly scaled = next_term;
  scaled.scale(-cert.alpha);
  tail.add(scaled);
  return oracle.contains(tail);
}

}  // namespace pitkit
