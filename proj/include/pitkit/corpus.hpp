#pragma once

// Deterministic test-circuit generation and the cross-mode suite runner.
//
// Randomness contract (any reimplementation must reproduce these streams):
// the generator is std::mt19937_64 seeded directly with the corpus seed.
// below(b) draws 64-bit values and rejects those >= 2^64 - (2^64 mod b),
// then reduces mod b. Field elements are drawn as below(R) applied to the
// canonical enumeration, where R is the field size capped at 256 (and 256
// for the rationals). Shuffles are Fisher-Yates from the back using below().

#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pitkit/circuit.hpp"
#include "pitkit/errors.hpp"
#include "pitkit/field.hpp"
#include "pitkit/hitting.hpp"
#include "pitkit/ideals.hpp"
#include "pitkit/reduce.hpp"

namespace pitkit {

inline constexpr std::uint64_t kMaxElementDrawRange = 256;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
      const std::uint64_t r = gen_();
      if (r < limit) return r % bound;
    }
  }

  // inclusive range
  std::size_t in_range(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(below(hi - lo + 1));
  }

  std::uint64_t element_range(const Field& f) const {
    if (!f.is_finite()) return kMaxElementDrawRange;
    if (f.cardinality() < BigInt(kMaxElementDrawRange)) {
      return static_cast<std::uint64_t>(f.cardinality());
    }
    return kMaxElementDrawRange;
  }

  FieldElement element(const Field& f) { return f.element_at(below(element_range(f))); }

  FieldElement nonzero_element(const Field& f) {
    for (;;) {
      FieldElement e = element(f);
      if (!e.is_zero()) return e;
    }
  }

  LinearForm form(const Field& f, std::size_t n) {
    std::vector<FieldElement> coeffs;
    coeffs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) coeffs.push_back(element(f));
    return LinearForm(std::move(coeffs));
  }

  LinearForm nonzero_form(const Field& f, std::size_t n) {
    for (;;) {
      LinearForm lf = form(f, n);
      if (!lf.is_zero()) return lf;
    }
  }

  MultiplicationTerm term(const Field& f, std::size_t n, std::size_t d) {
    std::vector<LinearForm> forms;
    forms.reserve(d);
    for (std::size_t i = 0; i < d; ++i) forms.push_back(nonzero_form(f, n));
    return MultiplicationTerm(nonzero_element(f), std::move(forms));
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

// The designed char-2 identity x*y + x*(x+y) + x*x (k=3, d=2, n=2) over F_2.
inline Circuit f2_identity_circuit() {
  const Field f2 = Field::prime(2);
  const LinearForm x = LinearForm::unit(f2, 2, 0);
  const LinearForm y = LinearForm::unit(f2, 2, 1);
  std::vector<MultiplicationTerm> terms;
  terms.emplace_back(f2.one(), std::vector<LinearForm>{x, y});
  terms.emplace_back(f2.one(), std::vector<LinearForm>{x, x + y});
  terms.emplace_back(f2.one(), std::vector<LinearForm>{x, x});
  return Circuit(f2, 2, 2, 3, std::move(terms));
}

struct CorpusSpec {
  std::uint64_t seed = 1;
  std::size_t count = 100;
  std::pair<std::size_t, std::size_t> k_range{1, 3};
  std::pair<std::size_t, std::size_t> d_range{1, 4};
  std::pair<std::size_t, std::size_t> n_range{1, 5};
  std::vector<Field> fields;
  double zero_fraction = 0.25;
  std::size_t expand_cap = kDefaultExpandCap;
};

struct LabeledCircuit {
  Circuit circuit;
  bool zero = false;         // expansion-oracle label, always recomputed here
  std::string builder;
};

namespace detail {

// The char-2 identity pattern scaled to degree d >= 2 over n >= 2 variables.
inline Circuit char2_identity(const Field& f, std::size_t k, std::size_t d, std::size_t n) {
  const LinearForm x = LinearForm::unit(f, n, 0);
  const LinearForm y = LinearForm::unit(f, n, 1);
  auto padded = [&](std::vector<LinearForm> forms) {
    while (forms.size() < d) forms.push_back(x);
    return MultiplicationTerm(f.one(), std::move(forms));
  };
  std::vector<MultiplicationTerm> terms;
  terms.push_back(padded({x, y}));
  terms.push_back(padded({x, x + y}));
  terms.push_back(padded({x, x}));
  return Circuit(f, n, d, k, std::move(terms));
}

}  // namespace detail

// Deterministic per seed. Zero circuits come first (ceil(count*zero_fraction)
// of them), built as cancellation pairs T + (-T) with permuted form lists,
// char-2 identities where the parameters allow, or the empty sum; the rest
// are random. Every label is recomputed by the expansion oracle regardless
// of the builder.
inline std::vector<LabeledCircuit> generate_corpus(const CorpusSpec& spec) {
  if (spec.fields.empty()) raise(Errc::malformed_document, "corpus needs at least one field");
  if (spec.zero_fraction < 0.0 || spec.zero_fraction > 1.0) {
    raise(Errc::malformed_document, "zero_fraction must lie in [0,1]");
  }
  if (spec.k_range.first > spec.k_range.second || spec.d_range.first > spec.d_range.second ||
      spec.n_range.first > spec.n_range.second) {
    raise(Errc::malformed_document, "empty parameter range");
  }
  Rng rng(spec.seed);
  const std::size_t zero_target =
      static_cast<std::size_t>(std::ceil(spec.zero_fraction * static_cast<double>(spec.count)));
  std::vector<LabeledCircuit> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    const Field field = spec.fields[rng.below(spec.fields.size())];
    const std::size_t k = rng.in_range(spec.k_range.first, spec.k_range.second);
    const std::size_t d = rng.in_range(spec.d_range.first, spec.d_range.second);
    const std::size_t n = rng.in_range(spec.n_range.first, spec.n_range.second);
    LabeledCircuit entry{Circuit(field, std::max<std::size_t>(n, 1), d, std::max<std::size_t>(k, 1), {}),
                         true, "empty"};
    if (i < zero_target) {
      const bool char2_ok =
          field.characteristic() == 2 && k >= 3 && d >= 2 && n >= 2;
      if (char2_ok && rng.below(2) == 0) {
        entry.circuit = detail::char2_identity(field, k, d, n);
        entry.builder = "char2-identity";
      } else if (k >= 2) {
        MultiplicationTerm t = rng.term(field, n, d);
        std::vector<LinearForm> permuted = t.forms();
        rng.shuffle(permuted);
        std::vector<MultiplicationTerm> terms{
            t, MultiplicationTerm(-t.scalar(), std::move(permuted))};
        entry.circuit = Circuit(field, n, d, k, std::move(terms));
        entry.builder = "cancellation-pair";
      }
      // k == 1 keeps the empty sum
    } else {
      std::vector<MultiplicationTerm> terms;
      terms.reserve(k);
      for (std::size_t j = 0; j < k; ++j) terms.push_back(rng.term(field, n, d));
      entry.circuit = Circuit(field, n, d, k, std::move(terms));
      entry.builder = "random";
    }
    entry.zero = expand(entry.circuit, spec.expand_cap).is_zero();
    out.push_back(std::move(entry));
  }
  return out;
}

// --- cross-mode suite ---

struct SuiteOptions {
  std::vector<std::string> modes{"hitting", "expand"};
  std::size_t jobs = 1;
  std::size_t expand_cap = kDefaultExpandCap;
  std::size_t graded_cap = kDefaultGradedCap;
  std::size_t path_cap = kDefaultPathCap;
  std::size_t sz_trials = 40;
  std::uint64_t sz_seed = 1;
};

struct ModeResult {
  std::string mode;
  std::string verdict;  // "zero" | "nonzero" | "probably-zero" | "skipped"
  double elapsed_ms = 0.0;
};

struct CircuitReport {
  std::size_t index = 0;
  bool label_zero = false;
  std::vector<ModeResult> results;
  bool agree = true;
};

struct RunReport {
  std::vector<CircuitReport> circuits;
  bool all_agree = true;
  std::size_t zero_labels = 0;
  std::size_t nonzero_labels = 0;
};

namespace detail {

inline Verdict circuit_blackbox(const Circuit& c, std::size_t jobs) {
  auto [big, emb] = hitting_field(c.fanin_bound(), c.degree(), c.vars(), c.field());
  const Circuit lifted = emb.is_identity() ? c : embed_circuit(c, emb);
  Oracle oracle = [&lifted](const Point& p) { return lifted.evaluate(p); };
  return blackbox_test(oracle, c.fanin_bound(), c.degree(), c.vars(), c.field(), jobs);
}

inline SzVerdict circuit_schwartz_zippel(const Circuit& c, std::size_t trials,
                                         std::uint64_t seed) {
  const std::size_t sample = std::max<std::size_t>(2 * c.degree(), 1);
  auto [big, emb] = ensure_min_size(c.field(), BigInt(sample) - 1);
  const Circuit lifted = emb.is_identity() ? c : embed_circuit(c, emb);
  Oracle oracle = [&lifted](const Point& p) { return lifted.evaluate(p); };
  return schwartz_zippel_test(oracle, c.vars(), c.degree(), sample, trials, seed, big);
}

}  // namespace detail

// Runs each requested mode on each circuit and cross-checks the verdicts
// against the labels. "probably-zero" counts as zero for agreement; certify
// is skipped on zero-labeled circuits (it can only attest nonzeroness).
inline RunReport run_suite(const std::vector<LabeledCircuit>& corpus, const SuiteOptions& opt) {
  RunReport report;
  for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
    const LabeledCircuit& entry = corpus[idx];
    CircuitReport cr;
    cr.index = idx;
    cr.label_zero = entry.zero;
    (entry.zero ? report.zero_labels : report.nonzero_labels)++;
    for (const std::string& mode : opt.modes) {
      ModeResult mr;
      mr.mode = mode;
      const auto start = std::chrono::steady_clock::now();
      if (mode == "expand") {
        mr.verdict = expand(entry.circuit, opt.expand_cap).is_zero() ? "zero" : "nonzero";
      } else if (mode == "hitting") {
        mr.verdict = detail::circuit_blackbox(entry.circuit, opt.jobs).nonzero ? "nonzero" : "zero";
      } else if (mode == "whitebox") {
        mr.verdict = whitebox_test(entry.circuit, opt.jobs).nonzero ? "nonzero" : "zero";
      } else if (mode == "random") {
        mr.verdict = detail::circuit_schwartz_zippel(entry.circuit, opt.sz_trials, opt.sz_seed)
                             .nonzero
                         ? "nonzero"
                         : "probably-zero";
      } else if (mode == "certify") {
        if (entry.zero) {
          mr.verdict = "skipped";
        } else {
          CertificateOptions copt;
          copt.path_cap = opt.path_cap;
          copt.graded_cap = opt.graded_cap;
          copt.expand_cap = opt.expand_cap;
          Certificate cert = find_certificate(entry.circuit, copt);
          mr.verdict = verify_certificate(entry.circuit, cert, opt.graded_cap, opt.expand_cap)
                           ? "nonzero"
                           : "invalid";
        }
      } else {
        raise(Errc::malformed_document, "unknown suite mode: " + mode);
      }
      mr.elapsed_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
      cr.results.push_back(std::move(mr));
    }
    for (const auto& mr : cr.results) {
      const bool mode_zeroish = mr.verdict == "zero" || mr.verdict == "probably-zero" ||
                                mr.verdict == "skipped";
      if (mr.verdict == "invalid" || mode_zeroish != entry.zero) cr.agree = false;
    }
    report.all_agree = report.all_agree && cr.agree;
    report.circuits.push_back(std::move(cr));
  }
  return report;
}

}  // namespace pitkit
