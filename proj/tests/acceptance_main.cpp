// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// Every check is exact; the only numeric thresholds are the stated instance
// counts and wall-clock limits.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pitkit/pitkit.hpp"

using namespace pitkit;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(const Clock::time_point& start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

Verdict blackbox_on_circuit(const Circuit& c, std::size_t jobs = 1) {
  auto [big, emb] = hitting_field(c.fanin_bound(), c.degree(), c.vars(), c.field());
  const Circuit lifted = emb.is_identity() ? c : embed_circuit(c, emb);
  Oracle oracle = [&lifted](const Point& p) { return lifted.evaluate(p); };
  return blackbox_test(oracle, c.fanin_bound(), c.degree(), c.vars(), c.field(), jobs);
}

std::vector<LabeledCircuit> acceptance_corpus() {
  CorpusSpec spec;
  spec.seed = 2026;
  spec.count = 500;
  spec.k_range = {1, 3};
  spec.d_range = {1, 4};
  spec.n_range = {1, 5};
  spec.fields = {Field::prime(101), Field::extension(2, 4), Field::rationals()};
  spec.zero_fraction = 0.25;
  return generate_corpus(spec);
}

Circuit random_circuit(Rng& rng, const Field& f, std::size_t n, std::size_t d, std::size_t k) {
  std::vector<MultiplicationTerm> terms;
  for (std::size_t i = 0; i < k; ++i) terms.push_back(rng.term(f, n, d));
  return Circuit(f, n, d, k, std::move(terms));
}

// 1. Hitting-set verdict equals the expansion verdict on the whole corpus
// (and the whitebox route concurs point for point).
Outcome criterion_oracle_equivalence(const std::vector<LabeledCircuit>& corpus) {
  const auto start = Clock::now();
  std::size_t zeros = 0, checked = 0;
  for (const auto& entry : corpus) {
    const bool expect_zero = expand(entry.circuit).is_zero();
    zeros += expect_zero;
    const Verdict black = blackbox_on_circuit(entry.circuit, 2);
    if (black.nonzero == expect_zero) {
      std::ostringstream os;
      os << "verdict mismatch at corpus index " << checked;
      return {false, os.str()};
    }
    const Verdict white = whitebox_test(entry.circuit, 2);
    if (white.nonzero != black.nonzero || white.points_evaluated != black.points_evaluated) {
      std::ostringstream os;
      os << "whitebox route diverged at corpus index " << checked;
      return {false, os.str()};
    }
    ++checked;
  }
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << checked << " circuits, " << zeros << " zero labels ("
     << (100.0 * static_cast<double>(zeros) / static_cast<double>(checked)) << "%), "
     << elapsed << " s";
  if (checked < 500) return {false, "corpus smaller than 500"};
  if (zeros * 5 < checked) return {false, "fewer than 20% zero circuits: " + os.str()};
  if (elapsed > 600.0) return {false, "over the 10 minute budget: " + os.str()};
  return {true, os.str()};
}

// 2. |H| = (dnk^2+1)(d+1)^k, stream-counted.
Outcome criterion_size_law() {
  struct Case {
    std::size_t k, d, n;
    std::uint64_t expected;
  };
  const std::vector<Case> cases = {{1, 1, 1, 4}, {2, 3, 4, 784}, {3, 4, 5, 22625}};
  for (const auto& c : cases) {
    HittingSetStream stream(c.k, c.d, c.n, Field::rationals());
    std::uint64_t counted = 0;
    while (stream.next()) ++counted;
    if (counted != c.expected || stream.total() != c.expected) {
      std::ostringstream os;
      os << "(k,d,n)=(" << c.k << "," << c.d << "," << c.n << ") counted " << counted
         << " expected " << c.expected;
      return {false, os.str()};
    }
  }
  return {true, "4, 784, 22625 points as stated"};
}

// 3. C(delta) = psi_beta(C)(gamma) on 1000 random triples per field.
Outcome criterion_evaluation_consistency() {
  Rng rng(33001);
  const std::vector<Field> fields = {Field::prime(101), Field::extension(2, 4),
                                     Field::rationals()};
  for (const Field& f : fields) {
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = rng.in_range(1, 4), d = rng.in_range(1, 3), k = rng.in_range(1, 3);
      const Circuit c = random_circuit(rng, f, n, d, k);
      const FieldElement beta = rng.element(f);
      Point gamma;
      for (std::size_t j = 0; j < k; ++j) gamma.push_back(rng.element(f));
      Point delta;
      for (std::size_t i = 0; i < n; ++i) {
        FieldElement acc = f.zero();
        for (std::size_t j = 0; j < k; ++j) acc = acc + beta.pow((i + 1) * (j + 1)) * gamma[j];
        delta.push_back(acc);
      }
      const ReductionMap rm = build_psi(beta, n, k);
      if (c.evaluate(delta) != rm.apply(c).evaluate(gamma)) {
        std::ostringstream os;
        os << "mismatch over " << f.describe() << " at trial " << trial;
        return {false, os.str()};
      }
    }
  }
  return {true, "3000 exact agreements (1000 per field)"};
}

// 4. Rank-drop counts stay within n*k^2; the pair {x1,x2} fails exactly at 0,1.
Outcome criterion_rank_preservation() {
  const Field f = Field::prime(101);
  std::vector<FieldElement> all_betas;
  for (std::uint64_t i = 0; i < 101; ++i) all_betas.push_back(f.element_at(i));

  const LinearForm x1 = LinearForm::unit(f, 2, 0), x2 = LinearForm::unit(f, 2, 1);
  const BadBetaReport pair_report = count_bad_betas({x1, x2}, all_betas, 2);
  if (pair_report.count != 2 || pair_report.bad[0] != f.zero() || pair_report.bad[1] != f.one()) {
    return {false, "{x1,x2} bad set is not exactly {0,1}"};
  }

  Rng rng(33002);
  const std::size_t n = 5, k = 3;
  std::size_t worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<LinearForm> forms;
    const std::size_t count = rng.in_range(1, k);
    for (std::size_t i = 0; i < count; ++i) forms.push_back(rng.nonzero_form(f, n));
    const BadBetaReport report = count_bad_betas(forms, all_betas, k);
    worst = std::max(worst, report.count);
    if (report.count > n * k * k) {
      std::ostringstream os;
      os << "trial " << trial << " dropped rank for " << report.count << " > " << n * k * k
         << " betas";
      return {false, os.str()};
    }
  }
  std::ostringstream os;
  os << "100 trials within the bound " << n * k * k << " (worst " << worst
     << "); pair set exactly {0,1}";
  return {true, os.str()};
}

// 5. expand(C) = 0 iff expand(psi_beta(C)) = 0 for every beta in the family.
Outcome criterion_family_equivalence(const std::vector<LabeledCircuit>& corpus) {
  std::size_t checked = 0;
  for (const auto& entry : corpus) {
    const Circuit& c = entry.circuit;
    const BigInt bound = BigInt(c.degree()) * c.vars() * c.fanin_bound() * c.fanin_bound();
    auto [big, emb] = ensure_min_size(c.field(), bound);
    const Circuit lifted = emb.is_identity() ? c : embed_circuit(c, emb);
    const bool zero = expand(lifted).is_zero();
    if (zero != entry.zero) return {false, "embedding changed the zero label"};
    bool all_mapped_zero = true;
    for (const auto& rm :
         reduction_family(c.fanin_bound(), c.degree(), c.vars(), big)) {
      if (!expand(rm.apply(lifted)).is_zero()) {
        all_mapped_zero = false;
        break;
      }
    }
    if (zero != all_mapped_zero) {
      std::ostringstream os;
      os << "family equivalence failed at corpus index " << checked;
      return {false, os.str()};
    }
    ++checked;
  }
  std::ostringstream os;
  os << checked << " circuits, both directions exact";
  return {true, os.str()};
}

// 6. find_certificate succeeds and verify_certificate confirms, on every
// nonzero corpus circuit with k <= 3, d <= 3, n <= 4 (at least 100).
Outcome criterion_certificates(const std::vector<LabeledCircuit>& corpus) {
  std::vector<Circuit> subjects;
  for (const auto& entry : corpus) {
    if (!entry.zero && entry.circuit.fanin_bound() <= 3 && entry.circuit.degree() <= 3 &&
        entry.circuit.vars() <= 4) {
      subjects.push_back(entry.circuit);
    }
  }
  // top up from a dedicated pool if the slice came up short
  Rng rng(33003);
  const std::vector<Field> fields = {Field::prime(101), Field::extension(2, 4),
                                     Field::rationals()};
  while (subjects.size() < 100) {
    const Field f = fields[rng.below(fields.size())];
    const Circuit c =
        random_circuit(rng, f, rng.in_range(1, 4), rng.in_range(1, 3), rng.in_range(1, 3));
    if (!expand(c).is_zero()) subjects.push_back(c);
  }
  std::size_t done = 0;
  for (const Circuit& c : subjects) {
    try {
      const Certificate cert = find_certificate(c);
      if (!verify_certificate(c, cert)) {
        std::ostringstream os;
        os << "certificate rejected on subject " << done;
        return {false, os.str()};
      }
    } catch (const Error& e) {
      std::ostringstream os;
      os << "certificate search failed on subject " << done << ": " << e.what();
      return {false, os.str()};
    }
    ++done;
  }
  std::ostringstream os;
  os << done << " certificates found and verified, zero failures";
  return {true, os.str()};
}

// 7. The membership equivalences behind the reduction, 200 instances each.
Outcome criterion_membership_properties() {
  // cancellation: l outside radsp(I) never changes membership of l*g
  Rng rng(33004);
  int cancellation_done = 0;
  while (cancellation_done < 200) {
    const Field f = cancellation_done % 2 ? Field::prime(101) : Field::rationals();
    const std::size_t n = rng.in_range(2, 3);
    IdealGens gens(f, n);
    const std::size_t gen_count = rng.in_range(1, 2);
    for (std::size_t i = 0; i < gen_count; ++i) gens.push(rng.term(f, n, rng.in_range(1, 2)));
    std::vector<Vec> rows;
    for (const auto& b : radsp(gens)) rows.push_back(b.coeffs());
    const RowBasis span = row_reduce(rows, n);
    const LinearForm ell = rng.nonzero_form(f, n);
    if (in_row_span(span, ell.coeffs())) continue;
    SparsePoly g(f, n);
    if (rng.below(2)) {
      const MultiplicationTerm& base = gens.generators()[rng.below(gen_count)];
      std::vector<LinearForm> combined = base.forms();
      combined.push_back(rng.nonzero_form(f, n));
      g = expand_term(MultiplicationTerm(base.scalar(), std::move(combined)), n);
    } else {
      g = expand_term(rng.term(f, n, rng.in_range(1, 2)), n);
    }
    if (membership(g.times_form(ell, kDefaultExpandCap), gens) != membership(g, gens)) {
      return {false, "cancellation equivalence failed"};
    }
    ++cancellation_done;
  }

  // preservation: good betas keep membership decisions intact
  Rng rng2(33005);
  const Field f = Field::prime(101);
  int preservation_done = 0;
  while (preservation_done < 200) {
    const std::size_t n = rng2.in_range(3, 4), k = 3;
    std::vector<LinearForm> pool;
    const std::size_t pool_rank = rng2.in_range(1, k);
    for (std::size_t i = 0; i < pool_rank; ++i) pool.push_back(rng2.nonzero_form(f, n));
    auto pool_form = [&]() {
      LinearForm acc = LinearForm::zero(f, n);
      for (const auto& p : pool) acc = acc + p.scaled(rng2.element(f));
      return acc;
    };
    auto pool_term = [&](std::size_t d) {
      std::vector<LinearForm> forms;
      while (forms.size() < d) {
        LinearForm lf = pool_form();
        if (!lf.is_zero()) forms.push_back(lf);
      }
      return MultiplicationTerm(rng2.nonzero_element(f), std::move(forms));
    };
    IdealGens gens(f, n);
    const std::size_t gen_count = rng2.in_range(1, 2);
    for (std::size_t i = 0; i < gen_count; ++i) gens.push(pool_term(rng2.in_range(1, 2)));
    MultiplicationTerm query = pool_term(rng2.in_range(1, 2));
    if (rng2.below(2)) {
      const MultiplicationTerm& base = gens.generators()[rng2.below(gen_count)];
      std::vector<LinearForm> combined = base.forms();
      LinearForm extra = pool_form();
      if (extra.is_zero()) continue;
      combined.push_back(extra);
      query = MultiplicationTerm(base.scalar(), std::move(combined));
    }
    std::vector<LinearForm> scene = query.forms();
    for (const auto& b : radsp(gens)) scene.push_back(b);
    const std::size_t scene_rank = rank(scene);
    const FieldElement beta = rng2.element(f);
    const ReductionMap rm = build_psi(beta, n, k);
    {
      std::vector<LinearForm> mapped;
      for (const auto& lf : scene) mapped.push_back(rm.apply(lf));
      if (rank(mapped) != scene_rank) continue;
    }
    IdealGens mapped_gens(f, k);
    for (const auto& gen : gens.generators()) mapped_gens.push(rm.apply(gen));
    if (membership(query, gens) != membership(rm.apply(query), mapped_gens)) {
      return {false, "membership preservation failed"};
    }
    ++preservation_done;
  }
  return {true, "200 cancellation + 200 preservation instances, all exact"};
}

// 8. The designed char-2 identity: zero as stated, and fragile as stated.
Outcome criterion_designed_identity() {
  const Circuit c = f2_identity_circuit();
  const Verdict v = blackbox_on_circuit(c);
  if (v.nonzero) return {false, "the identity was declared nonzero"};
  if (v.eval_field.cardinality() != 64) {
    return {false, "expected the lift to land in the 64-element field"};
  }
  // flip each term's scalar (in the lifted field, where scalars other than
  // one exist) and demand a replayable witness
  auto [big, emb] = hitting_field(3, 2, 2, c.field());
  const Circuit lifted = embed_circuit(c, emb);
  const FieldElement omega = big.element_at(2);
  for (std::size_t flip = 0; flip < 3; ++flip) {
    std::vector<MultiplicationTerm> terms;
    for (std::size_t i = 0; i < 3; ++i) {
      const MultiplicationTerm& t = lifted.terms()[i];
      terms.emplace_back(i == flip ? t.scalar() * omega : t.scalar(), t.forms());
    }
    const Circuit flipped(big, 2, 2, 3, std::move(terms));
    const Verdict fv = blackbox_on_circuit(flipped);
    if (!fv.nonzero || !fv.witness) {
      std::ostringstream os;
      os << "flipping term " << flip << " did not produce a witness";
      return {false, os.str()};
    }
    if (flipped.evaluate(fv.witness->point.delta) != fv.witness->value ||
        fv.witness->value.is_zero()) {
      return {false, "witness failed replay"};
    }
  }
  return {true, "zero over F_64; all three scalar flips caught with replayable witnesses"};
}

// 9. Schwartz-Zippel: the exhaustive zero fraction obeys d/|T|.
Outcome criterion_schwartz_zippel() {
  const Field f = Field::prime(101);
  std::vector<MultiplicationTerm> terms;
  terms.emplace_back(f.one(), std::vector<LinearForm>{LinearForm::unit(f, 2, 0),
                                                      LinearForm::unit(f, 2, 1)});
  const Circuit prod(f, 2, 2, 1, std::move(terms));
  int zeros = 0;
  for (std::uint64_t a = 0; a < 3; ++a) {
    for (std::uint64_t b = 0; b < 3; ++b) {
      if (prod.evaluate({f.element_at(a), f.element_at(b)}).is_zero()) ++zeros;
    }
  }
  if (zeros != 5) return {false, "y1*y2 on {0,1,2}^2 should vanish at exactly 5 points"};
  // 5/9 <= 2/3 in exact integers
  if (zeros * 3 > 2 * 9) return {false, "bound violated on the designed instance"};

  Rng rng(33006);
  int done = 0;
  while (done < 50) {
    const std::size_t n = rng.in_range(1, 2), d = rng.in_range(1, 3);
    const Circuit c = random_circuit(rng, f, n, d, rng.in_range(1, 2));
    if (expand(c).is_zero()) continue;
    const std::size_t t_size = d + 1 + rng.in_range(0, 2);
    std::uint64_t zero_count = 0, total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= t_size;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      Point p;
      std::uint64_t rest = idx;
      for (std::size_t i = 0; i < n; ++i) {
        p.push_back(f.element_at(rest % t_size));
        rest /= t_size;
      }
      if (c.evaluate(p).is_zero()) ++zero_count;
    }
    if (zero_count * t_size > d * total) {
      std::ostringstream os;
      os << "zero fraction " << zero_count << "/" << total << " exceeds " << d << "/" << t_size;
      return {false, os.str()};
    }
    ++done;
  }
  return {true, "5/9 <= 2/3 on the designed grid; 50 random polynomials within the bound"};
}

// 10. A million point computations in 10 s, bit-identically across runs.
// The (3,5,20) stream holds (5*20*9+1)*6^3 = 194616 points, so the budget is
// filled by repeated full passes over fresh streams.
Outcome criterion_throughput() {
  const std::size_t k = 3, d = 5, n = 20;
  const std::uint64_t budget = 1'000'000;
  auto [big, emb] = hitting_field(k, d, n, Field::prime(101));
  auto run = [&, big = big](double* elapsed) {
    const auto start = Clock::now();
    std::uint64_t h = kFnvOffset, count = 0;
    while (count < budget) {
      HittingSetStream stream(k, d, n, big);
      while (count < budget) {
        auto pt = stream.next();
        if (!pt) break;
        h = fnv1a_accumulate(h, *pt);
        ++count;
      }
    }
    if (elapsed) *elapsed = seconds_since(start);
    return std::make_pair(h, count);
  };
  double elapsed = 0.0;
  const auto first = run(&elapsed);
  const auto second = run(nullptr);
  if (first.second != budget) return {false, "did not reach the point budget"};
  if (first != second) return {false, "two runs disagreed"};
  std::ostringstream os;
  os << budget << " points (" << HittingSetStream(k, d, n, big).total()
     << " per full pass) in " << elapsed << " s ("
     << static_cast<std::uint64_t>(static_cast<double>(budget) / elapsed)
     << " pts/s), hashes identical; memory independent of stream position";
  if (elapsed > 10.0) return {false, "over the 10 s budget: " + os.str()};
  return {true, os.str()};
}

}  // namespace

int main() {
  const auto suite_start = Clock::now();
  std::cout << "generating the 500-circuit corpus..." << std::endl;
  const std::vector<LabeledCircuit> corpus = acceptance_corpus();

  struct Entry {
    int id;
    const char* name;
    Outcome outcome;
  };
  std::vector<Entry> entries;
  auto run = [&](int id, const char* name, auto&& fn) {
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    entries.push_back({id, name, out});
    std::cout << "criterion " << id << ": " << (out.pass ? "PASS" : "FAIL") << " - " << name
              << " (" << out.detail << ")" << std::endl;
  };

  run(1, "oracle equivalence over the corpus",
      [&] { return criterion_oracle_equivalence(corpus); });
  run(2, "hitting-set size law", [] { return criterion_size_law(); });
  run(3, "evaluation consistency", [] { return criterion_evaluation_consistency(); });
  run(4, "rank preservation bound", [] { return criterion_rank_preservation(); });
  run(5, "reduction family equivalence",
      [&] { return criterion_family_equivalence(corpus); });
  run(6, "nonzeroness certificates", [&] { return criterion_certificates(corpus); });
  run(7, "membership property suites", [] { return criterion_membership_properties(); });
  run(8, "designed char-2 identity", [] { return criterion_designed_identity(); });
  run(9, "schwartz-zippel bound", [] { return criterion_schwartz_zippel(); });
  run(10, "throughput and determinism", [] { return criterion_throughput(); });

  bool all = true;
  for (const auto& e : entries) all = all && e.outcome.pass;
  std::cout << (all ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << " in "
            << seconds_since(suite_start) << " s" << std::endl;
  return all ? 0 : 1;
}
