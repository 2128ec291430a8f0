#pragma once

// The deterministic hitting set for depth-3 circuits with top fanin k: for
// every beta in the first dnk^2+1 field elements and every gamma in T^k with
// T the first d+1 elements, the point delta_i = sum_j beta^{ij} gamma_j. A
// nonzero circuit in class evaluates nonzero somewhere on this stream; the
// blackbox tester scans it, the whitebox tester factors the same computation
// through the reduced k-variable circuits, and a seeded Schwartz-Zippel
// tester provides the randomized baseline.

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "pitkit/circuit.hpp"
#include "pitkit/errors.hpp"
#include "pitkit/field.hpp"
#include "pitkit/reduce.hpp"

namespace pitkit {

struct HittingPoint {
  std::uint64_t index = 0;        // position in stream order
  FieldElement beta;
  std::vector<FieldElement> gamma;
  Point delta;                    // delta_i = sum_j beta^{ij} gamma_j
};

struct Witness {
  HittingPoint point;
  FieldElement value;
};

struct Verdict {
  bool nonzero = false;
  std::optional<Witness> witness;
  std::uint64_t points_evaluated = 0;
  Field eval_field;
};

// Lazily enumerates the (dnk^2+1)(d+1)^k points in stream order: beta moves
// outermost, gamma runs as an odometer over T^k with the last coordinate
// fastest. Each yielded point costs O(n + k) elements; the powers of the
// current beta are cached per slice, so instances are cheap to copy but one
// instance must not be shared across threads.
class HittingSetStream {
 public:
  HittingSetStream(std::size_t k, std::size_t d, std::size_t n, const Field& field)
      : k_(k), d_(d), n_(n), field_(field) {
    betas_ = static_cast<std::uint64_t>(d) * n * k * k + 1;
    if (field.is_finite()) {
      if (field.cardinality() < BigInt(betas_) || field.cardinality() < BigInt(d + 1)) {
        raise(Errc::field_too_small, "need |F| > dnk^2 and |F| >= d+1");
      }
    }
    grid_ = 1;
    for (std::size_t j = 0; j < k_; ++j) {
      if (grid_ > UINT64_MAX / (d_ + 1)) raise(Errc::expansion_too_large, "stream size overflows");
      grid_ *= d_ + 1;
    }
    if (betas_ > UINT64_MAX / grid_) raise(Errc::expansion_too_large, "stream size overflows");
    t_table_.reserve(d_ + 1);
    for (std::size_t t = 0; t <= d_; ++t) t_table_.push_back(field_.element_at(t));
  }

  std::uint64_t total() const { return betas_ * grid_; }
  std::uint64_t betas() const { return betas_; }
  std::uint64_t grid() const { return grid_; }

  // Random access into the stream; index < total().
  HittingPoint at(std::uint64_t index) const {
    if (index >= total()) raise(Errc::index_out_of_range, "stream index out of range");
    return make_point(index / grid_, index % grid_);
  }

  std::optional<HittingPoint> next() {
    if (cursor_ >= total()) return std::nullopt;
    return at(cursor_++);
  }

 private:
  HittingPoint make_point(std::uint64_t beta_idx, std::uint64_t gamma_idx) const {
    if (beta_idx != cached_beta_idx_) fill_power_cache(beta_idx);
    HittingPoint pt;
    pt.index = beta_idx * grid_ + gamma_idx;
    pt.beta = cached_beta_;
    pt.gamma.reserve(k_);
    // odometer decomposition, last coordinate fastest
    boost::container::small_vector<std::uint64_t, 8> digits(k_, 0);
    for (std::size_t j = k_; j-- > 0;) {
      digits[j] = gamma_idx % (d_ + 1);
      gamma_idx /= d_ + 1;
    }
    for (std::size_t j = 0; j < k_; ++j) pt.gamma.push_back(t_table_[digits[j]]);
    pt.delta.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      FieldElement acc = field_.zero();
      for (std::size_t j = 0; j < k_; ++j) {
        if (digits[j] != 0) acc = acc + cached_powers_[i * k_ + j] * pt.gamma[j];
      }
      pt.delta.push_back(std::move(acc));
    }
    return pt;
  }

  // beta^{(i+1)(j+1)}, row-major, by cumulative products only.
  void fill_power_cache(std::uint64_t beta_idx) const {
    cached_beta_idx_ = beta_idx;
    cached_beta_ = field_.element_at(beta_idx);
    cached_powers_.clear();
    cached_powers_.reserve(n_ * k_);
    FieldElement row_base = field_.one();
    for (std::size_t i = 0; i < n_; ++i) {
      row_base = row_base * cached_beta_;
      FieldElement entry = field_.one();
      for (std::size_t j = 0; j < k_; ++j) {
        entry = entry * row_base;
        cached_powers_.push_back(entry);
      }
    }
  }

  std::size_t k_, d_, n_;
  Field field_;
  std::uint64_t betas_ = 0, grid_ = 0, cursor_ = 0;
  std::vector<FieldElement> t_table_;
  mutable std::uint64_t cached_beta_idx_ = UINT64_MAX;
  mutable FieldElement cached_beta_;
  mutable std::vector<FieldElement> cached_powers_;
};

using Oracle = std::function<FieldElement(const Point&)>;

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;

// FNV-1a fold over the canonical bytes of a point, for determinism checks.
inline std::uint64_t fnv1a_accumulate(std::uint64_t h, const HittingPoint& pt) {
  thread_local std::string bytes;
  bytes.clear();
  pt.beta.append_canonical_bytes(bytes);
  for (const auto& g : pt.gamma) g.append_canonical_bytes(bytes);
  for (const auto& x : pt.delta) x.append_canonical_bytes(bytes);
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Field the testers actually evaluate over: the input field grown past
// dnk^2 elements (which also guarantees at least d+1 of them).
inline std::pair<Field, Embedding> hitting_field(std::size_t k, std::size_t d, std::size_t n,
                                                 const Field& field) {
  const BigInt bound = BigInt(d) * n * k * k;
  return ensure_min_size(field, bound);
}

namespace detail {

// Shared scan driver: calls eval(beta_idx, gamma_idx, point) over the stream
// and returns the witness with the smallest stream index, if any. With
// several workers the stream is partitioned by beta slice; the minimum-index
// rule keeps the verdict independent of scheduling.
template <typename Eval>
Verdict scan_stream(const HittingSetStream& stream, const Field& eval_field, std::size_t jobs,
                    const Eval& eval) {
  Verdict verdict;
  verdict.eval_field = eval_field;
  const std::uint64_t total = stream.total();
  const std::uint64_t grid = stream.grid();

  if (jobs <= 1) {
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      HittingPoint pt = stream.at(idx);
      FieldElement value = eval(pt);
      if (!value.is_zero()) {
        verdict.nonzero = true;
        verdict.witness = Witness{std::move(pt), std::move(value)};
        verdict.points_evaluated = idx + 1;
        return verdict;
      }
    }
    verdict.points_evaluated = total;
    return verdict;
  }

  std::atomic<std::uint64_t> next_beta{0};
  std::atomic<std::uint64_t> best{UINT64_MAX};
  std::mutex witness_mu;
  std::optional<Witness> best_witness;
  std::exception_ptr error;
  std::mutex error_mu;

  auto worker = [&]() {
    try {
      HittingSetStream local = stream;  // per-worker power cache
      for (;;) {
        const std::uint64_t b = next_beta.fetch_add(1);
        if (b >= local.betas()) return;
        const std::uint64_t base = b * grid;
        if (base >= best.load(std::memory_order_relaxed)) continue;
        for (std::uint64_t g = 0; g < grid; ++g) {
          const std::uint64_t idx = base + g;
          if (idx >= best.load(std::memory_order_relaxed)) break;
          HittingPoint pt = local.at(idx);
          FieldElement value = eval(pt);
          if (!value.is_zero()) {
            std::lock_guard<std::mutex> lock(witness_mu);
            if (idx < best.load(std::memory_order_relaxed)) {
              best.store(idx, std::memory_order_relaxed);
              best_witness = Witness{std::move(pt), std::move(value)};
            }
            break;  // later points in this slice cannot beat idx
          }
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!error) error = std::current_exception();
      best.store(0, std::memory_order_relaxed);  // stop other workers
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  if (best_witness) {
    verdict.nonzero = true;
    verdict.points_evaluated = best.load() + 1;  // stream-order position
    verdict.witness = std::move(best_witness);
  } else {
    verdict.points_evaluated = total;
  }
  return verdict;
}

}  // namespace detail

// Blackbox tester. The oracle must accept points over the lifted field
// reported by hitting_field(k, d, n, field); oracle exceptions propagate.
inline Verdict blackbox_test(const Oracle& oracle, std::size_t k, std::size_t d, std::size_t n,
                             const Field& field, std::size_t jobs = 1) {
  auto [big, emb] = hitting_field(k, d, n, field);
  HittingSetStream stream(k, d, n, big);
  return detail::scan_stream(stream, big, jobs,
                             [&](const HittingPoint& pt) { return oracle(pt.delta); });
}

// Whitebox tester: applies the reduction family and evaluates each reduced
// k-variable circuit on the T^k grid. Point for point this computes the same
// values as the blackbox scan, so the verdicts and witnesses coincide.
inline Verdict whitebox_test(const Circuit& circuit, std::size_t jobs = 1) {
  const std::size_t k = circuit.fanin_bound();
  const std::size_t d = circuit.degree();
  const std::size_t n = circuit.vars();
  auto [big, emb] = hitting_field(k, d, n, circuit.field());
  const Circuit lifted = emb.is_identity() ? circuit : embed_circuit(circuit, emb);
  HittingSetStream stream(k, d, n, big);

  // one reduced circuit per beta, built lazily and shared within a slice
  std::mutex cache_mu;
  std::map<std::uint64_t, Circuit> reduced_cache;
  auto reduced_for = [&](std::uint64_t beta_idx) -> const Circuit& {
    std::lock_guard<std::mutex> lock(cache_mu);
    auto it = reduced_cache.find(beta_idx);
    if (it == reduced_cache.end()) {
      ReductionMap rm = ReductionMap::build(big.element_at(beta_idx), n, k);
      it = reduced_cache.emplace(beta_idx, rm.apply(lifted)).first;
    }
    return it->second;
  };

  const std::uint64_t grid = stream.grid();
  return detail::scan_stream(stream, big, jobs, [&](const HittingPoint& pt) {
    return reduced_for(pt.index / grid).evaluate(pt.gamma);
  });
}

struct SzTrial {
  Point point;
  FieldElement value;
};

struct SzVerdict {
  bool nonzero = false;
  std::optional<SzTrial> witness;
  std::uint64_t trials_run = 0;
  double failure_bound = 0.0;  // (d / |T|)^trials, meaningful when |T| > d
  std::vector<SzTrial> log;
};

// Randomized baseline: evaluate at uniform points of T^n with T the first
// sample_set_size elements of the canonical enumeration. The generator is
// std::mt19937_64 seeded with `seed`; coordinates are drawn by rejection
// sampling (draw 64 bits, retry while the draw falls in the final partial
// block of size 2^64 mod |T|), so the point stream is reproducible across
// implementations.
inline SzVerdict schwartz_zippel_test(const Oracle& oracle, std::size_t nvars, std::size_t degree,
                                      std::size_t sample_set_size, std::size_t trials,
                                      std::uint64_t seed, const Field& field) {
  if (sample_set_size == 0) raise(Errc::malformed_document, "sample set must be nonempty");
  if (field.is_finite() && field.cardinality() < BigInt(sample_set_size)) {
    raise(Errc::field_too_small, "sample set larger than the field");
  }
  std::mt19937_64 gen(seed);
  const std::uint64_t bound = sample_set_size;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  auto draw = [&]() {
    for (;;) {
      const std::uint64_t r = gen();
      if (r < limit) return r % bound;
    }
  };
  SzVerdict verdict;
  const double per_trial =
      sample_set_size > degree ? static_cast<double>(degree) / static_cast<double>(sample_set_size)
                               : 1.0;
  verdict.failure_bound = 1.0;
  for (std::size_t t = 0; t < trials; ++t) {
    Point pt;
    pt.reserve(nvars);
    for (std::size_t i = 0; i < nvars; ++i) pt.push_back(field.element_at(draw()));
    FieldElement value = oracle(pt);
    ++verdict.trials_run;
    verdict.failure_bound *= per_trial;
    verdict.log.push_back(SzTrial{pt, value});
    if (!value.is_zero()) {
      verdict.nonzero = true;
      verdict.witness = SzTrial{std::move(pt), std::move(value)};
      return verdict;
    }
  }
  return verdict;
}

}  // namespace pitkit
