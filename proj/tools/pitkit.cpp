// pitkit command-line front end.
//
// Exit codes: 0 zero verdict or suite pass, 1 nonzero verdict, 2 usage or
// input error, 3 internal invariant violation.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pitkit/pitkit.hpp"

namespace {

using namespace pitkit;

constexpr int kExitZero = 0;
constexpr int kExitNonzero = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

// All output funnels through one writer (stdout or --out).
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw CLI::ValidationError("--out", "cannot open " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::malformed_document, "cannot open " + path);
  try {
    Json j;
    in >> j;
    return j;
  } catch (const std::exception& e) {
    raise(Errc::malformed_document, std::string("bad JSON in ") + path + ": " + e.what());
  }
}

Json parse_json_arg(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const std::exception&) {
  }
  // bare words like 1/2 are taken as string literals
  if (!text.empty() && text.front() != '{' && text.front() != '[') return Json(text);
  raise(Errc::malformed_document, std::string("bad JSON for ") + what);
}

double ms_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      const std::size_t v = std::stoull(text);
      return {v, v};
    }
    return {std::stoull(text.substr(0, colon)), std::stoull(text.substr(colon + 1))};
  } catch (const std::exception&) {
    raise(Errc::malformed_document, std::string(what) + " must be N or LO:HI");
  }
}

struct CommonOptions {
  std::string out;
  std::size_t jobs = 1;
  std::size_t expand_cap = kDefaultExpandCap;
  std::uint64_t seed = 1;
  bool homogenize = false;
};

Circuit load_circuit(const std::string& path, const CommonOptions& common) {
  ParseOptions popt;
  popt.homogenize = common.homogenize;
  return parse_circuit(read_json_file(path), popt);
}

int cmd_test(const std::string& path, const std::string& mode, const CommonOptions& common,
             std::size_t sz_trials, std::size_t sz_sample) {
  Output out(common.out);
  const Circuit circuit = load_circuit(path, common);
  const auto start = std::chrono::steady_clock::now();
  Json j;
  bool nonzero = false;
  if (mode == "expand") {
    const SparsePoly p = expand(circuit, common.expand_cap);
    nonzero = !p.is_zero();
    j["verdict"] = nonzero ? "nonzero" : "zero";
    j["monomials"] = p.size();
    j["points_evaluated"] = 0;
    j["elapsed_ms"] = ms_since(start);
  } else if (mode == "hitting" || mode == "whitebox") {
    Verdict v;
    if (mode == "hitting") {
      auto [big, emb] = hitting_field(circuit.fanin_bound(), circuit.degree(), circuit.vars(),
                                      circuit.field());
      const Circuit lifted = emb.is_identity() ? circuit : embed_circuit(circuit, emb);
      Oracle oracle = [&lifted](const Point& p) { return lifted.evaluate(p); };
      v = blackbox_test(oracle, circuit.fanin_bound(), circuit.degree(), circuit.vars(),
                        circuit.field(), common.jobs);
    } else {
      v = whitebox_test(circuit, common.jobs);
    }
    nonzero = v.nonzero;
    j = verdict_to_json(v, ms_since(start));
  } else if (mode == "random") {
    const std::size_t sample =
        sz_sample > 0 ? sz_sample : std::max<std::size_t>(2 * circuit.degree(), 1);
    auto [big, emb] = ensure_min_size(circuit.field(), BigInt(sample) - 1);
    const Circuit lifted = emb.is_identity() ? circuit : embed_circuit(circuit, emb);
    Oracle oracle = [&lifted](const Point& p) { return lifted.evaluate(p); };
    SzVerdict v = schwartz_zippel_test(oracle, circuit.vars(), circuit.degree(), sample, sz_trials,
                                       common.seed, big);
    nonzero = v.nonzero;
    j["verdict"] = v.nonzero ? "nonzero" : "probably-zero";
    j["trials"] = v.trials_run;
    j["sample_set_size"] = sample;
    j["failure_bound"] = v.failure_bound;
    j["seed"] = common.seed;
    j["elapsed_ms"] = ms_since(start);
    j["field"] = field_spec_to_json(big);
    if (v.witness) {
      Json w;
      Json pt = Json::array();
      for (const auto& x : v.witness->point) pt.push_back(element_to_json(x));
      w["point"] = pt;
      w["value"] = element_to_json(v.witness->value);
      j["witness"] = w;
    } else {
      j["witness"] = nullptr;
    }
  } else {
    throw CLI::ValidationError("--mode", "unknown mode " + mode);
  }
  out.stream() << j.dump() << "\n";
  return nonzero ? kExitNonzero : kExitZero;
}

int cmd_hitting_set(std::size_t k, std::size_t d, std::size_t n, const std::string& field_json,
                    std::uint64_t limit, const CommonOptions& common) {
  Output out(common.out);
  const Field field = field_spec_from_json(parse_json_arg(field_json, "--field"));
  HittingSetStream stream(k, d, n, field);
  std::uint64_t emitted = 0;
  while (auto pt = stream.next()) {
    if (limit && emitted >= limit) break;
    out.stream() << hitting_point_to_json(*pt).dump() << "\n";
    ++emitted;
  }
  return kExitZero;
}

int cmd_reduce(const std::string& path, const std::string& beta_json, bool family,
               const CommonOptions& common) {
  Output out(common.out);
  const Circuit circuit = load_circuit(path, common);
  const std::size_t k = circuit.fanin_bound();
  if (family) {
    auto maps = reduction_family(k, circuit.degree(), circuit.vars(), circuit.field());
    for (const auto& rm : maps) {
      out.stream() << circuit_to_json(rm.apply(circuit)).dump() << "\n";
    }
    return kExitZero;
  }
  if (beta_json.empty()) {
    throw CLI::RequiredError("--beta (or --family)");
  }
  const FieldElement beta =
      element_from_json(parse_json_arg(beta_json, "--beta"), circuit.field());
  ReductionMap rm = build_psi(beta, circuit.vars(), k);
  out.stream() << circuit_to_json(rm.apply(circuit)).dump() << "\n";
  return kExitZero;
}

int cmd_certify(const std::string& path, const CommonOptions& common, std::size_t path_cap,
                std::size_t graded_cap) {
  Output out(common.out);
  const Circuit circuit = load_circuit(path, common);
  CertificateOptions opt;
  opt.path_cap = path_cap;
  opt.graded_cap = graded_cap;
  opt.expand_cap = common.expand_cap;
  try {
    const Certificate cert = find_certificate(circuit, opt);
    const bool verified = verify_certificate(circuit, cert, graded_cap, common.expand_cap);
    out.stream() << certificate_to_json(cert, verified).dump() << "\n";
    if (!verified) return kExitInternal;
    return kExitNonzero;  // a verified certificate proves the circuit nonzero
  } catch (const Error& e) {
    if (e.code() == Errc::circuit_is_zero) {
      out.stream() << Json{{"verdict", "zero"}, {"certificate", nullptr}}.dump() << "\n";
      return kExitZero;
    }
    throw;
  }
}

int cmd_corpus(const CommonOptions& common, std::size_t count, const std::string& k_range,
               const std::string& d_range, const std::string& n_range,
               const std::string& fields_json, double zero_fraction) {
  Output out(common.out);
  CorpusSpec spec;
  spec.seed = common.seed;
  spec.count = count;
  spec.k_range = parse_range(k_range, "--k-range");
  spec.d_range = parse_range(d_range, "--d-range");
  spec.n_range = parse_range(n_range, "--n-range");
  spec.zero_fraction = zero_fraction;
  spec.expand_cap = common.expand_cap;
  if (fields_json.empty()) {
    spec.fields = {Field::prime(101), Field::extension(2, 4), Field::rationals()};
  } else {
    Json fj = parse_json_arg(fields_json, "--fields");
    if (!fj.is_array()) fj = Json::array({fj});
    for (const auto& one : fj) spec.fields.push_back(field_spec_from_json(one));
  }
  const auto corpus = generate_corpus(spec);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    out.stream() << labeled_circuit_to_json(corpus[i], i).dump() << "\n";
  }
  return kExitZero;
}

int cmd_suite(const std::string& path, const std::string& modes_csv, const CommonOptions& common) {
  Output out(common.out);
  std::ifstream in(path);
  if (!in) raise(Errc::malformed_document, "cannot open " + path);
  std::vector<LabeledCircuit> corpus;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      corpus.push_back(labeled_circuit_from_json(Json::parse(line)));
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      raise(Errc::malformed_document, std::string("bad corpus line: ") + e.what());
    }
  }
  SuiteOptions opt;
  opt.modes.clear();
  std::stringstream ss(modes_csv);
  std::string mode;
  while (std::getline(ss, mode, ',')) {
    if (!mode.empty()) opt.modes.push_back(mode);
  }
  if (opt.modes.empty()) throw CLI::ValidationError("--modes", "no modes given");
  opt.jobs = common.jobs;
  opt.expand_cap = common.expand_cap;
  opt.sz_seed = common.seed;
  const RunReport report = run_suite(corpus, opt);
  out.stream() << run_report_to_json(report).dump() << "\n";
  return report.all_agree ? kExitZero : kExitInternal;
}

int cmd_bench(std::size_t k, std::size_t d, std::size_t n, const std::string& field_json,
              std::uint64_t budget, bool csv, const CommonOptions& common) {
  Output out(common.out);
  Field field = field_json.empty() ? Field::prime(101)
                                   : field_spec_from_json(parse_json_arg(field_json, "--field"));
  auto [big, emb] = hitting_field(k, d, n, field);
  HittingSetStream stream(k, d, n, big);
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t h = kFnvOffset;
  std::uint64_t count = 0;
  while (count < budget) {
    auto pt = stream.next();
    if (!pt) break;
    h = fnv1a_accumulate(h, *pt);
    ++count;
  }
  const double elapsed = ms_since(start);
  const double pps = elapsed > 0 ? 1000.0 * static_cast<double>(count) / elapsed : 0.0;
  std::ostringstream hash;
  hash << std::hex << h;
  if (csv) {
    out.stream() << "k,d,n,field,points,elapsed_ms,points_per_sec,stream_hash\n"
                 << k << "," << d << "," << n << "," << big.describe() << "," << count << ","
                 << elapsed << "," << pps << "," << hash.str() << "\n";
  } else {
    Json j;
    j["k"] = k;
    j["d"] = d;
    j["n"] = n;
    j["field"] = field_spec_to_json(big);
    j["points"] = count;
    j["stream_total"] = stream.total();
    j["elapsed_ms"] = elapsed;
    j["points_per_sec"] = pps;
    j["stream_hash"] = hash.str();
    j["memory_class"] = "O(n+k) field elements per point";
    out.stream() << j.dump() << "\n";
  }
  return kExitZero;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact identity testing for bounded-fanin depth-3 circuits"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string circuit_path, mode = "hitting", field_json, beta_json, modes_csv = "hitting,expand";
  std::string k_range = "1:3", d_range = "1:4", n_range = "1:5", fields_json;
  std::size_t k = 1, d = 1, n = 1, count = 100;
  std::size_t sz_trials = 40, sz_sample = 0, path_cap = kDefaultPathCap,
              graded_cap = kDefaultGradedCap;
  std::uint64_t limit = 0, budget = 1'000'000;
  double zero_fraction = 0.25;
  bool family = false, csv = false;

  auto add_common = [&](CLI::App* cmd, bool with_jobs = true) {
    cmd->add_option("--out", common.out, "write output to a file instead of stdout");
    cmd->add_option("--expand-cap", common.expand_cap, "monomial cap for expansions");
    cmd->add_option("--seed", common.seed, "seed for randomized paths");
    if (with_jobs) cmd->add_option("--jobs", common.jobs, "worker threads for point scans");
  };

  CLI::App* test = app.add_subcommand("test", "decide whether a circuit is identically zero");
  test->add_option("circuit", circuit_path, "circuit JSON file")->required();
  test->add_option("--mode", mode, "hitting | whitebox | random | expand");
  test->add_flag("--homogenize", common.homogenize, "treat forms as affine (leading constant)");
  test->add_option("--trials", sz_trials, "trials for --mode random");
  test->add_option("--sample-size", sz_sample, "sample set size for --mode random");
  add_common(test);

  CLI::App* hs = app.add_subcommand("hitting-set", "emit the deterministic point stream");
  hs->add_option("--k", k, "top fanin bound")->required();
  hs->add_option("--d", d, "term degree")->required();
  hs->add_option("--n", n, "variable count")->required();
  hs->add_option("--field", field_json, "field spec JSON")->required();
  hs->add_option("--limit", limit, "stop after this many points (0 = all)");
  add_common(hs, false);

  CLI::App* red = app.add_subcommand("reduce", "apply the k-variable reduction map(s)");
  red->add_option("circuit", circuit_path, "circuit JSON file")->required();
  red->add_option("--beta", beta_json, "field element for a single map");
  red->add_flag("--family", family, "emit the whole family as JSON lines");
  red->add_flag("--homogenize", common.homogenize, "treat forms as affine (leading constant)");
  add_common(red, false);

  CLI::App* cert = app.add_subcommand("certify", "search and verify a nonzeroness certificate");
  cert->add_option("circuit", circuit_path, "circuit JSON file")->required();
  cert->add_flag("--homogenize", common.homogenize, "treat forms as affine (leading constant)");
  cert->add_option("--path-cap", path_cap, "node-choice tree cap");
  cert->add_option("--graded-cap", graded_cap, "monomial-space cap for membership");
  add_common(cert, false);

  CLI::App* corpus = app.add_subcommand("corpus", "generate a labeled circuit corpus");
  corpus->add_option("--count", count, "number of circuits");
  corpus->add_option("--k-range", k_range, "N or LO:HI");
  corpus->add_option("--d-range", d_range, "N or LO:HI");
  corpus->add_option("--n-range", n_range, "N or LO:HI");
  corpus->add_option("--fields", fields_json, "JSON array of field specs");
  corpus->add_option("--zero-fraction", zero_fraction, "target fraction of zero circuits");
  add_common(corpus, false);

  CLI::App* suite = app.add_subcommand("suite", "run modes over a corpus and cross-check");
  suite->add_option("corpus", circuit_path, "corpus JSONL file")->required();
  suite->add_option("--modes", modes_csv, "comma list: hitting,whitebox,random,expand,certify");
  add_common(suite);

  CLI::App* bench = app.add_subcommand("bench", "stream hitting points and report throughput");
  bench->add_option("--k", k, "top fanin bound")->required();
  bench->add_option("--d", d, "term degree")->required();
  bench->add_option("--n", n, "variable count")->required();
  bench->add_option("--field", field_json, "field spec JSON (default F_101)");
  bench->add_option("--points", budget, "point budget");
  bench->add_flag("--csv", csv, "emit CSV instead of JSON");
  add_common(bench, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (test->parsed()) return cmd_test(circuit_path, mode, common, sz_trials, sz_sample);
    if (hs->parsed()) return cmd_hitting_set(k, d, n, field_json, limit, common);
    if (red->parsed()) return cmd_reduce(circuit_path, beta_json, family, common);
    if (cert->parsed()) return cmd_certify(circuit_path, common, path_cap, graded_cap);
    if (corpus->parsed())
      return cmd_corpus(common, count, k_range, d_range, n_range, fields_json, zero_fraction);
    if (suite->parsed()) return cmd_suite(circuit_path, modes_csv, common);
    if (bench->parsed()) return cmd_bench(k, d, n, field_json, budget, csv, common);
  } catch (const pitkit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Errc::certificate_not_found ? kExitInternal : kExitUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.get_name() << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
