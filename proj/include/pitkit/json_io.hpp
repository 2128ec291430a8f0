#pragma once

// JSON (de)serialization for every external format: field specs, elements,
// circuits (homogeneous and affine), certificates, verdicts, hitting points,
// labeled corpus lines and suite reports. Integers travel as decimal strings,
// extension elements as coefficient arrays low degree first, rationals as
// "num/den". Structural problems raise MalformedDocument.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pitkit/circuit.hpp"
#include "pitkit/corpus.hpp"
#include "pitkit/errors.hpp"
#include "pitkit/field.hpp"
#include "pitkit/hitting.hpp"
#include "pitkit/ideals.hpp"

namespace pitkit {

using Json = nlohmann::json;

namespace detail {

inline BigInt parse_bigint(const Json& j, const char* what) {
  try {
    if (j.is_string()) return BigInt(j.get<std::string>());
    if (j.is_number_integer()) return BigInt(j.get<long long>());
  } catch (const std::exception&) {
  }
  raise(Errc::malformed_document, std::string(what) + " must be a decimal integer");
}

inline std::uint64_t residue_of(const BigInt& v, std::uint64_t p) {
  BigInt r = v % p;
  if (r < 0) r += p;
  return static_cast<std::uint64_t>(r);
}

}  // namespace detail

inline Json field_spec_to_json(const Field& f) {
  Json j;
  switch (f.kind()) {
    case FieldKind::prime:
      j["kind"] = "prime";
      j["p"] = std::to_string(f.characteristic());
      break;
    case FieldKind::extension: {
      j["kind"] = "extension";
      j["p"] = std::to_string(f.characteristic());
      j["m"] = f.extension_degree();
      Json mod = Json::array();
      for (auto c : f.modulus()) mod.push_back(std::to_string(c));
      j["modulus"] = mod;
      break;
    }
    case FieldKind::rational:
      j["kind"] = "rational";
      break;
  }
  return j;
}

inline Field field_spec_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    raise(Errc::malformed_document, "field spec needs a \"kind\"");
  }
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "rational") return Field::rationals();
  if (!j.contains("p")) raise(Errc::malformed_document, "finite field spec needs \"p\"");
  const BigInt p_big = detail::parse_bigint(j["p"], "p");
  if (p_big <= 0 || p_big >= BigInt(detail::kMaxCharacteristic)) {
    raise(Errc::not_prime, "characteristic out of supported range");
  }
  const std::uint64_t p = static_cast<std::uint64_t>(p_big);
  if (kind == "prime") return Field::prime(p);
  if (kind != "extension") raise(Errc::malformed_document, "unknown field kind: " + kind);
  if (!j.contains("m") || !j["m"].is_number_integer() || j["m"].get<long long>() < 1) {
    raise(Errc::bad_modulus_degree, "extension spec needs integer m >= 1");
  }
  const unsigned m = j["m"].get<unsigned>();
  if (!j.contains("modulus")) return Field::extension(p, m);
  const Json& mod = j["modulus"];
  if (!mod.is_array()) raise(Errc::malformed_document, "modulus must be an array");
  std::vector<std::uint64_t> coeffs;
  coeffs.reserve(mod.size());
  for (const auto& c : mod) coeffs.push_back(detail::residue_of(detail::parse_bigint(c, "modulus coefficient"), p));
  return Field::extension(p, m, std::move(coeffs));
}

inline Json element_to_json(const FieldElement& e) {
  switch (e.field().kind()) {
    case FieldKind::prime: return std::to_string(e.residue());
    case FieldKind::extension: {
      Json arr = Json::array();
      for (auto c : e.coeffs()) arr.push_back(std::to_string(c));
      return arr;
    }
    case FieldKind::rational: return e.rational().str();
  }
  raise(Errc::malformed_document, "invalid element");
}

inline FieldElement element_from_json(const Json& j, const Field& f) {
  switch (f.kind()) {
    case FieldKind::prime:
      return f.from_residue(detail::residue_of(detail::parse_bigint(j, "element"), f.characteristic()));
    case FieldKind::extension: {
      if (!j.is_array() || j.size() != f.extension_degree()) {
        raise(Errc::malformed_document, "extension element must list m coefficients");
      }
      std::vector<std::uint64_t> coeffs;
      coeffs.reserve(j.size());
      for (const auto& c : j) {
        coeffs.push_back(detail::residue_of(detail::parse_bigint(c, "coefficient"), f.characteristic()));
      }
      return f.from_coeffs(std::move(coeffs));
    }
    case FieldKind::rational: {
      if (j.is_number_integer()) return f.from_rational(Rational(j.get<long long>()));
      if (!j.is_string()) raise(Errc::malformed_document, "rational element must be a string");
      const std::string s = j.get<std::string>();
      try {
        const auto slash = s.find('/');
        if (slash == std::string::npos) return f.from_rational(Rational(BigInt(s)));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) raise(Errc::division_by_zero, "zero denominator");
        if (den < 0) {
          num = -num;
          den = -den;
        }
        return f.from_rational(Rational(num) / Rational(den));
      } catch (const Error&) {
        throw;
      } catch (const std::exception&) {
        raise(Errc::malformed_document, "bad rational literal: " + s);
      }
    }
  }
  raise(Errc::malformed_document, "invalid field");
}

inline Json term_to_json(const MultiplicationTerm& t) {
  Json j;
  j["scalar"] = element_to_json(t.scalar());
  Json forms = Json::array();
  for (const auto& f : t.forms()) {
    Json form = Json::array();
    for (const auto& c : f.coeffs()) form.push_back(element_to_json(c));
    forms.push_back(form);
  }
  j["forms"] = forms;
  return j;
}

inline Json circuit_to_json(const Circuit& c) {
  Json j;
  j["field"] = field_spec_to_json(c.field());
  j["n"] = c.vars();
  j["d"] = c.degree();
  j["k"] = c.fanin_bound();
  Json terms = Json::array();
  for (const auto& t : c.terms()) terms.push_back(term_to_json(t));
  j["terms"] = terms;
  return j;
}

struct ParseOptions {
  bool homogenize = false;  // accept affine forms with a leading constant entry
};

namespace detail {

inline std::size_t parse_size(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    raise(Errc::malformed_document, std::string(what) + " must be a nonnegative integer");
  }
  return j.get<std::size_t>();
}

}  // namespace detail

// Parse and fully validate a circuit document. With options.homogenize the
// forms carry n+1 entries (leading constant) and ragged term degrees <= d are
// allowed; the result is then the homogenized circuit over n+1 variables.
inline Circuit parse_circuit(const Json& j, const ParseOptions& options = {}) {
  if (!j.is_object()) raise(Errc::malformed_document, "circuit must be a JSON object");
  for (const char* key : {"field", "n", "d", "k", "terms"}) {
    if (!j.contains(key)) raise(Errc::malformed_document, std::string("circuit needs \"") + key + "\"");
  }
  const Field field = field_spec_from_json(j["field"]);
  const std::size_t n = detail::parse_size(j["n"], "n");
  const std::size_t d = detail::parse_size(j["d"], "d");
  const std::size_t k = detail::parse_size(j["k"], "k");
  if (n == 0 || k == 0) raise(Errc::malformed_document, "n and k must be >= 1");
  if (!j["terms"].is_array()) raise(Errc::malformed_document, "terms must be an array");
  if (j["terms"].size() > k) raise(Errc::too_many_terms, "more than k terms");

  const std::size_t form_len = options.homogenize ? n + 1 : n;
  auto parse_form_coeffs = [&](const Json& form) {
    if (!form.is_array() || form.size() != form_len) {
      raise(Errc::malformed_document, "each form must list " + std::to_string(form_len) +
                                          " coefficients");
    }
    std::vector<FieldElement> coeffs;
    coeffs.reserve(form_len);
    for (const auto& c : form) coeffs.push_back(element_from_json(c, field));
    return coeffs;
  };

  if (options.homogenize) {
    AffineCircuit ac{field, n, d, k, {}};
    for (const auto& tj : j["terms"]) {
      if (!tj.is_object() || !tj.contains("scalar") || !tj.contains("forms") ||
          !tj["forms"].is_array()) {
        raise(Errc::malformed_document, "each term needs \"scalar\" and \"forms\"");
      }
      AffineTerm at;
      at.scalar = element_from_json(tj["scalar"], field);
      if (at.scalar.is_zero()) raise(Errc::malformed_document, "term scalar must be nonzero");
      for (const auto& fj : tj["forms"]) at.forms.push_back(AffineForm{parse_form_coeffs(fj)});
      ac.terms.push_back(std::move(at));
    }
    return homogenize(ac);
  }

  std::vector<MultiplicationTerm> terms;
  for (const auto& tj : j["terms"]) {
    if (!tj.is_object() || !tj.contains("scalar") || !tj.contains("forms") ||
        !tj["forms"].is_array()) {
      raise(Errc::malformed_document, "each term needs \"scalar\" and \"forms\"");
    }
    const FieldElement scalar = element_from_json(tj["scalar"], field);
    if (scalar.is_zero()) raise(Errc::malformed_document, "term scalar must be nonzero");
    if (tj["forms"].size() != d) raise(Errc::degree_mismatch, "term degree differs from d");
    std::vector<LinearForm> forms;
    forms.reserve(d);
    for (const auto& fj : tj["forms"]) forms.emplace_back(parse_form_coeffs(fj));
    terms.emplace_back(scalar, std::move(forms));
  }
  Circuit c(field, n, d, k, std::move(terms));
  c.require_nonzero_forms();
  return c;
}

inline Json hitting_point_to_json(const HittingPoint& pt) {
  Json j;
  j["beta"] = element_to_json(pt.beta);
  Json gamma = Json::array();
  for (const auto& g : pt.gamma) gamma.push_back(element_to_json(g));
  j["gamma"] = gamma;
  Json delta = Json::array();
  for (const auto& x : pt.delta) delta.push_back(element_to_json(x));
  j["delta"] = delta;
  return j;
}

inline Json verdict_to_json(const Verdict& v, double elapsed_ms) {
  Json j;
  j["verdict"] = v.nonzero ? "nonzero" : "zero";
  j["points_evaluated"] = v.points_evaluated;
  j["elapsed_ms"] = elapsed_ms;
  if (v.eval_field.valid()) j["field"] = field_spec_to_json(v.eval_field);
  if (v.witness) {
    Json w = hitting_point_to_json(v.witness->point);
    w["value"] = element_to_json(v.witness->value);
    w["index"] = v.witness->point.index;
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

inline Json certificate_to_json(const Certificate& cert, bool verified) {
  Json j;
  j["i"] = cert.i;
  Json path = Json::array();
  for (const auto& node : cert.path.node_terms()) path.push_back(term_to_json(node));
  j["path"] = path;
  j["alpha"] = element_to_json(cert.alpha);
  j["verified"] = verified;
  return j;
}

inline Json labeled_circuit_to_json(const LabeledCircuit& lc, std::size_t index) {
  Json j;
  j["index"] = index;
  j["label"] = lc.zero ? "zero" : "nonzero";
  j["builder"] = lc.builder;
  j["circuit"] = circuit_to_json(lc.circuit);
  return j;
}

inline LabeledCircuit labeled_circuit_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("circuit") || !j.contains("label")) {
    raise(Errc::malformed_document, "corpus line needs \"label\" and \"circuit\"");
  }
  LabeledCircuit lc{parse_circuit(j["circuit"]), j["label"].get<std::string>() == "zero",
                    j.value("builder", std::string("unknown"))};
  return lc;
}

inline Json run_report_to_json(const RunReport& report) {
  Json j;
  j["count"] = report.circuits.size();
  j["all_agree"] = report.all_agree;
  j["zero_labels"] = report.zero_labels;
  j["nonzero_labels"] = report.nonzero_labels;
  Json rows = Json::array();
  for (const auto& cr : report.circuits) {
    Json row;
    row["index"] = cr.index;
    row["label"] = cr.label_zero ? "zero" : "nonzero";
    row["agree"] = cr.agree;
    Json verdicts;
    for (const auto& mr : cr.results) {
      verdicts[mr.mode] = Json{{"verdict", mr.verdict}, {"elapsed_ms", mr.elapsed_ms}};
    }
    row["modes"] = verdicts;
    rows.push_back(row);
  }
  j["circuits"] = rows;
  return j;
}

}  // namespace pitkit
