#pragma once

#include <stdexcept>
#include <string>

namespace pitkit {

// Failure taxonomy shared across the library. Every throwing path raises
// Error with one of these codes so callers can branch without string matching.
enum class Errc {
  not_prime,
  bad_modulus_degree,
  reducible_modulus,
  division_by_zero,
  field_mismatch,
  field_too_small,
  malformed_document,
  degree_mismatch,
  zero_form_in_term,
  too_many_terms,
  dimension_mismatch,
  index_out_of_range,
  expansion_too_large,
  zero_affine_factor,
  not_homogeneous,
  graded_space_too_large,
  path_explosion,
  circuit_is_zero,
  certificate_not_found,
};

inline const char* errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::not_prime: return "NotPrime";
    case Errc::bad_modulus_degree: return "BadModulusDegree";
    case Errc::reducible_modulus: return "ReducibleModulus";
    case Errc::division_by_zero: return "DivisionByZero";
    case Errc::field_mismatch: return "FieldMismatch";
    case Errc::field_too_small: return "FieldTooSmall";
    case Errc::malformed_document: return "MalformedDocument";
    case Errc::degree_mismatch: return "DegreeMismatch";
    case Errc::zero_form_in_term: return "ZeroFormInTerm";
    case Errc::too_many_terms: return "TooManyTerms";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::expansion_too_large: return "ExpansionTooLarge";
    case Errc::zero_affine_factor: return "ZeroAffineFactor";
    case Errc::not_homogeneous: return "NotHomogeneous";
    case Errc::graded_space_too_large: return "GradedSpaceTooLarge";
    case Errc::path_explosion: return "PathExplosion";
    case Errc::circuit_is_zero: return "CircuitIsZero";
    case Errc::certificate_not_found: return "CertificateNotFound";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace pitkit
