#pragma once

#include <stdexcept>
#include <string>

namespace copson {

enum class errc {
  alpha_out_of_range,
  index_beyond_nmax,
  range_error,
  series_domain,
  k_too_small,
  nonpositive_base,
  zero_polynomial,
  nonpositive_lambda_mu,
  nonpositive_entry,
  empty_table,
  unknown_lemma,
  domain_not_contained,
  parse_error,
  non_rational_power,
  division_by_zero,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::alpha_out_of_range: return "AlphaOutOfRange";
    case errc::index_beyond_nmax: return "IndexBeyondNmax";
    case errc::range_error: return "RangeError";
    case errc::series_domain: return "SeriesDomain";
    case errc::k_too_small: return "KTooSmall";
    case errc::nonpositive_base: return "NonpositiveBase";
    case errc::zero_polynomial: return "ZeroPolynomial";
    case errc::nonpositive_lambda_mu: return "NonpositiveLambdaMu";
    case errc::nonpositive_entry: return "NonpositiveEntry";
    case errc::empty_table: return "EmptyTable";
    case errc::unknown_lemma: return "UnknownLemma";
    case errc::domain_not_contained: return "DomainNotContained";
    case errc::parse_error: return "ParseError";
    case errc::non_rational_power: return "NonRationalPower";
    case errc::division_by_zero: return "DivisionByZero";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace copson
