#pragma once

#include <optional>
#include <string>

#include "copson/exact.hpp"

namespace copson {

enum class Sign { Positive, NonPositive, Undecided };
enum class Method { SturmExact, IntervalSubdivision, PointwiseInterval };

inline const char* to_string(Sign s) {
  switch (s) {
    case Sign::Positive: return "Positive";
    case Sign::NonPositive: return "NonPositive";
    case Sign::Undecided: return "Undecided";
  }
  return "?";
}

inline const char* to_string(Method m) {
  switch (m) {
    case Method::SturmExact: return "SturmExact";
    case Method::IntervalSubdivision: return "IntervalSubdivision";
    case Method::PointwiseInterval: return "PointwiseInterval";
  }
  return "?";
}

// Rigorous tri-state outcome. Positive/NonPositive are only ever produced
// from exact arithmetic or from interval bounds strictly excluding zero.
struct Verdict {
  Sign state = Sign::Undecided;
  Method method = Method::SturmExact;
  long precision_bits = 0;
  long subdivisions = 0;
  std::optional<long> witness_index;      // sequence index n, when applicable
  std::optional<Rational> witness_point;  // rational point, when applicable

  bool positive() const { return state == Sign::Positive; }
};

}  // namespace copson
