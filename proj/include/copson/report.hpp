#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "copson/certify.hpp"
#include "copson/interval.hpp"
#include "copson/verdict.hpp"

namespace copson {

using Json = nlohmann::ordered_json;

// Enough decimal digits to round-trip a p-bit binary endpoint.
inline int decimal_digits_for(long precision_bits) {
  return static_cast<int>(precision_bits * 0.30103) + 3;
}

// Endpoints are printed with outward decimal rounding, so the decimal
// interval in the report still encloses the value.
inline Json interval_json(const Interval& iv) {
  int digits = decimal_digits_for(iv.precision());
  return Json{{"lo", iv.decimal_lo(digits)},
              {"hi", iv.decimal_hi(digits)},
              {"precision_bits", static_cast<long>(iv.precision())}};
}

inline Json verdict_json(const Verdict& v) {
  Json j{{"state", to_string(v.state)},
         {"method", to_string(v.method)},
         {"precision_bits", v.precision_bits},
         {"subdivisions", v.subdivisions}};
  if (v.witness_index)
    j["witness_n"] = *v.witness_index;
  else if (v.witness_point)
    j["witness_point"] = to_string(*v.witness_point);
  else
    j["witness"] = nullptr;
  return j;
}

inline Json dominance_json(const DominanceReport& rep, bool timing = false) {
  Json j{{"report", "dominance"},
         {"family", rep.family_id},
         {"alpha", to_string(rep.alpha)},
         {"n_lo", rep.n_lo},
         {"n_hi", rep.n_hi},
         {"verdict", verdict_json(rep.verdict)},
         {"escalations", rep.escalations},
         {"max_precision_bits", rep.max_precision_bits}};
  if (rep.min_margin) {
    j["min_margin"] = Json{{"n", rep.min_margin_n}, {"value", interval_json(*rep.min_margin)}};
  } else {
    j["min_margin"] = nullptr;
  }
  if (timing) j["elapsed_ms"] = rep.elapsed.count() * 1000.0;
  return j;
}

inline Json scan_json(const ScanReport& rep) {
  Json entries = Json::array();
  for (const auto& e : rep.entries) {
    Json je{{"alpha", to_string(e.alpha)}, {"verdict", to_string(e.verdict)}};
    if (e.min_margin) {
      je["min_margin_n"] = e.min_margin_n;
      je["min_margin_lo"] = e.min_margin->decimal_lo(decimal_digits_for(e.min_margin->precision()));
    }
    entries.push_back(std::move(je));
  }
  Json j{{"report", "scan"},
         {"family", rep.family_id},
         {"alpha_lo", to_string(rep.alpha_lo)},
         {"alpha_hi", to_string(rep.alpha_hi)},
         {"steps", rep.steps},
         {"nmax", rep.nmax},
         {"grid", std::move(entries)}};
  if (rep.all_pass) {
    j["boundary_bracket"] = "all-pass";
  } else if (rep.alpha_fail_max && rep.alpha_pass_min) {
    j["boundary_bracket"] =
        Json{{"alpha_fail_max", to_string(*rep.alpha_fail_max)},
             {"alpha_pass_min", to_string(*rep.alpha_pass_min)}};
  } else if (rep.alpha_fail_max) {
    j["boundary_bracket"] = Json{{"alpha_fail_max", to_string(*rep.alpha_fail_max)}};
  }
  return j;
}

}  // namespace copson
