#pragma once
// JSON encodings of the shared domain objects: window sets and their
// generator forms, weight rules, truncated vectors and balls. Parsing is
// strict: unknown fields are collected and rejected with a ValidationError
// naming them, so a config typo never silently changes an experiment.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dynlab/natset.hpp"
#include "dynlab/shiftlab.hpp"

namespace dynlab::io {

using json = nlohmann::json;

class ValidationError : public std::runtime_error {
public:
  ValidationError(const std::string& message, std::vector<std::string> fields)
      : std::runtime_error(message), fields_(std::move(fields)) {}
  const std::vector<std::string>& fields() const { return fields_; }

private:
  std::vector<std::string> fields_;
};

// Throws ValidationError if obj is not an object or contains keys outside
// allowed; `where` prefixes the reported field paths.
void check_fields(const json& obj, const std::vector<std::string>& allowed,
                  const std::string& where);

void require_present(const json& obj, const std::vector<std::string>& required,
                     const std::string& where);

// Window sets parse either from the explicit encoding
//   {"horizon": n, "elements": [...]}
// or from a generator form:
//   {"kind": "explicit", "horizon": n, "elements": [...]}
//   {"kind": "ap", "horizon": n, "start": a, "step": d}
//   {"kind": "random", "horizon": n, "density": p, "seed": s}
//   {"kind": "knr", "nmax": N}
// The knr generator yields a big-integer window for nmax = 3.
using ParsedWindowSet = std::variant<natset::WindowSet, natset::BigWindowSet>;
ParsedWindowSet parse_window_set(const json& spec, std::uint64_t default_seed,
                                 const std::string& where);

json to_json(const natset::WindowSet& s, std::size_t element_cap = 1u << 16);
json to_json(const natset::BigWindowSet& s, std::size_t element_cap = 1u << 16);

template <typename Int>
json verdict_to_json(const natset::FamilyVerdict<Int>& v) {
  json out;
  out["verdict"] = natset::verdict_label(v);
  if (v.witness) out["witness"] = natset::int_to_string(*v.witness);
  if (v.witness_extent) out["witness_extent"] = natset::int_to_string(*v.witness_extent);
  if (!v.detail.empty()) out["detail"] = v.detail;
  return out;
}

// Weight rules:
//   {"side": "bilateral"|"unilateral", "rule": {"kind": "constant", "value": c}}
//   rule kinds: constant, step {neg, pos}, periodic {pattern}, explicit
//   {first_index, values, tail}.
shiftlab::WeightSpec parse_weight_spec(const json& spec, const std::string& where);

// Truncated vectors: {"lo": n, "coeffs": [[re, im], ...]} or
// {"basis": k, "lo": a, "hi": b}.
shiftlab::TruncatedVector parse_truncated_vector(const json& spec, const std::string& where);

// Balls: {"center": <vector>, "radius": r, "norm": "sup"|"p", "p": 2.0}.
shiftlab::BallSpec parse_ball(const json& spec, const std::string& where);

std::int64_t parse_int(const json& v, const std::string& where);
double parse_double(const json& v, const std::string& where);

} // namespace dynlab::io
