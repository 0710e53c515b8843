#include "dynlab/json_io.hpp"

#include <algorithm>

namespace dynlab::io {

void check_fields(const json& obj, const std::vector<std::string>& allowed,
                  const std::string& where) {
  if (!obj.is_object())
    throw ValidationError(where + ": expected an object", {where});
  std::vector<std::string> unknown;
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      unknown.push_back(where + "." + key);
  }
  if (!unknown.empty())
    throw ValidationError(where + ": unknown fields", std::move(unknown));
}

void require_present(const json& obj, const std::vector<std::string>& required,
                     const std::string& where) {
  std::vector<std::string> missing;
  for (const auto& key : required)
    if (!obj.contains(key)) missing.push_back(where + "." + key);
  if (!missing.empty())
    throw ValidationError(where + ": missing fields", std::move(missing));
}

std::int64_t parse_int(const json& v, const std::string& where) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  throw ValidationError(where + ": expected an integer", {where});
}

double parse_double(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  throw ValidationError(where + ": expected a number", {where});
}

namespace {

std::vector<std::int64_t> parse_int_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw ValidationError(where + ": expected an array", {where});
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(parse_int(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

} // namespace

ParsedWindowSet parse_window_set(const json& spec, std::uint64_t default_seed,
                                 const std::string& where) {
  if (!spec.is_object()) throw ValidationError(where + ": expected an object", {where});
  std::string kind = spec.contains("kind") ? spec["kind"].get<std::string>() : "explicit";

  if (kind == "explicit") {
    check_fields(spec, {"kind", "horizon", "elements"}, where);
    require_present(spec, {"horizon", "elements"}, where);
    return natset::WindowSet(parse_int(spec["horizon"], where + ".horizon"),
                             parse_int_list(spec["elements"], where + ".elements"));
  }
  if (kind == "ap") {
    check_fields(spec, {"kind", "horizon", "start", "step"}, where);
    require_present(spec, {"horizon", "start", "step"}, where);
    return natset::WindowSet::arithmetic_progression(
        parse_int(spec["horizon"], where + ".horizon"),
        parse_int(spec["start"], where + ".start"), parse_int(spec["step"], where + ".step"));
  }
  if (kind == "random") {
    check_fields(spec, {"kind", "horizon", "density", "seed"}, where);
    require_present(spec, {"horizon", "density"}, where);
    std::uint64_t seed = default_seed;
    if (spec.contains("seed"))
      seed = static_cast<std::uint64_t>(parse_int(spec["seed"], where + ".seed"));
    return natset::random_window_set(parse_int(spec["horizon"], where + ".horizon"),
                                     parse_double(spec["density"], where + ".density"), seed);
  }
  if (kind == "knr") {
    check_fields(spec, {"kind", "nmax"}, where);
    require_present(spec, {"nmax"}, where);
    std::int64_t nmax = parse_int(spec["nmax"], where + ".nmax");
    if (nmax < 1 || nmax > 3)
      throw ValidationError(where + ".nmax: must be in [1, 3]", {where + ".nmax"});
    if (nmax <= 2) return natset::knr_window_set_small(static_cast<int>(nmax));
    return natset::knr_window_set(static_cast<int>(nmax));
  }
  throw ValidationError(where + ".kind: unknown set generator '" + kind + "'", {where + ".kind"});
}

namespace {

json int64_element(std::int64_t v) { return json(v); }

json big_element(const mpz_class& v) {
  if (v.fits_slong_p()) return json(static_cast<std::int64_t>(v.get_si()));
  return json(v.get_str());
}

template <typename Int, typename Fn>
json window_set_json(const natset::BasicWindowSet<Int>& s, std::size_t cap, Fn&& element) {
  json out;
  out["horizon"] = element(s.horizon());
  out["size"] = s.size();
  json elems = json::array();
  std::size_t count = std::min(cap, s.size());
  for (std::size_t i = 0; i < count; ++i) elems.push_back(element(s.elements()[i]));
  out["elements"] = std::move(elems);
  if (count < s.size()) out["elements_truncated"] = true;
  return out;
}

} // namespace

json to_json(const natset::WindowSet& s, std::size_t element_cap) {
  return window_set_json(s, element_cap, int64_element);
}

json to_json(const natset::BigWindowSet& s, std::size_t element_cap) {
  return window_set_json(s, element_cap, big_element);
}

shiftlab::WeightSpec parse_weight_spec(const json& spec, const std::string& where) {
  check_fields(spec, {"side", "rule"}, where);
  require_present(spec, {"side", "rule"}, where);
  const std::string side_s = spec["side"].get<std::string>();
  shiftlab::Side side;
  if (side_s == "bilateral") side = shiftlab::Side::bilateral;
  else if (side_s == "unilateral") side = shiftlab::Side::unilateral;
  else throw ValidationError(where + ".side: expected bilateral or unilateral", {where + ".side"});

  const json& rule = spec["rule"];
  if (!rule.is_object() || !rule.contains("kind"))
    throw ValidationError(where + ".rule: expected an object with a kind", {where + ".rule"});
  const std::string kind = rule["kind"].get<std::string>();
  const std::string rw = where + ".rule";
  if (kind == "constant") {
    check_fields(rule, {"kind", "value"}, rw);
    require_present(rule, {"value"}, rw);
    return shiftlab::WeightSpec(side, shiftlab::ConstantRule{parse_double(rule["value"], rw + ".value")});
  }
  if (kind == "step") {
    check_fields(rule, {"kind", "neg", "pos"}, rw);
    require_present(rule, {"neg", "pos"}, rw);
    return shiftlab::WeightSpec(side, shiftlab::StepRule{parse_double(rule["neg"], rw + ".neg"),
                                                         parse_double(rule["pos"], rw + ".pos")});
  }
  if (kind == "periodic") {
    check_fields(rule, {"kind", "pattern"}, rw);
    require_present(rule, {"pattern"}, rw);
    if (!rule["pattern"].is_array())
      throw ValidationError(rw + ".pattern: expected an array", {rw + ".pattern"});
    std::vector<double> pattern;
    for (std::size_t i = 0; i < rule["pattern"].size(); ++i)
      pattern.push_back(parse_double(rule["pattern"][i], rw + ".pattern"));
    return shiftlab::WeightSpec(side, shiftlab::PeriodicRule{std::move(pattern)});
  }
  if (kind == "explicit") {
    check_fields(rule, {"kind", "first_index", "values", "tail"}, rw);
    require_present(rule, {"first_index", "values", "tail"}, rw);
    shiftlab::ExplicitRule er;
    er.first_index = parse_int(rule["first_index"], rw + ".first_index");
    for (std::size_t i = 0; i < rule["values"].size(); ++i)
      er.values.push_back(parse_double(rule["values"][i], rw + ".values"));
    er.tail = parse_double(rule["tail"], rw + ".tail");
    return shiftlab::WeightSpec(side, std::move(er));
  }
  throw ValidationError(rw + ".kind: unknown weight rule '" + kind + "'", {rw + ".kind"});
}

shiftlab::TruncatedVector parse_truncated_vector(const json& spec, const std::string& where) {
  if (!spec.is_object()) throw ValidationError(where + ": expected an object", {where});
  if (spec.contains("basis")) {
    check_fields(spec, {"basis", "lo", "hi"}, where);
    require_present(spec, {"basis", "lo", "hi"}, where);
    return shiftlab::TruncatedVector::basis(parse_int(spec["basis"], where + ".basis"),
                                            parse_int(spec["lo"], where + ".lo"),
                                            parse_int(spec["hi"], where + ".hi"));
  }
  check_fields(spec, {"lo", "coeffs"}, where);
  require_present(spec, {"lo", "coeffs"}, where);
  shiftlab::TruncatedVector v;
  v.lo = parse_int(spec["lo"], where + ".lo");
  const json& coeffs = spec["coeffs"];
  if (!coeffs.is_array()) throw ValidationError(where + ".coeffs: expected an array", {where + ".coeffs"});
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const json& c = coeffs[i];
    const std::string cw = where + ".coeffs[" + std::to_string(i) + "]";
    if (!c.is_array() || c.size() != 2)
      throw ValidationError(cw + ": expected [re, im]", {cw});
    v.coeffs.push_back({parse_double(c[0], cw), parse_double(c[1], cw)});
  }
  return v;
}

shiftlab::BallSpec parse_ball(const json& spec, const std::string& where) {
  check_fields(spec, {"center", "radius", "norm", "p"}, where);
  require_present(spec, {"center", "radius"}, where);
  shiftlab::BallSpec ball;
  ball.center = parse_truncated_vector(spec["center"], where + ".center");
  ball.radius = parse_double(spec["radius"], where + ".radius");
  if (ball.radius <= 0.0)
    throw ValidationError(where + ".radius: must be positive", {where + ".radius"});
  if (spec.contains("norm")) {
    const std::string n = spec["norm"].get<std::string>();
    if (n == "sup") ball.norm = shiftlab::NormKind::sup;
    else if (n == "p") ball.norm = shiftlab::NormKind::p_norm;
    else throw ValidationError(where + ".norm: expected sup or p", {where + ".norm"});
  }
  if (spec.contains("p")) ball.p = parse_double(spec["p"], where + ".p");
  return ball;
}

} // namespace dynlab::io
