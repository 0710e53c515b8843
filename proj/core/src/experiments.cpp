#include "dynlab/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "dynlab/diagonal.hpp"
#include "dynlab/json_io.hpp"
#include "dynlab/natset.hpp"
#include "dynlab/recurrence.hpp"
#include "dynlab/shiftlab.hpp"
#include "dynlab/sobolev.hpp"

namespace dynlab::experiments {

using io::json;
using io::ValidationError;

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

template <typename Int>
json gap_to_json(const natset::GapStats<Int>& g) {
  json out;
  out["max_gap"] = natset::int_to_string(g.max_gap);
  out["gap_start"] = natset::int_to_string(g.gap_start);
  out["syndetic"] = io::verdict_to_json(g.verdict);
  return out;
}

// --- families ---------------------------------------------------------------

template <typename Int>
void families_checks(const natset::BasicWindowSet<Int>& set, const json& params,
                     std::uint64_t seed, json& checks) {
  (void)seed;
  if (params.contains("syndetic")) {
    const json& p = params["syndetic"];
    io::check_fields(p, {"bound"}, "parameters.syndetic");
    io::require_present(p, {"bound"}, "parameters.syndetic");
    Int bound{io::parse_int(p["bound"], "parameters.syndetic.bound")};
    checks["gap_profile"] = gap_to_json(natset::gap_profile<Int>(set, bound));
  }
  if (params.contains("thick")) {
    const json& p = params["thick"];
    io::check_fields(p, {"length"}, "parameters.thick");
    io::require_present(p, {"length"}, "parameters.thick");
    Int len{io::parse_int(p["length"], "parameters.thick.length")};
    checks["thick"] = io::verdict_to_json(natset::thick_witness<Int>(set, len));
  }
  if (params.contains("piecewise")) {
    const json& p = params["piecewise"];
    io::check_fields(p, {"gap", "length"}, "parameters.piecewise");
    io::require_present(p, {"gap", "length"}, "parameters.piecewise");
    Int gap{io::parse_int(p["gap"], "parameters.piecewise.gap")};
    Int len{io::parse_int(p["length"], "parameters.piecewise.length")};
    checks["piecewise_syndetic"] = io::verdict_to_json(natset::pw_syndetic<Int>(set, gap, len));
  }
  if (params.contains("banach")) {
    const json& p = params["banach"];
    io::check_fields(p, {"s_max", "delta"}, "parameters.banach");
    io::require_present(p, {"s_max"}, "parameters.banach");
    std::int64_t s_max = io::parse_int(p["s_max"], "parameters.banach.s_max");
    if (s_max > 4096)
      throw ValidationError("parameters.banach.s_max: capped at 4096", {"parameters.banach.s_max"});
    double delta = p.contains("delta") ? io::parse_double(p["delta"], "parameters.banach.delta") : 0.05;
    auto prof = natset::banach_profile<Int>(set, s_max);
    json jp = json::array();
    for (const auto& pt : prof) jp.push_back({{"s", pt.s}, {"alpha", pt.alpha}, {"ratio", pt.ratio}});
    checks["banach_profile"] = std::move(jp);
    checks["banach_positive"] = io::verdict_to_json(natset::banach_positive<Int>(set, s_max, delta));
  }
  if (params.contains("stretch")) {
    const json& p = params["stretch"];
    io::check_fields(p, {"r"}, "parameters.stretch");
    io::require_present(p, {"r"}, "parameters.stretch");
    int r = static_cast<int>(io::parse_int(p["r"], "parameters.stretch.r"));
    checks["stretch_intersection"] = io::to_json(natset::stretch_intersection<Int>(set, r), 4096);
  }
}

RunResult run_families(const json& params, std::uint64_t seed, RunResult result) {
  io::check_fields(params,
                   {"set", "syndetic", "thick", "piecewise", "banach", "stretch", "delta_seed", "dual"},
                   "parameters");
  io::require_present(params, {"set"}, "parameters");
  auto parsed = io::parse_window_set(params["set"], seed, "parameters.set");

  json checks = json::object();
  const bool big = std::holds_alternative<natset::BigWindowSet>(parsed);
  if (big) {
    if (params.contains("delta_seed") || params.contains("dual"))
      throw ValidationError("parameters: delta_seed and dual are not supported for big-integer windows",
                            {"parameters"});
    const auto& set = std::get<natset::BigWindowSet>(parsed);
    families_checks(set, params, seed, checks);
    result.report["set"] = io::to_json(set, 4096);
  } else {
    const auto& set = std::get<natset::WindowSet>(parsed);
    families_checks(set, params, seed, checks);
    result.report["set"] = io::to_json(set, 4096);
    if (params.contains("delta_seed")) {
      const json& p = params["delta_seed"];
      io::check_fields(p, {"size"}, "parameters.delta_seed");
      io::require_present(p, {"size"}, "parameters.delta_seed");
      int size = static_cast<int>(io::parse_int(p["size"], "parameters.delta_seed.size"));
      auto found = natset::delta_seed_search(set, size);
      json js;
      js["found"] = found.has_value();
      if (found) js["seed_set"] = io::to_json(*found, 64);
      checks["delta_seed"] = std::move(js);
    }
    if (params.contains("dual")) {
      const json& p = params["dual"];
      io::check_fields(p, {"members"}, "parameters.dual");
      io::require_present(p, {"members"}, "parameters.dual");
      std::vector<natset::WindowSet> members;
      for (std::size_t i = 0; i < p["members"].size(); ++i) {
        auto m = io::parse_window_set(p["members"][i], seed,
                                      "parameters.dual.members[" + std::to_string(i) + "]");
        if (!std::holds_alternative<natset::WindowSet>(m))
          throw ValidationError("parameters.dual.members: big windows not supported",
                                {"parameters.dual.members"});
        members.push_back(std::get<natset::WindowSet>(m));
      }
      checks["dual_meets"] = io::verdict_to_json(natset::dual_meets(set, members));
    }
  }
  result.report["checks"] = std::move(checks);
  return result;
}

// --- shift ------------------------------------------------------------------

shiftlab::WindowFamilyTest parse_family_test(const json& spec, const std::string& where) {
  io::check_fields(spec, {"name", "bound", "length"}, where);
  io::require_present(spec, {"name"}, where);
  shiftlab::WindowFamilyTest t;
  t.name = spec["name"].get<std::string>();
  if (spec.contains("bound")) t.bound = io::parse_int(spec["bound"], where + ".bound");
  if (spec.contains("length")) t.length = io::parse_int(spec["length"], where + ".length");
  return t;
}

RunResult run_shift(const json& params, std::uint64_t seed, RunResult result) {
  (void)seed;
  io::check_fields(params, {"weight", "criterion", "verdict", "return_set"}, "parameters");
  io::require_present(params, {"weight"}, "parameters");
  shiftlab::WeightSpec w = io::parse_weight_spec(params["weight"], "parameters.weight");
  result.report["weight"] = params["weight"];

  if (params.contains("criterion")) {
    const json& p = params["criterion"];
    io::check_fields(p, {"j", "d", "M", "m_max"}, "parameters.criterion");
    io::require_present(p, {"j", "d", "M", "m_max"}, "parameters.criterion");
    auto sets = shiftlab::criterion_sets(w, io::parse_int(p["j"], "parameters.criterion.j"),
                                         io::parse_int(p["d"], "parameters.criterion.d"),
                                         io::parse_double(p["M"], "parameters.criterion.M"),
                                         io::parse_int(p["m_max"], "parameters.criterion.m_max"));
    json jc;
    jc["forward"] = io::to_json(sets.forward, 4096);
    if (sets.backward) jc["backward"] = io::to_json(*sets.backward, 4096);
    result.report["criterion"] = std::move(jc);

    std::ostringstream csv;
    csv << "m,product,pass\n";
    csv << "# forward\n";
    for (const auto& pt : sets.forward_points)
      csv << pt.m << "," << fmt("%.17g", std::exp(pt.log_product)) << "," << (pt.pass ? 1 : 0) << "\n";
    if (!sets.backward_points.empty()) {
      csv << "# backward\n";
      for (const auto& pt : sets.backward_points)
        csv << pt.m << "," << fmt("%.17g", std::exp(pt.log_product)) << "," << (pt.pass ? 1 : 0) << "\n";
    }
    result.csv = csv.str();
  }

  if (params.contains("verdict")) {
    const json& p = params["verdict"];
    io::check_fields(p, {"powers", "test", "probes", "thresholds", "m_max"}, "parameters.verdict");
    io::require_present(p, {"powers", "test"}, "parameters.verdict");
    shiftlab::DisjointVerdictConfig cfg;
    for (std::size_t i = 0; i < p["powers"].size(); ++i)
      cfg.powers.push_back(io::parse_int(p["powers"][i], "parameters.verdict.powers"));
    cfg.test = parse_family_test(p["test"], "parameters.verdict.test");
    if (p.contains("probes"))
      for (std::size_t i = 0; i < p["probes"].size(); ++i)
        cfg.probes.push_back(io::parse_int(p["probes"][i], "parameters.verdict.probes"));
    if (p.contains("thresholds"))
      for (std::size_t i = 0; i < p["thresholds"].size(); ++i)
        cfg.thresholds.push_back(io::parse_double(p["thresholds"][i], "parameters.verdict.thresholds"));
    if (p.contains("m_max")) cfg.m_max = io::parse_int(p["m_max"], "parameters.verdict.m_max");
    result.report["verdict"] = io::verdict_to_json(shiftlab::disjoint_family_verdict(w, cfg));
    result.report["verdict"]["probe_coverage"] = {
        {"probes", cfg.probes.empty() ? shiftlab::default_probes(w.side()) : cfg.probes},
        {"thresholds", cfg.thresholds.empty() ? shiftlab::default_threshold_grid() : cfg.thresholds},
        {"m_max", cfg.m_max}};
  }

  if (params.contains("return_set")) {
    const json& p = params["return_set"];
    io::check_fields(p, {"u", "v", "n_max"}, "parameters.return_set");
    io::require_present(p, {"u", "v", "n_max"}, "parameters.return_set");
    auto u = io::parse_ball(p["u"], "parameters.return_set.u");
    auto v = io::parse_ball(p["v"], "parameters.return_set.v");
    auto set = shiftlab::direct_return_set(w, u, v, io::parse_int(p["n_max"], "parameters.return_set.n_max"));
    result.report["return_set"] = io::to_json(set, 4096);
  }
  return result;
}

// --- sobolev ----------------------------------------------------------------

json sup_to_json(const sobolev::SupNormBracket& b) {
  return json{{"lower", b.lower}, {"upper", b.upper}};
}

json pieces_to_json(const sobolev::PiecewiseAnalytic& f) {
  json out = json::array();
  for (const auto& p : f.pieces()) {
    json jp{{"a", p.a}, {"b", p.b}};
    if (const auto* t = std::get_if<sobolev::TrigPoly>(&p.payload)) {
      jp["payload"] = "trig";
      json terms = json::array();
      for (const auto& [m, c] : t->terms()) terms.push_back({m, c.real(), c.imag()});
      jp["terms"] = std::move(terms);
    } else {
      const auto& poly = std::get<sobolev::Poly>(p.payload);
      jp["payload"] = "poly";
      jp["origin"] = poly.origin();
      json coef = json::array();
      for (const auto& c : poly.coef()) coef.push_back({c.real(), c.imag()});
      jp["coef"] = std::move(coef);
    }
    out.push_back(std::move(jp));
  }
  if (f.period_divisor()) return json{{"period_divisor", *f.period_divisor()}, {"cell", out}};
  return json{{"cell", out}};
}

RunResult run_sobolev(const json& params, RunResult result) {
  io::check_fields(params, {"function", "svg_samples"}, "parameters");
  io::require_present(params, {"function"}, "parameters");
  const json& fn = params["function"];
  if (!fn.is_object() || !fn.contains("kind"))
    throw ValidationError("parameters.function: expected an object with a kind", {"parameters.function"});
  const std::string kind = fn["kind"].get<std::string>();

  std::optional<sobolev::PiecewiseAnalytic> f;
  json jr;
  if (kind == "knr") {
    io::check_fields(fn, {"kind", "n", "r"}, "parameters.function");
    io::require_present(fn, {"n", "r"}, "parameters.function");
    auto rep = sobolev::build_knr_function(
        static_cast<int>(io::parse_int(fn["n"], "parameters.function.n")),
        static_cast<int>(io::parse_int(fn["r"], "parameters.function.r")));
    jr["k"] = rep.k;
    jr["sup"] = sup_to_json(rep.sup);
    jr["bridge_energy"] = rep.bridge_energy;
    jr["bridge_energy_bound"] = rep.bridge_energy_bound;
    jr["cell_second_sq"] = rep.cell_second_sq;
    jr["second_sq"] = rep.second_sq;
    jr["w22_sq"] = rep.w22_sq;
    jr["w22_norm"] = std::sqrt(rep.w22_sq);
    jr["norm_rhs"] = rep.norm_rhs;
    jr["chain"] = {{"sup_within_9", rep.sup_within_9},
                   {"second_within_1104", rep.second_within_1104},
                   {"norm_below_64", rep.norm_below_64},
                   {"bridge_within_bound", rep.bridge_within_bound},
                   {"all", rep.chain_ok()}};
    f = rep.f;
  } else if (kind == "mixing_difference") {
    io::check_fields(fn, {"kind", "k"}, "parameters.function");
    io::require_present(fn, {"k"}, "parameters.function");
    f = sobolev::mixing_difference_function(io::parse_int(fn["k"], "parameters.function.k"));
  } else if (kind == "trig") {
    io::check_fields(fn, {"kind", "terms"}, "parameters.function");
    io::require_present(fn, {"terms"}, "parameters.function");
    std::vector<std::pair<int, sobolev::cplx>> terms;
    for (std::size_t i = 0; i < fn["terms"].size(); ++i) {
      const json& t = fn["terms"][i];
      if (!t.is_array() || t.size() != 3)
        throw ValidationError("parameters.function.terms: expected [m, re, im] triples",
                              {"parameters.function.terms"});
      terms.emplace_back(static_cast<int>(io::parse_int(t[0], "parameters.function.terms")),
                         sobolev::cplx{io::parse_double(t[1], "parameters.function.terms"),
                                       io::parse_double(t[2], "parameters.function.terms")});
    }
    f = sobolev::PiecewiseAnalytic::over_interval(
        {sobolev::Piece{-std::numbers::pi, std::numbers::pi, sobolev::TrigPoly(std::move(terms))}});
  } else {
    throw ValidationError("parameters.function.kind: unknown kind '" + kind + "'",
                          {"parameters.function.kind"});
  }

  if (kind != "knr") {
    jr["w22_sq"] = sobolev::w22_norm_sq(*f);
    jr["w22_norm"] = std::sqrt(jr["w22_sq"].get<double>());
    jr["second_sq"] = sobolev::second_derivative_l2_sq(*f);
    jr["sup"] = sup_to_json(sobolev::sup_norm_bound(*f));
    auto margin = sobolev::w22_bound_margin(*f);
    jr["bound_margin"] = {{"lhs", margin.lhs}, {"rhs", margin.rhs}};
  }
  result.report["function"] = fn;
  result.report["pieces"] = pieces_to_json(*f);
  result.report["result"] = std::move(jr);

  // |f| over the domain (one period cell for periodic functions)
  std::int64_t samples = 512;
  if (params.contains("svg_samples"))
    samples = io::parse_int(params["svg_samples"], "parameters.svg_samples");
  samples = std::clamp<std::int64_t>(samples, 16, 1 << 16);
  std::vector<double> xs, ys;
  const double a = f->domain_start();
  const double b = f->domain_end();
  for (std::int64_t i = 0; i <= samples; ++i) {
    double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(samples);
    xs.push_back(x);
    ys.push_back(std::abs(f->eval(x)));
  }
  result.svg = line_chart_svg(xs, ys, "|f| over the fundamental interval");
  return result;
}

// --- qk ---------------------------------------------------------------------

diagonal::GramBall parse_gram_ball(const json& spec, std::size_t n, const std::string& where) {
  io::check_fields(spec, {"center", "radius"}, where);
  io::require_present(spec, {"center", "radius"}, where);
  diagonal::GramBall ball;
  const json& c = spec["center"];
  if (!c.is_array() || c.size() != n)
    throw ValidationError(where + ".center: expected " + std::to_string(n) + " coefficient pairs",
                          {where + ".center"});
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!c[i].is_array() || c[i].size() != 2)
      throw ValidationError(where + ".center: expected [re, im] pairs", {where + ".center"});
    ball.center.push_back({io::parse_double(c[i][0], where), io::parse_double(c[i][1], where)});
  }
  ball.radius = io::parse_double(spec["radius"], where + ".radius");
  if (ball.radius <= 0.0)
    throw ValidationError(where + ".radius: must be positive", {where + ".radius"});
  return ball;
}

RunResult run_qk(const json& params, RunResult result) {
  io::check_fields(params,
                   {"level", "basis_size", "k_range", "k_extra", "k_list", "ball_u", "ball_v",
                    "max_iterations", "gradient_tol", "syndetic_bound", "thick_length"},
                   "parameters");
  diagonal::SeparationConfig cfg;
  if (params.contains("level"))
    cfg.level = static_cast<int>(io::parse_int(params["level"], "parameters.level"));
  if (params.contains("basis_size"))
    cfg.basis_size = static_cast<int>(io::parse_int(params["basis_size"], "parameters.basis_size"));
  if (params.contains("k_range")) {
    const json& r = params["k_range"];
    if (!r.is_array() || r.size() != 2)
      throw ValidationError("parameters.k_range: expected [lo, hi]", {"parameters.k_range"});
    std::int64_t lo = io::parse_int(r[0], "parameters.k_range");
    std::int64_t hi = io::parse_int(r[1], "parameters.k_range");
    if (lo < 0 || hi < lo || hi - lo > 100000)
      throw ValidationError("parameters.k_range: bad range", {"parameters.k_range"});
    for (std::int64_t k = lo; k <= hi; ++k) cfg.k_values.push_back(k);
  } else if (!params.contains("k_list")) {
    for (std::int64_t k = 1; k <= 200; ++k) cfg.k_values.push_back(k);
  }
  if (params.contains("k_list"))
    for (std::size_t i = 0; i < params["k_list"].size(); ++i)
      cfg.k_values.push_back(io::parse_int(params["k_list"][i], "parameters.k_list"));
  if (params.contains("k_extra"))
    for (std::size_t i = 0; i < params["k_extra"].size(); ++i)
      cfg.k_values.push_back(io::parse_int(params["k_extra"][i], "parameters.k_extra"));
  if (params.contains("max_iterations"))
    cfg.max_iterations = static_cast<int>(io::parse_int(params["max_iterations"], "parameters.max_iterations"));
  if (params.contains("gradient_tol"))
    cfg.gradient_tol = io::parse_double(params["gradient_tol"], "parameters.gradient_tol");
  if (params.contains("syndetic_bound"))
    cfg.syndetic_bound = io::parse_int(params["syndetic_bound"], "parameters.syndetic_bound");
  if (params.contains("thick_length"))
    cfg.thick_length = io::parse_int(params["thick_length"], "parameters.thick_length");

  const std::size_t n = std::size_t(1) << cfg.level;
  if (params.contains("ball_u")) {
    cfg.u = parse_gram_ball(params["ball_u"], n, "parameters.ball_u");
  } else {
    cfg.u.center.assign(n, {0.0, 0.0});
    cfg.u.center.front() = {1.0, 0.0};
    cfg.u.radius = 0.2;
  }
  if (params.contains("ball_v")) {
    cfg.v = parse_gram_ball(params["ball_v"], n, "parameters.ball_v");
  } else {
    cfg.v.center.assign(n, {0.0, 0.0});
    cfg.v.center.back() = {1.0, 0.0};
    cfg.v.radius = 0.2;
  }

  auto rep = diagonal::separation_experiment(cfg);
  json entries = json::array();
  for (const auto& e : rep.entries) {
    entries.push_back({{"k", e.k},
                       {"distance_lower", e.distance_lower},
                       {"distance_upper", e.distance_upper},
                       {"class", diagonal::hit_label(e.cls)},
                       {"iterations", e.iterations},
                       {"converged", e.converged},
                       {"symbol_spread", e.symbol_spread}});
    if (!e.converged) result.non_convergence = true;
  }
  result.report["entries"] = std::move(entries);
  result.report["hit_set"] = io::to_json(rep.hit_set, 4096);
  result.report["hit_gap"] = gap_to_json(rep.hit_gap);
  result.report["miss_thick"] = io::verdict_to_json(rep.miss_thick);
  result.report["undecided"] = rep.undecided;

  std::ostringstream csv;
  csv << "k,distance,hit,distance_lower,class\n";
  for (const auto& e : rep.entries)
    csv << e.k << "," << fmt("%.17g", e.distance_upper) << ","
        << (e.cls == diagonal::HitClass::hit ? 1 : 0) << "," << fmt("%.17g", e.distance_lower)
        << "," << diagonal::hit_label(e.cls) << "\n";
  result.csv = csv.str();

  std::vector<double> xs, ys;
  for (const auto& e : rep.entries) {
    xs.push_back(static_cast<double>(e.k));
    ys.push_back(e.distance_upper);
  }
  result.svg = line_chart_svg(xs, ys, "image-to-ball distance against k");
  return result;
}

// --- rhc --------------------------------------------------------------------

RunResult run_rhc(const json& params, std::uint64_t seed, RunResult result) {
  io::check_fields(params, {"n_set", "orbit", "r", "k_max", "s", "delta", "syndetic_bound"},
                   "parameters");
  io::require_present(params, {"r", "k_max", "s", "delta"}, "parameters");
  if (params.contains("n_set") == params.contains("orbit"))
    throw ValidationError("parameters: exactly one of n_set and orbit is required", {"parameters"});

  natset::WindowSet n_set(1, {});
  if (params.contains("n_set")) {
    auto parsed = io::parse_window_set(params["n_set"], seed, "parameters.n_set");
    if (!std::holds_alternative<natset::WindowSet>(parsed))
      throw ValidationError("parameters.n_set: big windows not supported here", {"parameters.n_set"});
    n_set = std::get<natset::WindowSet>(parsed);
  } else {
    const json& o = params["orbit"];
    io::check_fields(o, {"weight", "x", "ball", "n_max"}, "parameters.orbit");
    io::require_present(o, {"weight", "x", "ball", "n_max"}, "parameters.orbit");
    auto w = io::parse_weight_spec(o["weight"], "parameters.orbit.weight");
    auto x = io::parse_truncated_vector(o["x"], "parameters.orbit.x");
    auto ball = io::parse_ball(o["ball"], "parameters.orbit.ball");
    auto hits = recurrence::orbit_hit_set(w, x, {{"ball", ball}},
                                          io::parse_int(o["n_max"], "parameters.orbit.n_max"));
    n_set = hits.hit_sets.front().second;
  }

  int r = static_cast<int>(io::parse_int(params["r"], "parameters.r"));
  std::int64_t k_max = io::parse_int(params["k_max"], "parameters.k_max");
  std::int64_t s = io::parse_int(params["s"], "parameters.s");
  double delta = io::parse_double(params["delta"], "parameters.delta");
  std::int64_t bound = params.contains("syndetic_bound")
                           ? io::parse_int(params["syndetic_bound"], "parameters.syndetic_bound")
                           : 8;

  auto a_u = recurrence::progression_density_set(n_set, r, k_max, s, delta);
  result.report["n_set"] = io::to_json(n_set, 4096);
  result.report["a_u"] = io::to_json(a_u, 4096);
  result.report["a_u_gap"] = gap_to_json(natset::gap_profile<std::int64_t>(a_u, bound));
  return result;
}

} // namespace

RunResult run_experiment(const nlohmann::json& config, const std::string& default_name) {
  io::check_fields(config, {"kind", "parameters", "output", "seed", "name"}, "config");
  io::require_present(config, {"kind", "parameters"}, "config");

  RunResult result;
  result.name = config.contains("name") ? config["name"].get<std::string>() : default_name;
  result.output.formats = {"json"};
  if (config.contains("output")) {
    const json& o = config["output"];
    io::check_fields(o, {"formats", "dir"}, "config.output");
    if (o.contains("formats")) {
      result.output.formats.clear();
      for (const auto& f : o["formats"]) {
        const std::string s = f.get<std::string>();
        if (s != "json" && s != "csv" && s != "svg")
          throw ValidationError("config.output.formats: unknown format '" + s + "'",
                                {"config.output.formats"});
        result.output.formats.push_back(s);
      }
    }
    if (o.contains("dir")) result.output.dir = o["dir"].get<std::string>();
  }

  std::uint64_t seed = 0;
  if (config.contains("seed"))
    seed = static_cast<std::uint64_t>(io::parse_int(config["seed"], "config.seed"));

  const std::string kind = config["kind"].get<std::string>();
  result.report["metadata"] = {{"tool", "dynlab"},
                               {"version", "0.1.0"},
                               {"kind", kind},
                               {"name", result.name},
                               {"seed", seed}};

  const json& params = config["parameters"];
  if (!params.is_object())
    throw ValidationError("config.parameters: expected an object", {"config.parameters"});

  if (kind == "families") return run_families(params, seed, std::move(result));
  if (kind == "shift") return run_shift(params, seed, std::move(result));
  if (kind == "sobolev") return run_sobolev(params, std::move(result));
  if (kind == "qk") return run_qk(params, std::move(result));
  if (kind == "rhc") return run_rhc(params, seed, std::move(result));
  throw ValidationError("config.kind: unknown kind '" + kind + "'", {"config.kind"});
}

const std::map<std::string, nlohmann::json>& presets() {
  static const std::map<std::string, nlohmann::json> map = [] {
    std::map<std::string, nlohmann::json> m;
    m["families-knr-thick"] = nlohmann::json::parse(R"({
      "kind": "families",
      "parameters": {
        "set": {"kind": "knr", "nmax": 3},
        "thick": {"length": 4},
        "syndetic": {"bound": 8},
        "piecewise": {"gap": 1, "length": 4}
      }
    })");
    m["sobolev-knr-n1r0"] = nlohmann::json::parse(R"({
      "kind": "sobolev",
      "parameters": {"function": {"kind": "knr", "n": 1, "r": 0}}
    })");
    m["sobolev-knr-n1r1"] = nlohmann::json::parse(R"({
      "kind": "sobolev",
      "parameters": {"function": {"kind": "knr", "n": 1, "r": 1}}
    })");
    m["shift-step-criterion"] = nlohmann::json::parse(R"({
      "kind": "shift",
      "parameters": {
        "weight": {"side": "bilateral", "rule": {"kind": "step", "neg": 0.5, "pos": 2.0}},
        "criterion": {"j": 0, "d": 1, "M": 10.0, "m_max": 64}
      }
    })");
    m["shift-step-verdict"] = nlohmann::json::parse(R"({
      "kind": "shift",
      "parameters": {
        "weight": {"side": "bilateral", "rule": {"kind": "step", "neg": 0.5, "pos": 2.0}},
        "verdict": {"powers": [1, 2], "test": {"name": "syndetic", "bound": 256}, "m_max": 2048}
      }
    })");
    m["qk-separation-default"] = nlohmann::json::parse(R"({
      "kind": "qk",
      "parameters": {"level": 2, "basis_size": 256, "k_range": [1, 200],
                     "k_extra": [62, 63, 64, 65, 126, 127, 128]}
    })");
    m["rhc-multiples3"] = nlohmann::json::parse(R"({
      "kind": "rhc",
      "parameters": {
        "n_set": {"kind": "ap", "horizon": 2000, "start": 0, "step": 3},
        "r": 2, "k_max": 111, "s": 60, "delta": 0.1, "syndetic_bound": 3
      }
    })");
    return m;
  }();
  return map;
}

std::string catalog_text() {
  std::ostringstream os;
  os << "experiment kinds:\n"
     << "  families  window-set family checks (gaps, runs, density, stretches)\n"
     << "  qk        diagonal separation experiments on the dyadic tower set\n"
     << "  rhc       progression density pipeline on observed return sets\n"
     << "  shift     weight criterion sets, tuple verdicts, return sets\n"
     << "  sobolev   norm and bound-chain reports for piecewise functions\n";
  os << "set generators:\n"
     << "  ap        arithmetic progression {start + i*step}\n"
     << "  explicit  literal element list\n"
     << "  knr       the index family 2^(6^n) - r, 0 <= r <= n, n <= nmax\n"
     << "  random    density-p Bernoulli set, seeded\n";
  os << "weight families:\n"
     << "  constant  w_i = c\n"
     << "  explicit  listed values with a default tail\n"
     << "  periodic  repeating pattern\n"
     << "  step      one value for i <= 0, another for i > 0\n";
  os << "family tests:\n"
     << "  cofinite nonempty syndetic thick\n";
  os << "presets:\n";
  for (const auto& [name, cfg] : presets()) {
    (void)cfg;
    os << "  " << name << "\n";
  }
  return os.str();
}

std::string line_chart_svg(const std::vector<double>& xs, const std::vector<double>& ys,
                           const std::string& title) {
  const int width = 640, height = 360, margin = 40;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\">\n";
  os << "<text x=\"" << margin << "\" y=\"20\" font-size=\"12\">" << title << "</text>\n";
  if (!xs.empty() && xs.size() == ys.size()) {
    double xmin = xs.front(), xmax = xs.front(), ymin = ys.front(), ymax = ys.front();
    for (double x : xs) { xmin = std::min(xmin, x); xmax = std::max(xmax, x); }
    for (double y : ys) { ymin = std::min(ymin, y); ymax = std::max(ymax, y); }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double px = margin + (xs[i] - xmin) / (xmax - xmin) * (width - 2 * margin);
      double py = height - margin - (ys[i] - ymin) / (ymax - ymin) * (height - 2 * margin);
      os << fmt("%.6g", px) << "," << fmt("%.6g", py) << " ";
    }
    os << "\"/>\n";
    os << "<text x=\"" << margin << "\" y=\"" << height - 8 << "\" font-size=\"10\">x in ["
       << fmt("%.6g", xmin) << ", " << fmt("%.6g", xmax) << "], y in [" << fmt("%.6g", ymin)
       << ", " << fmt("%.6g", ymax) << "]</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

} // namespace dynlab::experiments
