#include "dynlab/shiftlab.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dynlab::shiftlab {

namespace {

void require_finite_nonzero(double v, const char* what) {
  if (!std::isfinite(v) || v == 0.0)
    throw std::invalid_argument(std::string("WeightSpec: ") + what + " must be finite and nonzero");
}

} // namespace

WeightSpec::WeightSpec(Side side, Rule rule) : side_(side), rule_(std::move(rule)) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  auto feed = [&](double v, const char* what) {
    require_finite_nonzero(v, what);
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  };
  if (const auto* c = std::get_if<ConstantRule>(&rule_)) {
    feed(c->value, "constant value");
  } else if (const auto* s = std::get_if<StepRule>(&rule_)) {
    feed(s->neg, "step neg value");
    feed(s->pos, "step pos value");
  } else if (const auto* p = std::get_if<PeriodicRule>(&rule_)) {
    if (p->pattern.empty()) throw std::invalid_argument("WeightSpec: empty periodic pattern");
    for (double v : p->pattern) feed(v, "pattern entry");
  } else if (const auto* e = std::get_if<ExplicitRule>(&rule_)) {
    for (double v : e->values) feed(v, "explicit entry");
    feed(e->tail, "tail value");
  }
  min_abs_ = lo;
  max_abs_ = hi;
}

double WeightSpec::at(std::int64_t i) const {
  if (side_ == Side::unilateral && i < 1)
    throw std::domain_error("WeightSpec: index out of domain");
  if (const auto* c = std::get_if<ConstantRule>(&rule_)) return c->value;
  if (const auto* s = std::get_if<StepRule>(&rule_)) return i <= 0 ? s->neg : s->pos;
  if (const auto* p = std::get_if<PeriodicRule>(&rule_)) {
    const auto len = static_cast<std::int64_t>(p->pattern.size());
    std::int64_t idx = ((i % len) + len) % len;
    return p->pattern[static_cast<std::size_t>(idx)];
  }
  const auto& e = std::get<ExplicitRule>(rule_);
  std::int64_t off = i - e.first_index;
  if (off >= 0 && off < static_cast<std::int64_t>(e.values.size()))
    return e.values[static_cast<std::size_t>(off)];
  return e.tail;
}

double WeightSpec::log_abs_at(std::int64_t i) const { return std::log(std::abs(at(i))); }

double weight_log_product(const WeightSpec& w, std::int64_t j, std::int64_t L, Direction dir) {
  if (L < 1) throw std::invalid_argument("weight_product: L must be >= 1");
  if (dir == Direction::backward && w.side() == Side::unilateral && j - L + 1 < 1)
    throw std::domain_error("weight_product: index out of domain");
  double sum = 0.0;
  if (dir == Direction::forward) {
    for (std::int64_t i = j + 1; i <= j + L; ++i) sum += w.log_abs_at(i);
  } else {
    for (std::int64_t i = j - L + 1; i <= j; ++i) sum += w.log_abs_at(i);
  }
  return sum;
}

double weight_product(const WeightSpec& w, std::int64_t j, std::int64_t L, Direction dir) {
  return std::exp(weight_log_product(w, j, L, dir));
}

CriterionSets criterion_sets(const WeightSpec& w, std::int64_t j, std::int64_t d,
                             double threshold, std::int64_t m_max) {
  if (d < 1) throw std::invalid_argument("criterion_sets: d must be >= 1");
  if (threshold <= 0.0) throw std::invalid_argument("criterion_sets: threshold must be positive");
  if (m_max < 1) throw std::invalid_argument("criterion_sets: m_max must be >= 1");
  if (w.side() == Side::unilateral && j < 0)
    throw std::domain_error("criterion_sets: unilateral probe must be >= 0");

  const double log_m = std::log(threshold);
  CriterionSets out;
  std::vector<std::int64_t> fwd, bwd;

  double fsum = 0.0;
  for (std::int64_t m = 1; m <= m_max; ++m) {
    for (std::int64_t i = j + (m - 1) * d + 1; i <= j + m * d; ++i) fsum += w.log_abs_at(i);
    bool pass = fsum > log_m + kLogSlack;
    out.forward_points.push_back({m, fsum, pass});
    if (pass) fwd.push_back(m);
  }
  out.forward = natset::WindowSet(m_max + 1, std::move(fwd));

  if (w.side() == Side::bilateral) {
    double bsum = 0.0;
    for (std::int64_t m = 1; m <= m_max; ++m) {
      for (std::int64_t i = j - m * d + 1; i <= j - (m - 1) * d; ++i) bsum += w.log_abs_at(i);
      bool pass = -bsum > log_m + kLogSlack; // 1/prod > M
      out.backward_points.push_back({m, -bsum, pass});
      if (pass) bwd.push_back(m);
    }
    out.backward = natset::WindowSet(m_max + 1, std::move(bwd));
  }
  return out;
}

natset::FamilyVerdict<std::int64_t> apply_family_test(const natset::WindowSet& s,
                                                      const WindowFamilyTest& test) {
  using V = natset::FamilyVerdict<std::int64_t>;
  const std::int64_t top = s.horizon() - 1;
  if (test.name == "nonempty") {
    if (!s.empty()) return V::pass_at(s.elements().front());
    return V::fail_at(0, "empty on window");
  }
  if (test.name == "cofinite") {
    // A final run [m0, top] must be present; report its start.
    if (!s.contains(top)) return V::fail_at(top, "window endpoint missing");
    const auto& e = s.elements();
    std::size_t i = e.size() - 1;
    while (i > 0 && e[i - 1] + 1 == e[i]) --i;
    return V::pass_at(e[i], "tail run start");
  }
  if (test.name == "syndetic") {
    return natset::gap_profile<std::int64_t>(s, test.bound).verdict;
  }
  if (test.name == "thick") {
    return natset::thick_witness<std::int64_t>(s, test.length);
  }
  throw std::invalid_argument("apply_family_test: unknown family test '" + test.name + "'");
}

std::vector<std::int64_t> default_probes(Side side) {
  std::vector<std::int64_t> out;
  for (std::int64_t j = (side == Side::bilateral ? -8 : 0); j <= 8; ++j) out.push_back(j);
  return out;
}

std::vector<double> default_threshold_grid() {
  std::vector<double> out;
  for (int t = -2; t <= 6; ++t) out.push_back(std::pow(10.0, t));
  return out;
}

natset::FamilyVerdict<std::int64_t> disjoint_family_verdict(const WeightSpec& w,
                                                            const DisjointVerdictConfig& cfg) {
  using V = natset::FamilyVerdict<std::int64_t>;
  if (cfg.powers.empty()) throw std::invalid_argument("disjoint_family_verdict: empty power tuple");
  for (std::size_t i = 0; i < cfg.powers.size(); ++i) {
    if (cfg.powers[i] < 1 || (i > 0 && cfg.powers[i] <= cfg.powers[i - 1]))
      throw std::invalid_argument("disjoint_family_verdict: powers must be strictly increasing and >= 1");
  }

  // Pair differences r_l - r_s over 0 = r_0 < r_1 < ... < r_N.
  std::vector<std::int64_t> rs(cfg.powers.size() + 1, 0);
  std::copy(cfg.powers.begin(), cfg.powers.end(), rs.begin() + 1);
  std::vector<std::int64_t> diffs;
  for (std::size_t s = 0; s < rs.size(); ++s)
    for (std::size_t l = s + 1; l < rs.size(); ++l) diffs.push_back(rs[l] - rs[s]);
  std::sort(diffs.begin(), diffs.end());
  diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());

  const auto probes = cfg.probes.empty() ? default_probes(w.side()) : cfg.probes;
  const auto grid = cfg.thresholds.empty() ? default_threshold_grid() : cfg.thresholds;

  for (std::int64_t j : probes) {
    for (double m_thr : grid) {
      for (std::int64_t d : diffs) {
        CriterionSets sets = criterion_sets(w, j, d, m_thr, cfg.m_max);
        auto fv = apply_family_test(sets.forward, cfg.test);
        if (!fv.holds) {
          std::ostringstream os;
          os << "forward criterion fails test '" << cfg.test.name << "' at j=" << j
             << " M=" << m_thr << " d=" << d;
          V out = V::fail_at(fv.witness.value_or(0), os.str());
          out.witness_extent = fv.witness_extent;
          return out;
        }
        if (sets.backward) {
          auto bv = apply_family_test(*sets.backward, cfg.test);
          if (!bv.holds) {
            std::ostringstream os;
            os << "backward criterion fails test '" << cfg.test.name << "' at j=" << j
               << " M=" << m_thr << " d=" << d;
            V out = V::fail_at(bv.witness.value_or(0), os.str());
            out.witness_extent = bv.witness_extent;
            return out;
          }
        }
      }
    }
  }
  return V::pass();
}

// --- truncated vectors ----------------------------------------------------

TruncatedVector TruncatedVector::basis(std::int64_t k, std::int64_t lo, std::int64_t hi) {
  if (k < lo || k > hi) throw std::invalid_argument("TruncatedVector::basis: index outside range");
  TruncatedVector v;
  v.lo = lo;
  v.coeffs.assign(static_cast<std::size_t>(hi - lo + 1), {0.0, 0.0});
  v.coeffs[static_cast<std::size_t>(k - lo)] = {1.0, 0.0};
  return v;
}

std::vector<std::int64_t> TruncatedVector::support() const {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != cplx{0.0, 0.0}) out.push_back(lo + static_cast<std::int64_t>(i));
  return out;
}

double vector_norm(const TruncatedVector& v, NormKind kind, double p) {
  if (kind == NormKind::sup) {
    double m = 0.0;
    for (const cplx& c : v.coeffs) m = std::max(m, std::abs(c));
    return m;
  }
  if (p < 1.0) throw std::invalid_argument("vector_norm: p must be >= 1");
  double acc = 0.0;
  for (const cplx& c : v.coeffs) acc += std::pow(std::abs(c), p);
  return std::pow(acc, 1.0 / p);
}

bool ball_contains(const BallSpec& ball, const TruncatedVector& v) {
  std::int64_t lo = std::min(ball.center.lo, v.lo);
  std::int64_t hi = std::max(ball.center.hi(), v.hi());
  TruncatedVector diff;
  diff.lo = lo;
  diff.coeffs.assign(static_cast<std::size_t>(hi - lo + 1), {0.0, 0.0});
  for (std::int64_t i = lo; i <= hi; ++i)
    diff.coeffs[static_cast<std::size_t>(i - lo)] = v.at(i) - ball.center.at(i);
  return vector_norm(diff, ball.norm, ball.p) <= ball.radius;
}

std::vector<TruncatedVector> shift_orbit(const WeightSpec& w, const TruncatedVector& x,
                                         std::int64_t steps) {
  if (steps < 0) throw std::invalid_argument("shift_orbit: steps must be >= 0");
  if (w.side() == Side::unilateral && x.lo < 0)
    throw std::invalid_argument("shift_orbit: unilateral vectors live on indices >= 0");
  std::vector<TruncatedVector> orbit;
  orbit.reserve(static_cast<std::size_t>(steps) + 1);
  orbit.push_back(x);
  TruncatedVector cur = x;
  for (std::int64_t n = 0; n < steps; ++n) {
    const bool mass_at_edge = !cur.coeffs.empty() && cur.coeffs.front() != cplx{0.0, 0.0};
    const bool edge_escapes = w.side() == Side::bilateral || cur.lo > 0;
    if (mass_at_edge && edge_escapes)
      throw std::runtime_error("shift_orbit: truncation leakage");
    TruncatedVector next;
    next.lo = cur.lo;
    next.coeffs.assign(cur.coeffs.size(), {0.0, 0.0});
    for (std::int64_t jj = cur.lo; jj <= cur.hi(); ++jj) {
      cplx src = cur.at(jj + 1);
      if (src == cplx{0.0, 0.0}) continue;
      next.coeffs[static_cast<std::size_t>(jj - cur.lo)] = w.at(jj + 1) * src;
    }
    orbit.push_back(next);
    cur = std::move(next);
  }
  return orbit;
}

// --- return sets of sup-norm balls -----------------------------------------

namespace {

// Prefix sums of log|w| and sign flips over a contiguous index range.
class ProductTable {
public:
  ProductTable(const WeightSpec& w, std::int64_t lo, std::int64_t hi) : lo_(lo) {
    if (hi < lo) hi = lo;
    logs_.assign(static_cast<std::size_t>(hi - lo + 2), 0.0);
    negs_.assign(static_cast<std::size_t>(hi - lo + 2), 0);
    for (std::int64_t i = lo; i <= hi; ++i) {
      double v = w.at(i);
      logs_[idx(i) + 1] = logs_[idx(i)] + std::log(std::abs(v));
      negs_[idx(i) + 1] = negs_[idx(i)] + (v < 0.0 ? 1 : 0);
    }
  }

  // log |prod_{(a, b]} w_i| and the sign of the product.
  double log_abs(std::int64_t a, std::int64_t b) const { return logs_[idx(b) + 1] - logs_[idx(a) + 1]; }
  double sign(std::int64_t a, std::int64_t b) const {
    return ((negs_[idx(b) + 1] - negs_[idx(a) + 1]) % 2 == 0) ? 1.0 : -1.0;
  }

private:
  std::size_t idx(std::int64_t i) const { return static_cast<std::size_t>(i - lo_); }
  std::int64_t lo_;
  std::vector<double> logs_;
  std::vector<int> negs_;
};

// Can some u with |u - cu| <= rU satisfy |s*u - cv| <= rV, where
// s = sign * exp(logA)? Compared after scaling by the larger magnitude so
// that huge or vanishing products never overflow.
bool coordinate_feasible(cplx cu, cplx cv, double log_a, double sign, double r_u, double r_v) {
  if (log_a >= 0.0) {
    double t = std::exp(-log_a); // may underflow to 0; the limit is exact
    return std::abs(sign * cu - cv * t) <= r_u + r_v * t + 1e-15 * (1.0 + r_u);
  }
  double t = std::exp(log_a);
  return std::abs(sign * cu * t - cv) <= r_u * t + r_v + 1e-15 * (1.0 + r_v);
}

} // namespace

natset::WindowSet direct_return_set(const WeightSpec& w, const BallSpec& u,
                                    const BallSpec& v, std::int64_t n_max) {
  if (n_max < 0) throw std::invalid_argument("direct_return_set: n_max must be >= 0");
  if (u.norm != NormKind::sup || v.norm != NormKind::sup)
    throw std::invalid_argument("direct_return_set: only sup-norm balls are supported");
  if (u.radius <= 0.0 || v.radius <= 0.0)
    throw std::invalid_argument("direct_return_set: radii must be positive");

  const auto supp_u = u.center.support();
  const auto supp_v = v.center.support();
  if (w.side() == Side::unilateral) {
    if ((!supp_u.empty() && supp_u.front() < 0) || (!supp_v.empty() && supp_v.front() < 0))
      throw std::invalid_argument("direct_return_set: unilateral supports must be >= 0");
  }

  // Coordinates that can carry a constraint: the support of v's center and
  // the shifted support of u's center. Everything else is trivially feasible.
  std::int64_t min_j = 0, max_j = 0;
  {
    std::vector<std::int64_t> exts;
    for (std::int64_t s : supp_v) exts.push_back(s);
    for (std::int64_t s : supp_u) { exts.push_back(s - n_max); exts.push_back(s); }
    if (exts.empty()) return natset::WindowSet::full(n_max + 1); // both balls centered at 0
    min_j = *std::min_element(exts.begin(), exts.end());
    max_j = *std::max_element(exts.begin(), exts.end());
  }
  std::int64_t w_lo = min_j;
  std::int64_t w_hi = max_j + n_max;
  if (w.side() == Side::unilateral) w_lo = std::max<std::int64_t>(w_lo, 0);
  ProductTable table(w, w_lo + 1, w_hi);

  std::vector<std::int64_t> hits;
  for (std::int64_t n = 0; n <= n_max; ++n) {
    bool ok = true;
    auto check = [&](std::int64_t j) {
      if (!ok) return;
      if (w.side() == Side::unilateral && j < 0) return; // coordinate does not exist
      cplx cu = u.center.at(j + n);
      cplx cv = v.center.at(j);
      if (cu == cplx{0.0, 0.0} && cv == cplx{0.0, 0.0}) return;
      double log_a = n == 0 ? 0.0 : table.log_abs(j, j + n);
      double sg = n == 0 ? 1.0 : table.sign(j, j + n);
      if (!coordinate_feasible(cu, cv, log_a, sg, u.radius, v.radius)) ok = false;
    };
    for (std::int64_t s : supp_v) check(s);
    for (std::int64_t s : supp_u) check(s - n);
    if (ok) hits.push_back(n);
  }
  return natset::WindowSet(n_max + 1, std::move(hits));
}

} // namespace dynlab::shiftlab
