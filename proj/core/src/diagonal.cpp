#include "dynlab/diagonal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace dynlab::diagonal {

namespace {

constexpr double kPi = std::numbers::pi;

unsigned long six_to(int n) {
  unsigned long e = 1;
  for (int i = 0; i < n; ++i) e *= 6;
  return e;
}

cplx unit_exp(double theta) { return {std::cos(theta), std::sin(theta)}; }

// e^{2 pi i reduced/modulus} with an exact shortcut at phase zero.
cplx phase_to_multiplier(const mpz_class& reduced, const mpz_class& modulus) {
  if (reduced == 0) return {1.0, 0.0};
  mpq_class q(reduced, modulus);
  q.canonicalize();
  return unit_exp(2.0 * kPi * q.get_d());
}

} // namespace

RationalAngle::RationalAngle(mpz_class numerator, int lvl) : num(std::move(numerator)), level(lvl) {
  if (level < 1) throw std::invalid_argument("RationalAngle: level must be >= 1");
  if (level > 3) throw std::invalid_argument("RationalAngle: level capped at 3");
  if (num < 0 || num >= modulus_of(level))
    throw std::invalid_argument("RationalAngle: numerator outside [0, 2^(6^level))");
}

mpz_class RationalAngle::modulus_of(int level) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, six_to(level));
  return r;
}

double RationalAngle::radians() const {
  mpq_class q(num, modulus());
  q.canonicalize();
  return 2.0 * kPi * q.get_d();
}

bool RationalAngle::same_angle(const RationalAngle& other) const {
  return num * other.modulus() == other.num * modulus();
}

std::vector<RationalAngle> enumerate_level(int level) {
  if (level < 1 || level > 3) throw std::invalid_argument("enumerate_level: level must be in [1, 3]");
  const unsigned long top = six_to(level);
  std::vector<RationalAngle> out;
  out.reserve(1u << level);
  for (std::uint32_t mask = 0; mask < (1u << level); ++mask) {
    mpz_class num = 0;
    for (int n = 1; n <= level; ++n) {
      if (mask & (1u << (n - 1))) {
        mpz_class term;
        mpz_ui_pow_ui(term.get_mpz_t(), 2, top - six_to(n));
        num += term;
      }
    }
    out.emplace_back(std::move(num), level);
  }
  std::sort(out.begin(), out.end(),
            [](const RationalAngle& l, const RationalAngle& r) { return l.num < r.num; });
  return out;
}

DiagonalSymbol DiagonalSymbol::power(mpz_class n) {
  if (n < 0) throw std::invalid_argument("DiagonalSymbol: parameter must be >= 0");
  return {Kind::power, std::move(n)};
}

DiagonalSymbol DiagonalSymbol::mixing_difference(mpz_class k) {
  if (k < 0) throw std::invalid_argument("DiagonalSymbol: parameter must be >= 0");
  return {Kind::mixing_difference, std::move(k)};
}

cplx symbol_multiplier(const DiagonalSymbol& s, const RationalAngle& t) {
  const mpz_class mod = t.modulus();
  if (s.kind == DiagonalSymbol::Kind::power) {
    mpz_class reduced = (s.parameter * t.num) % mod;
    return phase_to_multiplier(reduced, mod);
  }
  mpz_class r1 = (s.parameter * t.num) % mod;
  mpz_class r2 = (2 * s.parameter * t.num) % mod;
  return 2.0 * phase_to_multiplier(r1, mod) - phase_to_multiplier(r2, mod);
}

bool periodicity_check(const RationalAngle& t, const mpz_class& p) {
  if (p < 1) throw std::invalid_argument("periodicity_check: period must be >= 1");
  return (p * t.num) % t.modulus() == 0;
}

DualVector::DualVector(std::vector<RationalAngle> sup, std::vector<cplx> c)
    : support(std::move(sup)), coeffs(std::move(c)) {
  if (support.size() != coeffs.size())
    throw std::invalid_argument("DualVector: support/coefficient size mismatch");
  for (std::size_t i = 0; i < support.size(); ++i)
    for (std::size_t j = i + 1; j < support.size(); ++j)
      if (support[i].same_angle(support[j]))
        throw std::invalid_argument("DualVector: support points must be pairwise distinct");
}

DualVector apply_symbol(const DiagonalSymbol& s, const DualVector& v) {
  std::vector<cplx> out = v.coeffs;
  for (std::size_t i = 0; i < v.support.size(); ++i) {
    cplx mult = symbol_multiplier(s, v.support[i]);
    if (mult == cplx{1.0, 0.0}) continue; // exact fixed phase, keep bits
    out[i] *= mult;
  }
  return DualVector(v.support, std::move(out));
}

sobolev::GramGeometry level_gram(int level, int basis_size) {
  auto points = enumerate_level(level);
  std::vector<double> angles;
  angles.reserve(points.size());
  for (const auto& p : points) angles.push_back(p.radians());
  return sobolev::gram_matrix(angles, basis_size);
}

double dual_norm(std::span<const cplx> coeffs, const sobolev::GramGeometry& g) {
  if (coeffs.size() != g.points.size())
    throw std::invalid_argument("dual_norm: coefficient count does not match the geometry");
  Eigen::VectorXcd c(static_cast<Eigen::Index>(coeffs.size()));
  for (std::size_t i = 0; i < coeffs.size(); ++i) c(static_cast<Eigen::Index>(i)) = coeffs[i];
  // ||c||_G = ||factor c||, which stays accurate where the quadratic form
  // would cancel catastrophically.
  return (g.factor * c).norm();
}

double dual_norm(const DualVector& v, const sobolev::GramGeometry& g) {
  if (v.support.size() != g.points.size())
    throw std::invalid_argument("dual_norm: support does not match the geometry");
  for (std::size_t i = 0; i < v.support.size(); ++i)
    if (v.support[i].radians() != g.points[i])
      throw std::invalid_argument("dual_norm: support does not match the geometry");
  return dual_norm(std::span<const cplx>(v.coeffs), g);
}

const char* hit_label(HitClass c) {
  switch (c) {
    case HitClass::hit: return "hit";
    case HitClass::miss: return "miss";
    default: return "undecided";
  }
}

namespace {

struct BallProblem {
  Eigen::MatrixXcd m; // objective ||M y + b|| over ||y|| <= r
  Eigen::VectorXcd b;
  double r = 0.0;
};

struct BallSolution {
  double upper = 0.0;
  double lower = 0.0;
  int iterations = 0;
  bool converged = false;
};

// min ||M y + b|| over the Euclidean ball of radius r, solved through the
// KKT system: (M^H M + lambda I) y = -M^H b with lambda >= 0 active only
// on the boundary. In the eigenbasis of M^H M the multiplier reduces to a
// one-dimensional secular equation, solved by bisection; the whole
// procedure is deterministic and runs to machine precision even when M is
// severely non-normal, which it is whenever the underlying geometry holds
// near-coincident points. The lower bound is the subgradient certificate
// at the computed point and stays valid for any iterate.
BallSolution minimize_over_ball(const BallProblem& p, int max_iterations, double tol) {
  BallSolution sol;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(p.m.adjoint() * p.m);
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  const Eigen::MatrixXcd v = es.eigenvectors();
  const Eigen::VectorXcd g = v.adjoint() * (p.m.adjoint() * p.b);

  auto radius_at = [&](double mu) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      const double denom = lam(i) + mu;
      if (denom > 0.0) acc += std::norm(g(i)) / (denom * denom);
    }
    return std::sqrt(acc);
  };

  double mu = 0.0;
  int iters = 0;
  if (radius_at(0.0) > p.r) {
    double lo = 0.0;
    double hi = std::max(1e-300, (p.m.adjoint() * p.b).norm() / p.r);
    while (radius_at(hi) > p.r) hi *= 2.0; // safety, rarely taken
    for (; iters < max_iterations; ++iters) {
      mu = 0.5 * (lo + hi);
      if (radius_at(mu) > p.r) lo = mu; else hi = mu;
      if (hi - lo <= tol * std::max(1.0, hi)) break;
    }
    mu = hi; // feasible side
  }
  sol.iterations = iters;
  sol.converged = true;

  Eigen::VectorXcd w(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    const double denom = lam(i) + mu;
    w(i) = denom > 0.0 ? -g(i) / denom : cplx{0.0, 0.0};
  }
  Eigen::VectorXcd y = v * w;
  if (y.norm() > p.r) y *= p.r / y.norm();

  Eigen::VectorXcd res = p.m * y + p.b;
  sol.upper = res.norm();
  if (sol.upper == 0.0) {
    sol.lower = 0.0;
    return sol;
  }
  Eigen::VectorXcd sub = p.m.adjoint() * res / sol.upper;
  const double lb = sol.upper - sub.dot(y).real() - p.r * sub.norm();
  sol.lower = std::max(0.0, std::min(lb, sol.upper));
  return sol;
}

} // namespace

SeparationReport separation_experiment(const SeparationConfig& cfg) {
  const auto support = enumerate_level(cfg.level);
  const std::size_t n = support.size();
  if (cfg.u.center.size() != n || cfg.v.center.size() != n)
    throw std::invalid_argument("separation_experiment: ball centers must match the level support size");
  if (cfg.u.radius <= 0.0 || cfg.v.radius <= 0.0)
    throw std::invalid_argument("separation_experiment: radii must be positive");

  std::vector<std::int64_t> ks = cfg.k_values;
  if (ks.empty()) for (std::int64_t k = 1; k <= 200; ++k) ks.push_back(k);
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  if (ks.front() < 0) throw std::invalid_argument("separation_experiment: k values must be >= 0");

  sobolev::GramGeometry geom = level_gram(cfg.level, cfg.basis_size);
  if (!(sobolev::gram_min_eigenvalue(geom) > 0.0))
    throw std::runtime_error("separation_experiment: Gram matrix is not positive definite");
  const Eigen::MatrixXcd& lt = geom.factor; // ||x||_G = ||lt x||
  Eigen::MatrixXcd lt_inv =
      lt.triangularView<Eigen::Upper>().solve(Eigen::MatrixXcd::Identity(lt.rows(), lt.cols()));

  Eigen::VectorXcd cu(static_cast<Eigen::Index>(n)), cv(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    cu(static_cast<Eigen::Index>(i)) = cfg.u.center[i];
    cv(static_cast<Eigen::Index>(i)) = cfg.v.center[i];
  }

  SeparationReport rep{.entries = {},
                       .hit_set = natset::WindowSet(ks.back() + 1, {}),
                       .hit_gap = {},
                       .miss_thick = natset::FamilyVerdict<std::int64_t>::pass(),
                       .undecided = 0};
  std::vector<std::int64_t> hits, misses;

  for (std::int64_t k : ks) {
    DiagonalSymbol sym = DiagonalSymbol::mixing_difference(mpz_class(static_cast<long>(k)));
    Eigen::VectorXcd d(static_cast<Eigen::Index>(n));
    double spread = 0.0;
    std::vector<cplx> dvals;
    for (std::size_t i = 0; i < n; ++i) {
      cplx m = symbol_multiplier(sym, support[i]);
      d(static_cast<Eigen::Index>(i)) = m;
      dvals.push_back(m);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        spread = std::max(spread, std::abs(dvals[i] - dvals[j]));

    BallProblem prob;
    prob.m = lt * d.asDiagonal() * lt_inv;
    prob.b = lt * (d.asDiagonal() * cu - cv);
    prob.r = cfg.u.radius;
    BallSolution sol = minimize_over_ball(prob, cfg.max_iterations, cfg.gradient_tol);

    SeparationEntry e;
    e.k = k;
    e.distance_upper = sol.upper;
    e.distance_lower = sol.lower;
    e.iterations = sol.iterations;
    e.converged = sol.converged;
    e.symbol_spread = spread;
    if (!sol.converged) {
      e.cls = HitClass::undecided;
    } else if (sol.upper < cfg.v.radius) {
      e.cls = HitClass::hit;
    } else if (sol.lower >= cfg.v.radius) {
      e.cls = HitClass::miss;
    } else {
      e.cls = HitClass::undecided;
    }
    if (e.cls == HitClass::hit) hits.push_back(k);
    if (e.cls == HitClass::miss) misses.push_back(k);
    if (e.cls == HitClass::undecided) ++rep.undecided;
    rep.entries.push_back(e);
  }

  rep.hit_set = natset::WindowSet(ks.back() + 1, hits);
  rep.hit_gap = natset::gap_profile<std::int64_t>(rep.hit_set, cfg.syndetic_bound);
  natset::WindowSet miss_set(ks.back() + 1, misses);
  if (cfg.thick_length < miss_set.horizon()) {
    rep.miss_thick = natset::thick_witness<std::int64_t>(miss_set, cfg.thick_length);
  }
  return rep;
}

natset::FamilyVerdict<std::int64_t> ball_shrink_check(const DualVector& x, double radius,
                                                      int samples,
                                                      const sobolev::GramGeometry& g,
                                                      std::uint64_t seed) {
  using V = natset::FamilyVerdict<std::int64_t>;
  if (radius <= 0.0) throw std::invalid_argument("ball_shrink_check: radius must be positive");
  if (samples < 1) throw std::invalid_argument("ball_shrink_check: need at least one sample");
  if (x.support.size() != g.points.size())
    throw std::invalid_argument("ball_shrink_check: support does not match the geometry");

  const auto n = static_cast<Eigen::Index>(x.support.size());
  if (!(sobolev::gram_min_eigenvalue(g) > 0.0))
    throw std::runtime_error("ball_shrink_check: Gram matrix is not positive definite");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // Offsets are drawn in coefficient space and rescaled to the wanted Gram
  // radius; every eighth sample sits exactly on the boundary sphere.
  auto draw_offset = [&](bool boundary) {
    Eigen::VectorXcd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = cplx{gauss(rng), gauss(rng)};
    std::vector<cplx> zc(z.data(), z.data() + z.size());
    const double zn = dual_norm(std::span<const cplx>(zc), g);
    if (zn == 0.0) return Eigen::VectorXcd(Eigen::VectorXcd::Zero(n));
    const double rho = boundary ? radius / 3.0 : (radius / 3.0) * unif(rng);
    return Eigen::VectorXcd(z * (rho / zn));
  };

  for (int s = 0; s < samples; ++s) {
    const bool boundary = (s % 8 == 0);
    Eigen::VectorXcd a1 = draw_offset(boundary);
    Eigen::VectorXcd a2 = draw_offset(boundary);
    // 2u - v - x = 2 a1 - a2 in coefficient space
    Eigen::VectorXcd w = 2.0 * a1 - a2;
    std::vector<cplx> wc(w.data(), w.data() + w.size());
    const double norm = dual_norm(std::span<const cplx>(wc), g);
    if (norm > radius * (1.0 + 1e-9)) {
      V out = V::fail_at(s, "combination left the target ball");
      return out;
    }
  }
  return V::pass();
}

} // namespace dynlab::diagonal
