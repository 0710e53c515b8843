#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "dynlab/sobolev.hpp"
#include "quad_oracle.hpp"

using namespace dynlab::sobolev;
constexpr double kPi = std::numbers::pi;

namespace {

PiecewiseAnalytic single_trig(std::vector<std::pair<int, cplx>> terms) {
  return PiecewiseAnalytic::over_interval({Piece{-kPi, kPi, TrigPoly(std::move(terms))}});
}

// random C1 pair: a trig polynomial on the left, the matching cubic on the
// right with random far-end data
PiecewiseAnalytic random_c1_pair(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::vector<std::pair<int, cplx>> terms;
  int nterms = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < nterms; ++i)
    terms.emplace_back(static_cast<int>(rng() % 7) - 3, cplx{val(rng), val(rng)});
  TrigPoly left(terms);
  const double cut = -kPi + (2.0 * kPi) * (0.3 + 0.4 * std::uniform_real_distribution<>(0, 1)(rng));
  HermiteData d;
  d.alpha = cut;
  d.beta = kPi;
  d.a0 = left.eval(cut);
  d.a1 = left.derivative().eval(cut);
  d.b0 = {val(rng), val(rng)};
  d.b1 = {val(rng), val(rng)};
  auto bridge = hermite_min_curvature(d);
  return PiecewiseAnalytic::over_interval(
      {Piece{-kPi, cut, left}, bridge.cubic.pieces().front()});
}

} // namespace

TEST_CASE("payload evaluation and derivatives") {
  TrigPoly t({{1, cplx{1.0, 0.0}}, {3, cplx{0.0, 2.0}}});
  // derivative against a central difference
  const double h = 1e-6;
  auto d = t.derivative();
  for (double x : {-2.0, 0.3, 1.7}) {
    cplx fd = (t.eval(x + h) - t.eval(x - h)) / (2.0 * h);
    CHECK(std::abs(d.eval(x) - fd) < 1e-7);
  }

  Poly p(0.5, {cplx{1, 0}, cplx{2, 0}, cplx{0, 1}, cplx{3, 0}});
  auto pd = p.derivative();
  for (double x : {0.1, 0.5, 0.9}) {
    cplx fd = (p.eval(x + h) - p.eval(x - h)) / (2.0 * h);
    CHECK(std::abs(pd.eval(x) - fd) < 1e-6);
  }
  CHECK_THROWS_AS(Poly(0.0, std::vector<cplx>(7, cplx{1, 0})), std::invalid_argument);
}

TEST_CASE("w22_norm_sq closed forms") {
  // single oscillation: each of |f|^2, |f'|^2, |f''|^2 integrates to 2 pi
  auto f = single_trig({{1, cplx{1.0, 0.0}}});
  CHECK(w22_norm_sq(f) == doctest::Approx(6.0 * kPi).epsilon(1e-12));

  auto one = single_trig({{0, cplx{1.0, 0.0}}});
  CHECK(w22_norm_sq(one) == doctest::Approx(2.0 * kPi).epsilon(1e-12));

  // 2 e^{ikx} - e^{2ikx}: norms have the exact closed form
  // 10 pi + 16 pi k^2 + 40 pi k^4
  const std::int64_t k = 63;
  auto hk = mixing_difference_function(k);
  const double analytic = 10.0 * kPi + 16.0 * kPi * double(k) * double(k) +
                          40.0 * kPi * std::pow(double(k), 4);
  CHECK(w22_norm_sq(hk) == doctest::Approx(analytic).epsilon(1e-12));
  CHECK(w22_norm_sq(hk) == doctest::Approx(oracle::w22_quadrature(hk)).epsilon(1e-9));
}

TEST_CASE("w22_norm_sq rejects junction jumps") {
  TrigPoly a({{0, cplx{0.0, 0.0}}});
  TrigPoly b({{0, cplx{1.0, 0.0}}});
  auto broken = PiecewiseAnalytic::over_interval({Piece{-kPi, 0.0, a}, Piece{0.0, kPi, b}});
  CHECK_THROWS_WITH_AS(w22_norm_sq(broken), doctest::Contains("not C1"), std::runtime_error);
}

TEST_CASE("closed form matches quadrature on random C1 pieces") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    auto f = random_c1_pair(rng);
    const double closed = w22_norm_sq(f);
    const double quad = oracle::w22_quadrature(f);
    CHECK(closed == doctest::Approx(quad).epsilon(1e-8));
  }
}

TEST_CASE("sup_norm_bound") {
  // |2 e^{ikx} - e^{2ikx}| attains 3; the bracket must straddle it
  auto hk = mixing_difference_function(63);
  auto b = sup_norm_bound(hk);
  CHECK(b.lower <= 3.0);
  CHECK(b.upper >= 3.0);
  CHECK(b.lower > 2.999);
  CHECK(b.upper < 3.1);

  auto one = single_trig({{0, cplx{1.0, 0.0}}});
  auto b1 = sup_norm_bound(one);
  CHECK(b1.lower == doctest::Approx(1.0));
  CHECK(b1.upper == doctest::Approx(1.0));

  // cubic on a short interval against a dense-scan oracle
  Poly cubic(0.0, {cplx{0.3, 0}, cplx{-1.0, 0}, cplx{0.2, 0}, cplx{2.0, 0}});
  auto fc = PiecewiseAnalytic::over_interval({Piece{0.0, 0.75, cubic}});
  auto bc = sup_norm_bound(fc);
  double scan = 0.0;
  for (int i = 0; i <= 2000000; ++i) scan = std::max(scan, std::abs(cubic.eval(0.75 * i / 2000000.0)));
  CHECK(bc.lower <= scan + 1e-12);
  CHECK(bc.upper >= scan - 1e-12);
}

TEST_CASE("hermite_min_curvature") {
  // constant data: the constant itself, zero energy
  auto flat = hermite_min_curvature({0.0, 2.0, cplx{1, 1}, cplx{0, 0}, cplx{1, 1}, cplx{0, 0}});
  CHECK(flat.energy == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(flat.energy <= flat.energy_bound);
  CHECK(std::abs(flat.cubic.eval(1.3) - cplx{1, 1}) < 1e-12);

  // the classical smoothstep: 3x^2 - 2x^3 with curvature energy 12
  auto smooth = hermite_min_curvature({0.0, 1.0, cplx{0, 0}, cplx{0, 0}, cplx{1, 0}, cplx{0, 0}});
  CHECK(std::abs(smooth.cubic.eval(0.5) - cplx{0.5, 0}) < 1e-12);
  CHECK(smooth.energy == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(smooth.energy <= smooth.energy_bound);
  CHECK(smooth.energy_bound == doctest::Approx(24.0).epsilon(1e-12));
  // the exact energy agrees with the piece integral of |f''|^2
  CHECK(smooth.energy ==
        doctest::Approx(piece_l2_sq(smooth.cubic.pieces().front(), 2)).epsilon(1e-12));

  CHECK_THROWS_AS(hermite_min_curvature({1.0, 1.0, {}, {}, {}, {}}), std::invalid_argument);
}

TEST_CASE("hermite energy bound holds over random data") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> pos(0.01, 4.0);
  std::normal_distribution<double> gauss(0.0, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    HermiteData d;
    d.alpha = gauss(rng);
    d.beta = d.alpha + pos(rng);
    d.a0 = {gauss(rng), gauss(rng)};
    d.a1 = {gauss(rng), gauss(rng)};
    d.b0 = {gauss(rng), gauss(rng)};
    d.b1 = {gauss(rng), gauss(rng)};
    auto res = hermite_min_curvature(d);
    CHECK(res.energy <= res.energy_bound * (1.0 + 1e-12));
  }
}

TEST_CASE("cubic minimises curvature among C2 interpolants") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    HermiteData d;
    d.alpha = 0.0;
    d.beta = 1.0 + std::uniform_real_distribution<>(0, 2)(rng);
    d.a0 = {gauss(rng), gauss(rng)};
    d.a1 = {gauss(rng), gauss(rng)};
    d.b0 = {gauss(rng), gauss(rng)};
    d.b1 = {gauss(rng), gauss(rng)};
    auto res = hermite_min_curvature(d);
    const auto& cubic = std::get<Poly>(res.cubic.pieces().front().payload);

    // bump (u (h-u))^2 vanishes with its derivative at both ends
    const double h = d.beta - d.alpha;
    const cplx c{gauss(rng), gauss(rng)};
    std::vector<cplx> bump{cplx{0, 0}, cplx{0, 0}, c * (h * h), c * (-2.0 * h), c};
    std::vector<cplx> sum(5, cplx{0, 0});
    for (std::size_t i = 0; i < cubic.coef().size(); ++i) sum[i] = cubic.coef()[i];
    for (std::size_t i = 0; i < 5; ++i) sum[i] += bump[i];
    Piece perturbed{d.alpha, d.beta, Poly(d.alpha, sum)};
    CHECK(piece_l2_sq(perturbed, 2) >= res.energy - 1e-10);
  }
}

TEST_CASE("periodic test function bound chain at level 1") {
  for (int r : {0, 1}) {
    auto rep = build_knr_function(1, r);
    CHECK(rep.k == 64 - r);
    CHECK(rep.sup.upper <= 9.0);
    CHECK(rep.second_sq <= 1104.0);
    CHECK(std::sqrt(rep.w22_sq) < 64.0);
    CHECK(rep.bridge_energy <= rep.bridge_energy_bound);
    CHECK(rep.chain_ok());

    // the sup of the function sits near 1, far inside the certified 9
    CHECK(rep.sup.lower > 0.9);
    CHECK(rep.sup.upper < 1.5);

    // periodicity: the cell translate reproduces values to 1e-10
    std::mt19937_64 rng(5 + r);
    for (int i = 0; i < 200; ++i) {
      double x = -kPi + 2.0 * kPi * std::uniform_real_distribution<>(0, 1)(rng);
      CHECK(std::abs(rep.f.eval(x) - rep.f.eval(x + 2.0 * kPi / 64.0)) < 1e-10);
    }

    // one period cell aggregates to the full interval by periodicity
    CHECK(rep.second_sq == doctest::Approx(64.0 * rep.cell_second_sq).epsilon(1e-15));
    double cell_direct = 0.0;
    for (const auto& piece : rep.f.pieces()) cell_direct += piece_l2_sq(piece, 2);
    CHECK(rep.cell_second_sq == doctest::Approx(cell_direct).epsilon(1e-15));

    // closed form against the quadrature oracle
    CHECK(rep.w22_sq == doctest::Approx(oracle::w22_quadrature(rep.f)).epsilon(1e-8));
    CHECK(rep.second_sq == doctest::Approx(oracle::second_sq_quadrature(rep.f)).epsilon(1e-8));

    // the norm bound margin holds with room on this chain
    auto margin = w22_bound_margin(rep.f);
    CHECK(margin.lhs <= margin.rhs);
    CHECK(margin.lhs < 64.0);
  }

  CHECK_THROWS_AS(build_knr_function(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_knr_function(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_knr_function(1, 2), std::invalid_argument);
}

TEST_CASE("w22_bound_margin") {
  auto osc = single_trig({{1, cplx{1.0, 0.0}}});
  auto m = w22_bound_margin(osc);
  CHECK(m.lhs == doctest::Approx(std::sqrt(6.0 * kPi)).epsilon(1e-10));
  CHECK(m.rhs >= m.lhs); // sqrt(6 pi + 1) beats sqrt(6 pi)

  // constants expose the normalisation of the right-hand side: both sides
  // are reported verbatim and the inequality is not enforced
  auto one = single_trig({{0, cplx{1.0, 0.0}}});
  auto mc = w22_bound_margin(one);
  CHECK(mc.lhs == doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-10));
  CHECK(mc.rhs == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(mc.rhs < mc.lhs);

  // non-periodic boundary data is rejected
  Poly ramp(0.0, {cplx{0, 0}, cplx{1, 0}});
  auto f = PiecewiseAnalytic::over_interval({Piece{-kPi, kPi, ramp}});
  CHECK_THROWS_AS(w22_bound_margin(f), std::invalid_argument);
}

TEST_CASE("gram kernel and matrix") {
  // single point: the kernel at zero, by the direct series
  for (int basis : {8, 32, 128}) {
    double series = 1.0 / (2.0 * kPi);
    for (int m = 1; m <= basis; ++m)
      series += 2.0 / (2.0 * kPi * (1.0 + double(m) * m + std::pow(double(m), 4)));
    std::vector<double> pt{0.7};
    auto g = gram_matrix(pt, basis);
    CHECK(g.gram(0, 0) == doctest::Approx(series).epsilon(1e-14));
    CHECK(g.gram(0, 0) > 0.0);
  }

  // the diagonal value grows with the basis
  std::vector<double> pt{0.0};
  CHECK(gram_matrix(pt, 16).gram(0, 0) < gram_matrix(pt, 64).gram(0, 0));

  // two equal points give a rank-1 matrix with equal rows
  std::vector<double> two{0.5, 0.5};
  auto g2 = gram_matrix(two, 32);
  CHECK(g2.gram(0, 0) == doctest::Approx(g2.gram(0, 1)).epsilon(1e-15));
  CHECK(delta_distance(g2, 0, 1) == doctest::Approx(0.0));

  CHECK_THROWS_AS(gram_matrix(std::vector<double>{0.1}, 2), std::invalid_argument);
  CHECK_THROWS_AS(gram_matrix(std::vector<double>{4.0}, 16), std::invalid_argument);
}

TEST_CASE("delta distances shrink with the angle gap") {
  for (double base : {0.0, -1.0, 2.0}) {
    double prev = 1e9;
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
      std::vector<double> pts{base, base + eps};
      auto g = gram_matrix(pts, 256);
      double d = delta_distance(g, 0, 1);
      CHECK(d < prev);
      CHECK(d > 0.0);
      prev = d;
    }
  }
}

TEST_CASE("gram matrices are positive definite and grow in Loewner order") {
  std::vector<double> pts{0.0, 0.37, 1.1, -2.0};
  Eigen::MatrixXd prev;
  for (int basis : {16, 64, 256}) {
    auto g = gram_matrix(pts, basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.gram);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    if (prev.size() > 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> diff(g.gram - prev);
      CHECK(diff.eigenvalues().minCoeff() >= -1e-12);
    }
    prev = g.gram;
  }
}
