#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "dynlab/diagonal.hpp"

using namespace dynlab::diagonal;
using dynlab::sobolev::gram_matrix;
constexpr double kPi = std::numbers::pi;

namespace {

bool bit_identical(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) return false;
  return std::memcmp(a.data(), b.data(), a.size() * sizeof(cplx)) == 0;
}

// stable route to ||delta_s - delta_t||: 2 sum_m sin^2(m d / 2) / (pi lambda_m),
// immune to the cancellation of the Gram-entry route
double delta_dist_stable(double d, int basis) {
  double acc = 0.0;
  for (int m = 1; m <= basis; ++m) {
    double lambda = 1.0 + double(m) * m + std::pow(double(m), 4);
    double sn = std::sin(0.5 * m * d);
    acc += 4.0 * sn * sn / (2.0 * kPi * lambda);
  }
  return std::sqrt(acc);
}

} // namespace

TEST_CASE("rational angles") {
  RationalAngle t(1, 1);
  CHECK(t.radians() == doctest::Approx(2.0 * kPi / 64.0).epsilon(1e-15));
  CHECK(RationalAngle::modulus_of(1) == 64);
  CHECK(RationalAngle::modulus_of(2) == (mpz_class(1) << 36));
  CHECK(RationalAngle::modulus_of(3) == (mpz_class(1) << 216));

  // the same angle at two levels
  RationalAngle lifted(mpz_class(1) << 30, 2);
  CHECK(t.same_angle(lifted));
  CHECK_FALSE(t.same_angle(RationalAngle(2, 1)));

  CHECK_THROWS_AS(RationalAngle(64, 1), std::invalid_argument);
  CHECK_THROWS_AS(RationalAngle(-1, 1), std::invalid_argument);
  CHECK_THROWS_AS(RationalAngle(0, 0), std::invalid_argument);
}

TEST_CASE("enumerate_level") {
  auto l1 = enumerate_level(1);
  REQUIRE(l1.size() == 2);
  CHECK(l1[0].num == 0);
  CHECK(l1[1].num == 1);
  CHECK(l1[1].radians() == doctest::Approx(2.0 * kPi / 64.0));

  auto l2 = enumerate_level(2);
  REQUIRE(l2.size() == 4);
  // largest point is 2 pi (2^30 + 1) / 2^36
  CHECK(l2[3].num == (mpz_class(1) << 30) + 1);
  for (const auto& p : l2) {
    CHECK(p.radians() >= 0.0);
    CHECK(p.radians() < 4.0 * kPi / 64.0); // tail below the next dyadic step
  }

  auto l3 = enumerate_level(3);
  CHECK(l3.size() == 8);
  CHECK(l3[7].num == (mpz_class(1) << 210) + (mpz_class(1) << 180) + 1);
  CHECK_THROWS_AS(enumerate_level(4), std::invalid_argument);
}

TEST_CASE("symbol multipliers and exact fixed phases") {
  RationalAngle t(1, 1); // 2 pi / 64
  auto p64 = DiagonalSymbol::power(64);
  CHECK(symbol_multiplier(p64, t) == cplx{1.0, 0.0}); // 64 * 1 mod 64 == 0

  auto p16 = DiagonalSymbol::power(16);
  CHECK(std::abs(symbol_multiplier(p16, t) - cplx{0.0, 1.0}) < 1e-15); // quarter turn

  // mixing difference at angle zero is 2 - 1 = 1
  RationalAngle zero(0, 2);
  auto mix = DiagonalSymbol::mixing_difference(12345);
  CHECK(symbol_multiplier(mix, zero) == cplx{1.0, 0.0});
}

TEST_CASE("apply_symbol identity paths are bit exact") {
  auto support = enumerate_level(2);
  std::vector<cplx> coeffs{{0.123, -4.56}, {7.0, 0.001}, {-2.5, 2.5}, {1e-7, 3.0}};
  DualVector v(support, coeffs);

  auto id = apply_symbol(DiagonalSymbol::power(0), v);
  CHECK(bit_identical(id.coeffs, coeffs));

  // the full period of level-2 points
  mpz_class period = mpz_class(1) << 36;
  auto roundtrip = apply_symbol(DiagonalSymbol::power(period), v);
  CHECK(bit_identical(roundtrip.coeffs, coeffs));

  // a non-period power must move something
  auto moved = apply_symbol(DiagonalSymbol::power(64), v);
  CHECK_FALSE(bit_identical(moved.coeffs, coeffs));
}

TEST_CASE("periodicity_check") {
  for (const auto& t : enumerate_level(1)) CHECK(periodicity_check(t, 64));
  RationalAngle fine(1, 2); // 2 pi / 2^36
  CHECK_FALSE(periodicity_check(fine, 64));
  CHECK(periodicity_check(fine, mpz_class(1) << 36));
  RationalAngle zero(0, 1);
  for (int p : {1, 2, 3, 7, 64}) CHECK(periodicity_check(zero, p));
  CHECK_THROWS_AS(periodicity_check(zero, 0), std::invalid_argument);
}

TEST_CASE("dual vectors validate their support") {
  auto sup = enumerate_level(1);
  CHECK_THROWS_AS(DualVector({sup[0], sup[0]}, {cplx{1, 0}, cplx{2, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(DualVector(sup, {cplx{1, 0}}), std::invalid_argument);
}

TEST_CASE("dual_norm") {
  auto g = level_gram(2, 64);
  auto support = enumerate_level(2);

  DualVector single(support, {cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{0, 0}});
  double n1 = dual_norm(single, g);
  CHECK(n1 == doctest::Approx(std::sqrt(g.gram(0, 0))).epsilon(1e-13));
  CHECK(n1 > 0.0);

  DualVector doubled(support, {cplx{2, 0}, cplx{0, 0}, cplx{0, 0}, cplx{0, 0}});
  CHECK(dual_norm(doubled, g) == doctest::Approx(2.0 * n1).epsilon(1e-14));

  // difference of two point functionals matches the pair geometry
  DualVector diff(support, {cplx{1, 0}, cplx{-1, 0}, cplx{0, 0}, cplx{0, 0}});
  CHECK(dual_norm(diff, g) ==
        doctest::Approx(dynlab::sobolev::delta_distance(g, 0, 1)).epsilon(1e-12));

  auto wrong = level_gram(1, 64);
  CHECK_THROWS_AS(dual_norm(single, wrong), std::invalid_argument);
}

TEST_CASE("mixing symbol values stay inside the disk of radius 3") {
  for (int level : {1, 2, 3}) {
    for (const auto& t : enumerate_level(level)) {
      for (long k : {1L, 63L, 64L, 65L, 127L, 4096L}) {
        auto s = DiagonalSymbol::mixing_difference(k);
        CHECK(std::abs(symbol_multiplier(s, t)) <= 3.0 + 1e-12);
      }
    }
  }
  // generic angles, direct evaluation
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    double th = ang(rng);
    long k = 1 + static_cast<long>(rng() % 500);
    cplx z{std::cos(k * th), std::sin(k * th)};
    cplx z2{std::cos(2.0 * k * th), std::sin(2.0 * k * th)};
    CHECK(std::abs(2.0 * z - z2) <= 3.0 + 1e-12);
  }
}

TEST_CASE("mixing symbol is 6k-Lipschitz in the angle") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 500; ++i) {
    double s = ang(rng), t = ang(rng);
    long k = 1 + static_cast<long>(rng() % 200);
    auto h = [&](double x) {
      return 2.0 * cplx{std::cos(k * x), std::sin(k * x)} -
             cplx{std::cos(2.0 * k * x), std::sin(2.0 * k * x)};
    };
    CHECK(std::abs(h(s) - h(t)) <= 6.0 * double(k) * std::abs(s - t) + 1e-12);
  }
}

TEST_CASE("finer truncations approximate the point functional") {
  // target at level 3, truncations at levels 1 and 2
  mpz_class m3 = (mpz_class(1) << 210) + (mpz_class(1) << 180) + 1;
  RationalAngle t3(m3, 3);
  RationalAngle t1(1, 1);
  RationalAngle t2((mpz_class(1) << 30) + 1, 2);

  const int basis = 256;
  double d1 = delta_dist_stable(std::abs(t3.radians() - t1.radians()), basis);
  double d2 = delta_dist_stable(std::abs(t3.radians() - t2.radians()), basis);
  CHECK(d1 > d2);
  CHECK(d2 >= 0.0);

  // the Gram-entry route agrees within its cancellation floor
  std::vector<double> pts{t3.radians(), t1.radians()};
  auto g = gram_matrix(pts, basis);
  CHECK(std::abs(dynlab::sobolev::delta_distance(g, 0, 1) - d1) < 1e-8);
}

TEST_CASE("separation experiment: balls at the origin always hit") {
  SeparationConfig cfg;
  cfg.level = 1;
  cfg.basis_size = 32;
  for (std::int64_t k = 1; k <= 16; ++k) cfg.k_values.push_back(k);
  cfg.u = {{cplx{0, 0}, cplx{0, 0}}, 0.5};
  cfg.v = {{cplx{0, 0}, cplx{0, 0}}, 0.5};
  auto rep = separation_experiment(cfg);
  CHECK(rep.undecided == 0);
  for (const auto& e : rep.entries) {
    CHECK(e.cls == HitClass::hit);
    CHECK(e.distance_upper < 1e-9);
  }
  CHECK(rep.hit_set.size() == 16);
}

TEST_CASE("separation experiment: aligned powers act as the identity") {
  // at level 1 every support point has period 64, so k = 64 gives the
  // identity and the image of U is U itself
  SeparationConfig cfg;
  cfg.level = 1;
  cfg.basis_size = 32;
  cfg.k_values = {64, 128};
  cfg.u = {{cplx{1, 0}, cplx{0, 0}}, 0.3};
  cfg.v = {{cplx{1, 0}, cplx{0, 0}}, 0.3};
  auto rep = separation_experiment(cfg);
  for (const auto& e : rep.entries) {
    CHECK(e.cls == HitClass::hit);
    CHECK(e.symbol_spread < 1e-15); // all multipliers equal 1
  }

  // far-away target: certified miss
  SeparationConfig far = cfg;
  far.k_values = {64};
  far.v = {{cplx{-5, 0}, cplx{0, 0}}, 0.3};
  auto rep2 = separation_experiment(far);
  REQUIRE(rep2.entries.size() == 1);
  CHECK(rep2.entries[0].cls == HitClass::miss);
  CHECK(rep2.entries[0].distance_lower >= far.v.radius);

  // a hit set that misses the probed block cannot be syndetic on window
  SeparationConfig run = cfg;
  run.k_values = {1, 2, 3, 4, 5, 6, 7, 8};
  run.v = {{cplx{-5, 0}, cplx{0, 0}}, 0.3};
  run.syndetic_bound = 8;
  auto rep3 = separation_experiment(run);
  CHECK(rep3.hit_set.empty());
  CHECK_FALSE(rep3.hit_gap.verdict.holds);
  CHECK(rep3.miss_thick.holds); // the misses form the long run instead
}

TEST_CASE("separation experiment: huge target makes a syndetic hit set") {
  SeparationConfig cfg;
  cfg.level = 2;
  cfg.basis_size = 32;
  for (std::int64_t k = 1; k <= 40; ++k) cfg.k_values.push_back(k);
  cfg.u = {{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{0, 0}}, 0.2};
  cfg.v = {{cplx{0, 0}, cplx{0, 0}, cplx{0, 0}, cplx{0, 0}}, 100.0};
  cfg.syndetic_bound = 1;
  auto rep = separation_experiment(cfg);
  CHECK(rep.hit_set.size() == 40);
  CHECK(rep.hit_gap.verdict.holds);
}

TEST_CASE("ball_shrink_check holds on seeded samples") {
  auto g = level_gram(2, 64);
  DualVector x(enumerate_level(2), {cplx{0.5, 0.1}, cplx{-0.3, 0}, cplx{0, 0.7}, cplx{0.2, -0.2}});
  auto v = ball_shrink_check(x, 0.9, 2000, g, 7);
  CHECK(v.holds);
  CHECK_THROWS_AS(ball_shrink_check(x, -1.0, 10, g, 0), std::invalid_argument);
}
