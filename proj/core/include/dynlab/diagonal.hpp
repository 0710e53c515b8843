#pragma once
// Exact arithmetic on the dyadic-tower angle set and the diagonal action
// of its rotation operator on finite spans of point-evaluation
// functionals.
//
// Angles are never stored as floats: a point is an exact pair
// (numerator m, level k) with value 2*pi*m / 2^(6^k), and every symbol
// evaluation reduces the integer phase modulo 2^(6^k) in big-integer
// arithmetic before any conversion to double. Powers up to 2^216 are
// routine here and would annihilate double precision otherwise.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "dynlab/natset.hpp"
#include "dynlab/sobolev.hpp"

namespace dynlab::diagonal {

using cplx = std::complex<double>;

struct RationalAngle {
  mpz_class num;  // 0 <= num < 2^(6^level)
  int level = 1;  // >= 1

  RationalAngle(mpz_class numerator, int level);

  static mpz_class modulus_of(int level); // 2^(6^level)
  mpz_class modulus() const { return modulus_of(level); }

  double radians() const; // 2*pi*num / 2^(6^level)

  // Exact value equality across levels.
  bool same_angle(const RationalAngle& other) const;
};

// All 2^level points sum_{n <= level} eps_n * 2*pi / 2^(6^n), as exact
// angles at the given level, sorted increasingly. Supported levels: 1..3.
std::vector<RationalAngle> enumerate_level(int level);

struct DiagonalSymbol {
  enum class Kind { power, mixing_difference };
  Kind kind = Kind::power;
  mpz_class parameter; // >= 0

  static DiagonalSymbol power(mpz_class n);
  static DiagonalSymbol mixing_difference(mpz_class k); // z -> 2 z^k - z^{2k}
};

// s(e^{it}) with the integer phase reduced exactly first. A reduced phase
// of zero yields the multiplier 1.0 exactly, with no floating drift.
cplx symbol_multiplier(const DiagonalSymbol& s, const RationalAngle& t);

// True iff p * m is divisible by 2^(6^level), i.e. the point functional
// at t has period p under the rotation.
bool periodicity_check(const RationalAngle& t, const mpz_class& p);

// A finite combination of point functionals delta_t over distinct angles.
struct DualVector {
  std::vector<RationalAngle> support;
  std::vector<cplx> coeffs;

  DualVector(std::vector<RationalAngle> support, std::vector<cplx> coeffs);
};

// Coefficientwise multiplication by the symbol values. Identity
// multipliers are skipped so fixed points round-trip bit-identically.
DualVector apply_symbol(const DiagonalSymbol& s, const DualVector& v);

// Gram geometry over the points of a level enumeration.
sobolev::GramGeometry level_gram(int level, int basis_size);

// sqrt(c^H G c); the geometry must have been built over the same support.
double dual_norm(std::span<const cplx> coeffs, const sobolev::GramGeometry& g);
double dual_norm(const DualVector& v, const sobolev::GramGeometry& g);

// --- separation experiment -------------------------------------------------

struct GramBall {
  std::vector<cplx> center; // coefficients over the level support
  double radius = 0.5;
};

struct SeparationConfig {
  int level = 2;
  int basis_size = 256;
  std::vector<std::int64_t> k_values; // default 1..200
  GramBall u, v;
  int max_iterations = 10000;
  double gradient_tol = 1e-9;
  std::int64_t syndetic_bound = 8; // for the hit-set diagnosis
  std::int64_t thick_length = 2;   // for the miss-run diagnosis
};

enum class HitClass { hit, miss, undecided };
const char* hit_label(HitClass c);

struct SeparationEntry {
  std::int64_t k = 0;
  double distance_upper = 0.0; // value at the best feasible point found
  double distance_lower = 0.0; // convexity certificate, valid at any iterate
  HitClass cls = HitClass::undecided;
  int iterations = 0;
  bool converged = false;
  double symbol_spread = 0.0; // max pairwise distance of symbol values on the support
};

struct SeparationReport {
  std::vector<SeparationEntry> entries; // sorted by k
  natset::WindowSet hit_set;
  natset::GapStats<std::int64_t> hit_gap;              // syndetic diagnosis of the hit set
  natset::FamilyVerdict<std::int64_t> miss_thick;      // thick runs among the misses
  std::int64_t undecided = 0;
};

// For each k, how close the image of the ball U under the mixing
// difference symbol 2 z^k - z^{2k} comes to the ball V, in the Gram norm.
// The distance is minimised by projected gradient from the ball center
// with a deterministic schedule; a k that fails to converge is reported
// as undecided, never silently classified.
SeparationReport separation_experiment(const SeparationConfig& cfg);

// Samples u, v from the ball of radius r/3 around x and verifies that
// 2u - v stays inside the ball of radius r; always true by the triangle
// inequality, so any violation indicts the norm implementation. The
// comparison allows a 1e-9 relative slack for rounding.
natset::FamilyVerdict<std::int64_t> ball_shrink_check(const DualVector& x, double radius,
                                                      int samples,
                                                      const sobolev::GramGeometry& g,
                                                      std::uint64_t seed);

} // namespace dynlab::diagonal
