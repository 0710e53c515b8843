#pragma once
// Weighted backward shifts: truncated orbit simulation, return sets of
// sup-norm balls decided coordinatewise, and the weight-product criterion
// sets whose family membership characterises joint transitivity of power
// tuples of a single shift.
//
// All products of weights are accumulated as sums of logs; threshold
// comparisons happen in log space with a fixed absolute slack so that
// products over thousands of factors neither overflow nor flip verdicts
// on rounding noise.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dynlab/natset.hpp"

namespace dynlab::shiftlab {

using cplx = std::complex<double>;

enum class Side { bilateral, unilateral };

struct ConstantRule { double value = 1.0; };
struct StepRule { double neg = 1.0; double pos = 1.0; }; // neg for i <= 0, pos for i > 0
struct PeriodicRule { std::vector<double> pattern; };    // w_i = pattern[i mod len]
struct ExplicitRule {
  std::int64_t first_index = 0;
  std::vector<double> values;
  double tail = 1.0; // weight outside the listed range
};

// A bounded nonvanishing weight sequence over Z (bilateral) or over the
// indices >= 1 (unilateral, matching e_n -> w_n e_{n-1} with e_0 -> 0).
class WeightSpec {
public:
  using Rule = std::variant<ConstantRule, StepRule, PeriodicRule, ExplicitRule>;

  WeightSpec(Side side, Rule rule);

  Side side() const { return side_; }
  const Rule& rule() const { return rule_; }

  // w_i; unilateral weights are defined for i >= 1 only.
  double at(std::int64_t i) const;
  double log_abs_at(std::int64_t i) const;

  double min_abs() const { return min_abs_; }
  double max_abs() const { return max_abs_; }

private:
  Side side_;
  Rule rule_;
  double min_abs_ = 1.0;
  double max_abs_ = 1.0;
};

enum class Direction { forward, backward };

// Product of |w_i| over (j, j+L] (forward) or (j-L, j] (backward).
// The value is exp of the log-space accumulation and may round to 0 or
// inf for extreme L; use weight_log_product when the magnitude matters.
double weight_product(const WeightSpec& w, std::int64_t j, std::int64_t L, Direction dir);
double weight_log_product(const WeightSpec& w, std::int64_t j, std::int64_t L, Direction dir);

// Threshold slack for log-space comparisons: a product passes "> M" only
// if its log exceeds log(M) by more than this.
inline constexpr double kLogSlack = 1e-12;

struct CriterionPoint {
  std::int64_t m = 0;
  double log_product = 0.0; // forward: log prod; backward: log(1/prod)
  bool pass = false;
};

struct CriterionSets {
  natset::WindowSet forward;                 // {m : prod_{(j, j+md]} |w_i| > M}
  std::optional<natset::WindowSet> backward; // {m : 1/prod_{(j-md, j]} |w_i| > M}, bilateral only
  std::vector<CriterionPoint> forward_points;
  std::vector<CriterionPoint> backward_points;
};

// The window trace of the power-tuple criterion sets at stride d and
// threshold M, probed from index j. Elements run over 1 <= m <= m_max;
// the WindowSet horizon is m_max + 1.
CriterionSets criterion_sets(const WeightSpec& w, std::int64_t j, std::int64_t d,
                             double threshold, std::int64_t m_max);

// Named family tests applied to criterion and return-set windows.
//   nonempty            - the set meets the window
//   cofinite            - the set contains a final run [m0, m_max]
//   syndetic            - max gap (boundaries included) <= bound
//   thick               - contains `length` consecutive integers
struct WindowFamilyTest {
  std::string name = "nonempty";
  std::int64_t bound = 0;  // syndetic gap bound
  std::int64_t length = 1; // thick run length
};

natset::FamilyVerdict<std::int64_t> apply_family_test(const natset::WindowSet& s,
                                                      const WindowFamilyTest& test);

struct DisjointVerdictConfig {
  std::vector<std::int64_t> powers; // r_1 < ... < r_N, r_1 >= 1; r_0 = 0 is implicit
  WindowFamilyTest test;
  std::vector<std::int64_t> probes; // probe indices j; empty selects the default grid
  std::vector<double> thresholds;   // M grid; empty selects {10^t : -2 <= t <= 6}
  std::int64_t m_max = 4096;
};

std::vector<std::int64_t> default_probes(Side side);
std::vector<double> default_threshold_grid();

// Window verdict for the tuple (B_w^{r_1}, ..., B_w^{r_N}): every probe j,
// every threshold M and every pair 0 <= s < l <= N must pass the family
// test on both criterion sets (forward only for unilateral weights).
natset::FamilyVerdict<std::int64_t> disjoint_family_verdict(const WeightSpec& w,
                                                            const DisjointVerdictConfig& cfg);

// --- truncated vectors and balls ----------------------------------------

// A finitely supported coefficient vector over the index range
// [lo, lo + size); unilateral contexts require lo >= 0.
struct TruncatedVector {
  std::int64_t lo = 0;
  std::vector<cplx> coeffs;

  std::int64_t hi() const { return lo + static_cast<std::int64_t>(coeffs.size()) - 1; }
  cplx at(std::int64_t i) const {
    if (i < lo || i > hi()) return {0.0, 0.0};
    return coeffs[static_cast<std::size_t>(i - lo)];
  }
  static TruncatedVector basis(std::int64_t k, std::int64_t lo, std::int64_t hi);
  std::vector<std::int64_t> support() const;
};

enum class NormKind { sup, p_norm };

struct BallSpec {
  TruncatedVector center;
  double radius = 1.0;
  NormKind norm = NormKind::sup;
  double p = 2.0; // exponent when norm == p_norm
};

double vector_norm(const TruncatedVector& v, NormKind kind, double p = 2.0);
bool ball_contains(const BallSpec& ball, const TruncatedVector& v);

// Orbit x, B_w x, ..., B_w^steps x over the fixed truncation range of x.
// Bilateral orbits raise "truncation leakage" if nonzero mass would cross
// the lower end of the range; unilateral mass vanishing at index 0 is the
// genuine action of the shift.
std::vector<TruncatedVector> shift_orbit(const WeightSpec& w, const TruncatedVector& x,
                                         std::int64_t steps);

// {n <= n_max : B_w^n(U) meets V} for sup-norm balls, decided exactly:
// the image of a sup ball under the diagonal scaling + index shift of
// B_w^n is a product of disks, so intersection reduces to per-coordinate
// feasibility. Horizon of the result is n_max + 1.
natset::WindowSet direct_return_set(const WeightSpec& w, const BallSpec& u,
                                    const BallSpec& v, std::int64_t n_max);

} // namespace dynlab::shiftlab
