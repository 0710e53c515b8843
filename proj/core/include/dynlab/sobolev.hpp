#pragma once
// Closed-form numerics on W^{2,2}[-pi, pi]: piecewise trig/polynomial
// functions with exact per-piece integration of |f|^2, |f'|^2, |f''|^2,
// curvature-minimal Hermite bridges, the periodic mixing-difference test
// functions built from them, and the Gram geometry of point-evaluation
// functionals in a truncated trigonometric basis.
//
// No numerical quadrature is used anywhere in this module: the matching
// zones of the periodic test functions are a few nanoradians wide, far
// below what generic quadrature resolves. Everything integrates in closed
// form per piece.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace dynlab::sobolev {

using cplx = std::complex<double>;

// Trigonometric polynomial sum c_m e^{imx} with integer frequencies.
class TrigPoly {
public:
  explicit TrigPoly(std::vector<std::pair<int, cplx>> terms);
  const std::vector<std::pair<int, cplx>>& terms() const { return terms_; }

  cplx eval(double x) const;
  TrigPoly derivative() const;
  double coeff_abs_sum() const;       // bounds sup|f|
  double derivative_coeff_bound() const; // bounds sup|f'|

private:
  std::vector<std::pair<int, cplx>> terms_; // merged, sorted by frequency
};

// Complex polynomial of degree <= 5 in the shifted variable (x - origin).
class Poly {
public:
  Poly(double origin, std::vector<cplx> coef);
  double origin() const { return origin_; }
  const std::vector<cplx>& coef() const { return coef_; }

  cplx eval(double x) const;
  Poly derivative() const;

private:
  double origin_ = 0.0;
  std::vector<cplx> coef_;
};

struct Piece {
  double a = 0.0;
  double b = 0.0;
  std::variant<TrigPoly, Poly> payload;
};

// A function given piecewise on a contiguous interval, optionally flagged
// as 2*pi/P periodic, in which case the pieces describe one period cell
// and norms over [-pi, pi] multiply the cell integrals by P. Junctions
// must match in value and first derivative (checked to 1e-10).
class PiecewiseAnalytic {
public:
  static PiecewiseAnalytic over_interval(std::vector<Piece> pieces);
  static PiecewiseAnalytic periodic(std::vector<Piece> pieces, int period_divisor);

  const std::vector<Piece>& pieces() const { return pieces_; }
  std::optional<int> period_divisor() const { return period_divisor_; }
  double domain_start() const { return pieces_.front().a; }
  double domain_end() const { return pieces_.back().b; }

  cplx eval(double x, int derivative_order = 0) const;
  void check_c1(double tol = 1e-10) const; // throws std::runtime_error("not C1 ...")

private:
  PiecewiseAnalytic() = default;
  std::vector<Piece> pieces_;
  std::optional<int> period_divisor_;
};

// Exact integral of |f^{(order)}|^2 over a single piece.
double piece_l2_sq(const Piece& piece, int derivative_order);

// Exact Sobolev norm square: integral of |f|^2 + |f'|^2 + |f''|^2 over the
// domain ([-pi, pi] for periodic functions). Checks C1 junctions first.
double w22_norm_sq(const PiecewiseAnalytic& f);

// Exact integral of |f''|^2 over the domain (periodicity expanded).
double second_derivative_l2_sq(const PiecewiseAnalytic& f);

struct SupNormBracket {
  double lower = 0.0; // max over dense samples
  double upper = 0.0; // lower + certified step * derivative bound
};

// Certified bracket for sup |f|: lower <= true sup <= upper.
SupNormBracket sup_norm_bound(const PiecewiseAnalytic& f);

// --- Hermite bridge -------------------------------------------------------

struct HermiteData {
  double alpha = 0.0;
  double beta = 1.0;
  cplx a0, a1, b0, b1; // value and derivative at each end
};

struct HermiteResult {
  PiecewiseAnalytic cubic;   // single cubic piece on [alpha, beta]
  double energy = 0.0;       // exact integral of |f''|^2 of the cubic
  double energy_bound = 0.0; // 24|a0-b0|^2/h^3 + 12(|a1|^2+|b1|^2)/h
  double sup_rhs = 0.0;      // |a0+b0|/2 + |a0-b0|/2 + h(|a1|+|b1|)/5, reported
};

// The unique cubic matching all four boundary conditions. Among all C^2
// interpolants it minimises the curvature energy, so the energy bound of
// the asserted interpolant is inherited; both sides are returned.
HermiteResult hermite_min_curvature(const HermiteData& d);

// --- periodic mixing-difference test functions -----------------------------

// The base oscillation 2 e^{ikx} - e^{2ikx} as a full-interval function.
PiecewiseAnalytic mixing_difference_function(std::int64_t k);

struct KnrBoundReport {
  int n = 0;
  int r = 0;
  std::int64_t k = 0;             // 2^(6^n) - r
  PiecewiseAnalytic f;            // 2*pi/2^(6^n) periodic, one cell of pieces
  SupNormBracket sup;             // over [-pi, pi]
  double bridge_energy = 0.0;     // |g''|^2 over the bridge piece
  double bridge_energy_bound = 0.0;
  double cell_second_sq = 0.0;    // |f''|^2 over one period cell
  double second_sq = 0.0;         // |f''|^2 over [-pi, pi]
  double w22_sq = 0.0;
  double norm_rhs = 0.0;          // sqrt(3 * second_sq + sup.upper^2)
  bool sup_within_9 = false;
  bool second_within_1104 = false;
  bool norm_below_64 = false;
  bool bridge_within_bound = false;

  bool chain_ok() const {
    return sup_within_9 && second_within_1104 && norm_below_64 && bridge_within_bound;
  }
};

// Builds the 2*pi/64-periodic function that equals the mixing difference
// oscillation of index k = 64 - r on the matching zone |x| <= 2/2^30 (mod
// the period) and the curvature-minimal cubic bridge elsewhere, together
// with its certified bound chain. Only n = 1 is constructible: level n
// needs 2^(6^n) cells, which stops being a desk-scale object at n = 2.
KnrBoundReport build_knr_function(int n, int r);

struct BoundMargin {
  double lhs = 0.0; // ||f||_{W^{2,2}}
  double rhs = 0.0; // sqrt(3 ||f''||^2 + c0^2) with c0 the certified sup upper bound
};

// Both sides of the periodic-boundary norm bound, reported verbatim.
// Requires matching endpoint value and derivative (or a periodic flag).
BoundMargin w22_bound_margin(const PiecewiseAnalytic& f);

// --- Gram geometry of point evaluations ------------------------------------

struct GramGeometry {
  std::vector<double> points; // angles in [-pi, pi]
  int basis_size = 0;
  Eigen::MatrixXd gram;       // real symmetric positive definite
  // Upper-triangular factor with x^H gram x = ||factor x||^2. Point pairs
  // in these geometries can sit 1e-10 apart, leaving gram with eigenvalues
  // far below double noise; the factor keeps them representable (the tiny
  // eigenvalue is the square of a tiny but well-resolved singular value).
  Eigen::MatrixXcd factor;
};

// Kernel value sum_{|m| <= B} cos(m t) / (2 pi (1 + m^2 + m^4)).
double gram_kernel(double t, int basis_size);

// Riesz-representation Gram matrix of the point evaluations at the given
// angles, in the span of e^{imx} with |m| <= basis_size. The basis is
// orthogonal for the W^{2,2} inner product with diagonal weights
// 2 pi (1 + m^2 + m^4), so entries are exact kernel sums; the matrix grows
// in the Loewner order as the basis grows.
GramGeometry gram_matrix(std::span<const double> points, int basis_size);

// Smallest eigenvalue of gram, computed as the squared smallest singular
// value of the factor so that near-coincident points still certify as
// positive definite.
double gram_min_eigenvalue(const GramGeometry& g);

// ||delta_s - delta_t|| for two points of the geometry.
double delta_distance(const GramGeometry& g, std::size_t i, std::size_t j);

} // namespace dynlab::sobolev
