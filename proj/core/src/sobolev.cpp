#include "dynlab/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dynlab::sobolev {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxFrequency = 1 << 20;
constexpr std::size_t kMaxPolyCoeffs = 6; // degree <= 5

cplx unit_exp(double theta) { return {std::cos(theta), std::sin(theta)}; }

} // namespace

// --- TrigPoly ---------------------------------------------------------------

TrigPoly::TrigPoly(std::vector<std::pair<int, cplx>> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  for (const auto& [m, c] : terms) {
    if (std::abs(m) > kMaxFrequency) throw std::invalid_argument("TrigPoly: frequency too large");
    if (!terms_.empty() && terms_.back().first == m) terms_.back().second += c;
    else terms_.emplace_back(m, c);
  }
  std::erase_if(terms_, [](const auto& t) { return t.second == cplx{0.0, 0.0}; });
}

cplx TrigPoly::eval(double x) const {
  cplx acc{0.0, 0.0};
  for (const auto& [m, c] : terms_) acc += c * unit_exp(m * x);
  return acc;
}

TrigPoly TrigPoly::derivative() const {
  std::vector<std::pair<int, cplx>> out;
  out.reserve(terms_.size());
  for (const auto& [m, c] : terms_) out.emplace_back(m, c * cplx{0.0, static_cast<double>(m)});
  return TrigPoly(std::move(out));
}

double TrigPoly::coeff_abs_sum() const {
  double s = 0.0;
  for (const auto& [m, c] : terms_) s += std::abs(c);
  return s;
}

double TrigPoly::derivative_coeff_bound() const {
  double s = 0.0;
  for (const auto& [m, c] : terms_) s += std::abs(c) * std::abs(m);
  return s;
}

// --- Poly -------------------------------------------------------------------

Poly::Poly(double origin, std::vector<cplx> coef) : origin_(origin), coef_(std::move(coef)) {
  if (coef_.empty()) coef_.push_back({0.0, 0.0});
  if (coef_.size() > kMaxPolyCoeffs) throw std::invalid_argument("Poly: degree must be <= 5");
  if (!std::isfinite(origin_)) throw std::invalid_argument("Poly: origin must be finite");
}

cplx Poly::eval(double x) const {
  const double u = x - origin_;
  cplx acc{0.0, 0.0};
  for (std::size_t i = coef_.size(); i-- > 0;) acc = acc * u + coef_[i];
  return acc;
}

Poly Poly::derivative() const {
  std::vector<cplx> out;
  if (coef_.size() <= 1) {
    out.push_back({0.0, 0.0});
  } else {
    out.reserve(coef_.size() - 1);
    for (std::size_t k = 1; k < coef_.size(); ++k)
      out.push_back(coef_[k] * static_cast<double>(k));
  }
  return Poly(origin_, std::move(out));
}

// --- piecewise assembly -----------------------------------------------------

namespace {

cplx payload_eval(const std::variant<TrigPoly, Poly>& payload, double x) {
  return std::visit([&](const auto& p) { return p.eval(x); }, payload);
}

std::variant<TrigPoly, Poly> payload_derivative(std::variant<TrigPoly, Poly> payload, int order) {
  for (int i = 0; i < order; ++i)
    payload = std::visit([](const auto& p) -> std::variant<TrigPoly, Poly> { return p.derivative(); },
                         payload);
  return payload;
}

void validate_pieces(const std::vector<Piece>& pieces) {
  if (pieces.empty()) throw std::invalid_argument("PiecewiseAnalytic: no pieces");
  for (const Piece& p : pieces)
    if (!(p.a < p.b)) throw std::invalid_argument("PiecewiseAnalytic: empty or reversed piece interval");
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    double gap = std::abs(pieces[i + 1].a - pieces[i].b);
    if (gap > 1e-12 * (1.0 + std::abs(pieces[i].b)))
      throw std::invalid_argument("PiecewiseAnalytic: pieces do not partition the interval");
  }
}

} // namespace

PiecewiseAnalytic PiecewiseAnalytic::over_interval(std::vector<Piece> pieces) {
  validate_pieces(pieces);
  PiecewiseAnalytic f;
  f.pieces_ = std::move(pieces);
  return f;
}

PiecewiseAnalytic PiecewiseAnalytic::periodic(std::vector<Piece> pieces, int period_divisor) {
  validate_pieces(pieces);
  if (period_divisor < 1) throw std::invalid_argument("PiecewiseAnalytic: period divisor must be >= 1");
  const double want = 2.0 * kPi / period_divisor;
  const double got = pieces.back().b - pieces.front().a;
  if (std::abs(got - want) > 1e-9 * (1.0 + want))
    throw std::invalid_argument("PiecewiseAnalytic: pieces do not cover one period cell");
  PiecewiseAnalytic f;
  f.pieces_ = std::move(pieces);
  f.period_divisor_ = period_divisor;
  return f;
}

cplx PiecewiseAnalytic::eval(double x, int derivative_order) const {
  const double start = domain_start();
  const double end = domain_end();
  double u = x;
  if (period_divisor_) {
    const double width = end - start;
    u = x - width * std::floor((x - start) / width);
    if (u >= end) u -= width;
    if (u < start) u += width;
  } else if (u < start - 1e-12 || u > end + 1e-12) {
    throw std::domain_error("PiecewiseAnalytic: point outside domain");
  }
  u = std::clamp(u, start, end);

  std::size_t idx = pieces_.size() - 1;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (u <= pieces_[i].b) { idx = i; break; }
  }
  auto payload = payload_derivative(pieces_[idx].payload, derivative_order);
  return payload_eval(payload, u);
}

void PiecewiseAnalytic::check_c1(double tol) const {
  auto junction_gap = [&](const Piece& left, double xl, const Piece& right, double xr, int order) {
    auto pl = payload_derivative(left.payload, order);
    auto pr = payload_derivative(right.payload, order);
    return std::abs(payload_eval(pl, xl) - payload_eval(pr, xr));
  };
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    for (int order = 0; order <= 1; ++order) {
      double gap = junction_gap(pieces_[i], pieces_[i].b, pieces_[i + 1], pieces_[i + 1].a, order);
      if (gap > tol)
        throw std::runtime_error("not C1: junction mismatch inside the piece list");
    }
  }
  if (period_divisor_) {
    for (int order = 0; order <= 1; ++order) {
      double gap = junction_gap(pieces_.back(), pieces_.back().b, pieces_.front(), pieces_.front().a, order);
      if (gap > tol)
        throw std::runtime_error("not C1: periodic wrap junction mismatch");
    }
  }
}

// --- exact piece integrals --------------------------------------------------

namespace {

// integral of e^{ikx} over [a, b], written without cancellation:
// e^{ik(a+b)/2} * 2 sin(k (b-a)/2) / k.
cplx osc_integral(int k, double a, double b) {
  if (k == 0) return {b - a, 0.0};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  return unit_exp(k * mid) * (2.0 * std::sin(k * half) / k);
}

double trig_l2_sq(const TrigPoly& t, double a, double b) {
  const auto& ts = t.terms();
  double acc = 0.0;
  for (std::size_t u = 0; u < ts.size(); ++u) {
    acc += std::norm(ts[u].second) * (b - a);
    for (std::size_t v = u + 1; v < ts.size(); ++v) {
      cplx cross = ts[u].second * std::conj(ts[v].second) * osc_integral(ts[u].first - ts[v].first, a, b);
      acc += 2.0 * cross.real();
    }
  }
  return acc;
}

double poly_l2_sq(const Poly& p, double a, double b) {
  const double lo = a - p.origin();
  const double hi = b - p.origin();
  const auto& c = p.coef();
  // Precompute hi^t - lo^t for the needed powers.
  const std::size_t top = 2 * c.size();
  std::vector<double> power_diff(top + 1, 0.0);
  double ph = hi, pl = lo;
  for (std::size_t t = 1; t <= top; ++t) {
    power_diff[t] = ph - pl;
    ph *= hi;
    pl *= lo;
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k)
    for (std::size_t j = 0; j < c.size(); ++j) {
      double re = (c[k] * std::conj(c[j])).real();
      acc += re * power_diff[k + j + 1] / static_cast<double>(k + j + 1);
    }
  return acc;
}

} // namespace

double piece_l2_sq(const Piece& piece, int derivative_order) {
  auto payload = payload_derivative(piece.payload, derivative_order);
  if (const auto* t = std::get_if<TrigPoly>(&payload)) return trig_l2_sq(*t, piece.a, piece.b);
  return poly_l2_sq(std::get<Poly>(payload), piece.a, piece.b);
}

double w22_norm_sq(const PiecewiseAnalytic& f) {
  f.check_c1();
  double total = 0.0;
  for (const Piece& p : f.pieces())
    total += piece_l2_sq(p, 0) + piece_l2_sq(p, 1) + piece_l2_sq(p, 2);
  if (f.period_divisor()) total *= *f.period_divisor();
  return total;
}

double second_derivative_l2_sq(const PiecewiseAnalytic& f) {
  double total = 0.0;
  for (const Piece& p : f.pieces()) total += piece_l2_sq(p, 2);
  if (f.period_divisor()) total *= *f.period_divisor();
  return total;
}

// --- sup-norm bracket ---------------------------------------------------

SupNormBracket sup_norm_bound(const PiecewiseAnalytic& f) {
  SupNormBracket out;
  for (const Piece& p : f.pieces()) {
    const double width = p.b - p.a;
    double deriv_bound = 0.0;
    std::size_t samples = 256;
    if (const auto* t = std::get_if<TrigPoly>(&p.payload)) {
      deriv_bound = t->derivative_coeff_bound();
      int maxm = 1;
      for (const auto& [m, c] : t->terms()) maxm = std::max(maxm, std::abs(m));
      double spacing = std::min(width / 256.0, 2.0 * kPi / (256.0 * maxm));
      samples = static_cast<std::size_t>(std::clamp(width / spacing, 256.0, 4.0e5));
    } else {
      const auto& poly = std::get<Poly>(p.payload);
      const double umax = std::max(std::abs(p.a - poly.origin()), std::abs(p.b - poly.origin()));
      const auto& c = poly.coef();
      double upow = 1.0;
      for (std::size_t k = 1; k < c.size(); ++k) {
        deriv_bound += static_cast<double>(k) * std::abs(c[k]) * upow;
        upow *= umax;
      }
    }
    double lo = 0.0;
    for (std::size_t i = 0; i <= samples; ++i) {
      double x = p.a + width * static_cast<double>(i) / static_cast<double>(samples);
      lo = std::max(lo, std::abs(payload_eval(p.payload, x)));
    }
    const double slack = 0.5 * (width / static_cast<double>(samples)) * deriv_bound;
    out.lower = std::max(out.lower, lo);
    out.upper = std::max(out.upper, lo + slack);
  }
  return out;
}

// --- Hermite bridge -----------------------------------------------------

HermiteResult hermite_min_curvature(const HermiteData& d) {
  const double h = d.beta - d.alpha;
  if (!(h > 0.0)) throw std::invalid_argument("hermite_min_curvature: degenerate interval");

  const cplx delta = d.b0 - d.a0 - d.a1 * h;
  const cplx dslope = d.b1 - d.a1;
  const cplx p2 = (3.0 * delta - h * dslope) / (h * h);
  const cplx p3 = (h * dslope - 2.0 * delta) / (h * h * h);

  HermiteResult out{PiecewiseAnalytic::over_interval(
                        {Piece{d.alpha, d.beta, Poly(d.alpha, {d.a0, d.a1, p2, p3})}}),
                    0.0, 0.0, 0.0};

  const double x2 = std::norm(delta);
  const double cross = (delta * std::conj(dslope)).real();
  const double y2 = std::norm(dslope);
  out.energy = (12.0 * x2 - 12.0 * h * cross + 4.0 * h * h * y2) / (h * h * h);

  out.energy_bound = 24.0 * std::norm(d.a0 - d.b0) / (h * h * h) +
                     12.0 * (std::norm(d.a1) + std::norm(d.b1)) / h;
  out.sup_rhs = 0.5 * std::abs(d.a0 + d.b0) + 0.5 * std::abs(d.a0 - d.b0) +
                h * (std::abs(d.a1) + std::abs(d.b1)) / 5.0;
  return out;
}

// --- periodic test functions ---------------------------------------------

PiecewiseAnalytic mixing_difference_function(std::int64_t k) {
  if (k < 1 || 2 * k > kMaxFrequency)
    throw std::invalid_argument("mixing_difference_function: index out of range");
  TrigPoly h({{static_cast<int>(k), cplx{2.0, 0.0}}, {static_cast<int>(2 * k), cplx{-1.0, 0.0}}});
  return PiecewiseAnalytic::over_interval({Piece{-kPi, kPi, std::move(h)}});
}

KnrBoundReport build_knr_function(int n, int r) {
  if (n < 1) throw std::invalid_argument("build_knr_function: level must be >= 1");
  if (n > 1)
    throw std::invalid_argument(
        "build_knr_function: level n needs 2^(6^n) period cells; beyond n = 1 that is "
        "not a representable piece list, so levels >= 2 are rejected rather than approximated");
  if (r < 0 || r > n) throw std::invalid_argument("build_knr_function: need 0 <= r <= n");

  const std::int64_t k = 64 - r;
  const double width = 2.0 * kPi / 64.0;
  const double zone = std::ldexp(2.0, -30); // half-width of the matching zone, 2/2^30
  const double alpha = zone - width;
  const double beta = -zone;
  const double cell_end = alpha + width;

  TrigPoly h({{static_cast<int>(k), cplx{2.0, 0.0}}, {static_cast<int>(2 * k), cplx{-1.0, 0.0}}});
  TrigPoly hp = h.derivative();

  HermiteData hd;
  hd.alpha = alpha;
  hd.beta = beta;
  hd.a0 = h.eval(cell_end); // wraps to the start of the cell one period up
  hd.a1 = hp.eval(cell_end);
  hd.b0 = h.eval(beta);
  hd.b1 = hp.eval(beta);
  HermiteResult bridge = hermite_min_curvature(hd);

  KnrBoundReport rep{.n = n,
                     .r = r,
                     .k = k,
                     .f = PiecewiseAnalytic::periodic(
                         {bridge.cubic.pieces().front(), Piece{beta, cell_end, h}}, 64),
                     .sup = {},
                     .bridge_energy = bridge.energy,
                     .bridge_energy_bound = bridge.energy_bound,
                     .cell_second_sq = 0.0,
                     .second_sq = 0.0,
                     .w22_sq = 0.0,
                     .norm_rhs = 0.0};

  rep.sup = sup_norm_bound(rep.f);
  for (const Piece& p : rep.f.pieces()) rep.cell_second_sq += piece_l2_sq(p, 2);
  rep.second_sq = 64.0 * rep.cell_second_sq;
  rep.w22_sq = w22_norm_sq(rep.f);
  rep.norm_rhs = std::sqrt(3.0 * rep.second_sq + rep.sup.upper * rep.sup.upper);

  rep.sup_within_9 = rep.sup.upper <= 9.0;
  rep.second_within_1104 = rep.second_sq <= 1104.0;
  rep.norm_below_64 = std::sqrt(rep.w22_sq) < 64.0;
  rep.bridge_within_bound = rep.bridge_energy <= rep.bridge_energy_bound;
  return rep;
}

BoundMargin w22_bound_margin(const PiecewiseAnalytic& f) {
  if (!f.period_divisor()) {
    const double a = f.domain_start();
    const double b = f.domain_end();
    for (int order = 0; order <= 1; ++order) {
      if (std::abs(f.eval(a, order) - f.eval(b, order)) > 1e-10)
        throw std::invalid_argument("w22_bound_margin: boundary data is not periodic");
    }
  }
  BoundMargin out;
  out.lhs = std::sqrt(w22_norm_sq(f));
  const double c0 = sup_norm_bound(f).upper;
  out.rhs = std::sqrt(3.0 * second_derivative_l2_sq(f) + c0 * c0);
  return out;
}

// --- Gram geometry --------------------------------------------------------

double gram_kernel(double t, int basis_size) {
  double acc = 1.0 / (2.0 * kPi);
  for (int m = 1; m <= basis_size; ++m) {
    const double lambda = 1.0 + static_cast<double>(m) * m + std::pow(static_cast<double>(m), 4);
    acc += 2.0 * std::cos(m * t) / (2.0 * kPi * lambda);
  }
  return acc;
}

GramGeometry gram_matrix(std::span<const double> points, int basis_size) {
  if (basis_size < 3) throw std::invalid_argument("gram_matrix: basis size must be >= 3");
  if (points.empty()) throw std::invalid_argument("gram_matrix: no points");
  for (double t : points)
    if (t < -kPi - 1e-12 || t > kPi + 1e-12)
      throw std::invalid_argument("gram_matrix: point outside [-pi, pi]");

  GramGeometry g;
  g.points.assign(points.begin(), points.end());
  g.basis_size = basis_size;
  const auto n = static_cast<Eigen::Index>(points.size());
  g.gram.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      double v = gram_kernel(g.points[static_cast<std::size_t>(i)] -
                                 g.points[static_cast<std::size_t>(j)],
                             basis_size);
      g.gram(i, j) = v;
      g.gram(j, i) = v;
    }

  // Scaled evaluation matrix F with F^H F = gram; its QR factor carries
  // the geometry at full relative accuracy.
  const Eigen::Index rows = 2 * static_cast<Eigen::Index>(basis_size) + 1;
  Eigen::MatrixXcd f(rows, n);
  for (int m = -basis_size; m <= basis_size; ++m) {
    const double md = static_cast<double>(m);
    const double lambda = 1.0 + md * md + md * md * md * md;
    const double scale = 1.0 / std::sqrt(2.0 * kPi * lambda);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double t = g.points[static_cast<std::size_t>(j)];
      f(m + basis_size, j) = scale * cplx{std::cos(m * t), std::sin(m * t)};
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(f);
  Eigen::MatrixXcd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  g.factor = std::move(r);
  return g;
}

double gram_min_eigenvalue(const GramGeometry& g) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g.factor);
  const double smin = svd.singularValues().minCoeff();
  return smin * smin;
}

double delta_distance(const GramGeometry& g, std::size_t i, std::size_t j) {
  // equal to sqrt(G_ii - 2 G_ij + G_jj), but evaluated through the factor
  // so that near-coincident points do not cancel to zero
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(g.gram.rows());
  c(static_cast<Eigen::Index>(i)) += cplx{1.0, 0.0};
  c(static_cast<Eigen::Index>(j)) -= cplx{1.0, 0.0};
  return (g.factor * c).norm();
}

} // namespace dynlab::sobolev
