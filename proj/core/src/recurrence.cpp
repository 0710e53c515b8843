#include "dynlab/recurrence.hpp"

#include <stdexcept>

namespace dynlab::recurrence {

namespace {

std::vector<char> membership_mask(const natset::WindowSet& s) {
  std::vector<char> mask(static_cast<std::size_t>(s.horizon()), 0);
  for (std::int64_t e : s.elements()) mask[static_cast<std::size_t>(e)] = 1;
  return mask;
}

} // namespace

natset::WindowSet shifted_intersection(const natset::WindowSet& n_set, int r, std::int64_t k) {
  if (r < 0) throw std::invalid_argument("shifted_intersection: r must be >= 0");
  if (k < 0) throw std::invalid_argument("shifted_intersection: k must be >= 0");
  std::vector<std::int64_t> out;
  for (std::int64_t n : n_set.elements()) {
    bool all = true;
    for (int i = 1; i <= r && all; ++i) {
      std::int64_t shifted = n + static_cast<std::int64_t>(i) * k;
      if (shifted >= n_set.horizon() || !n_set.contains(shifted)) all = false;
    }
    if (all) out.push_back(n);
  }
  return natset::WindowSet(n_set.horizon(), std::move(out));
}

natset::WindowSet progression_density_set(const natset::WindowSet& n_set, int r,
                                          std::int64_t k_max, std::int64_t s, double delta) {
  if (r < 1) throw std::invalid_argument("progression_density_set: r must be >= 1");
  if (k_max < 0) throw std::invalid_argument("progression_density_set: k_max must be >= 0");
  if (s < 1 || s >= n_set.horizon())
    throw std::invalid_argument("progression_density_set: need 1 <= s < horizon");
  if (!(delta > 0.0) || delta > 1.0)
    throw std::invalid_argument("progression_density_set: delta must be in (0, 1]");

  const auto mask = membership_mask(n_set);
  const std::int64_t horizon = n_set.horizon();
  std::vector<std::int64_t> out;

  for (std::int64_t k = 0; k <= k_max; ++k) {
    std::vector<std::int64_t> inter;
    for (std::int64_t n : n_set.elements()) {
      bool all = true;
      for (int i = 1; i <= r && all; ++i) {
        std::int64_t shifted = n + static_cast<std::int64_t>(i) * k;
        if (shifted >= horizon || !mask[static_cast<std::size_t>(shifted)]) all = false;
      }
      if (all) inter.push_back(n);
    }
    if (inter.empty()) continue;
    // max count of intersection elements in any block of length s
    std::int64_t best = 0;
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < inter.size(); ++hi) {
      while (inter[hi] - inter[lo] > s - 1) ++lo;
      best = std::max<std::int64_t>(best, static_cast<std::int64_t>(hi - lo + 1));
    }
    if (static_cast<double>(best) / static_cast<double>(s) >= delta) out.push_back(k);
  }
  return natset::WindowSet(k_max + 1, std::move(out));
}

natset::FamilyVerdict<std::int64_t> containment_check(const natset::WindowSet& n_set, int r,
                                                      std::int64_t k) {
  using V = natset::FamilyVerdict<std::int64_t>;
  if (k < 1) throw std::invalid_argument("containment_check: k must be >= 1");
  if (r < 1) throw std::invalid_argument("containment_check: r must be >= 1");

  natset::WindowSet inter = shifted_intersection(n_set, r, k);

  // Independent scan for the first progression start.
  std::int64_t scan_witness = -1;
  for (std::int64_t n : n_set.elements()) {
    bool all = true;
    for (int i = 1; i <= r && all; ++i) {
      std::int64_t shifted = n + static_cast<std::int64_t>(i) * k;
      if (shifted >= n_set.horizon() || !n_set.contains(shifted)) all = false;
    }
    if (all) { scan_witness = n; break; }
  }

  if (inter.empty()) {
    if (scan_witness < 0) return V::pass(); // vacuously: no progression, nothing to record
    return V::fail_at(scan_witness, "scan found a progression the set route missed");
  }
  if (scan_witness == inter.elements().front())
    return V::pass_at(scan_witness, "progression start");
  return V::fail_at(inter.elements().front(), "set route and scan disagree");
}

natset::FamilyVerdict<std::int64_t> shift_invariance_check(const natset::WindowSet& a,
                                                           std::int64_t n, std::int64_t bound) {
  using V = natset::FamilyVerdict<std::int64_t>;
  if (n < 0) throw std::invalid_argument("shift_invariance_check: n must be >= 0");
  const bool before = natset::gap_profile<std::int64_t>(a, bound).verdict.holds;
  if (!before) return V::pass_at(0, "premise fails, implication vacuous");
  natset::WindowSet shifted = a.shifted(n);
  auto after = natset::gap_profile<std::int64_t>(shifted, bound, n);
  if (after.verdict.holds) return V::pass_at(n, "verdict preserved");
  V out = V::fail_at(after.gap_start, "shift broke the syndetic verdict");
  out.witness_extent = after.max_gap;
  return out;
}

OrbitHitData orbit_hit_set(const shiftlab::WeightSpec& w, const shiftlab::TruncatedVector& x,
                           const std::vector<std::pair<std::string, shiftlab::BallSpec>>& balls,
                           std::int64_t n_max) {
  if (n_max < 0) throw std::invalid_argument("orbit_hit_set: n_max must be >= 0");
  auto orbit = shiftlab::shift_orbit(w, x, n_max);
  OrbitHitData out;
  out.n_max = n_max;
  for (const auto& [label, ball] : balls) {
    std::vector<std::int64_t> hits;
    for (std::int64_t n = 0; n <= n_max; ++n)
      if (shiftlab::ball_contains(ball, orbit[static_cast<std::size_t>(n)])) hits.push_back(n);
    out.hit_sets.emplace_back(label, natset::WindowSet(n_max + 1, std::move(hits)));
  }
  return out;
}

} // namespace dynlab::recurrence
