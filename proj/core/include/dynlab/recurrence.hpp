#pragma once
// Finite-window recurrence pipeline: the set of progression steps k along
// which the r+1 fold shifted intersection of an observed return-time set
// keeps positive windowed density, the combinatorial containment it
// implies, and the orbit hit sets that produce return-time observations
// in the first place.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dynlab/natset.hpp"
#include "dynlab/shiftlab.hpp"

namespace dynlab::recurrence {

// N ∩ (N - k) ∩ ... ∩ (N - rk): the n with n + ik in N for i = 0..r.
natset::WindowSet shifted_intersection(const natset::WindowSet& n_set, int r, std::int64_t k);

// {k <= k_max : the shifted intersection has windowed Banach ratio >= delta
// at block length s}. The density verdict is the same windowed surrogate
// used everywhere else; delta and s are explicit caller choices.
natset::WindowSet progression_density_set(const natset::WindowSet& n_set, int r,
                                          std::int64_t k_max, std::int64_t s, double delta);

// Regression check of the containment "non-empty shifted intersection
// means k is a joint return step": the set route and a direct scan for a
// witness n with n, n+k, ..., n+rk all in N must agree.
natset::FamilyVerdict<std::int64_t> containment_check(const natset::WindowSet& n_set, int r,
                                                      std::int64_t k);

// Syndetic verdicts are preserved under translation when the observation
// window translates along: holds iff a syndetic verdict for A at the given
// bound implies one for A + n observed from n. Regression test for the
// gap conventions.
natset::FamilyVerdict<std::int64_t> shift_invariance_check(const natset::WindowSet& a,
                                                           std::int64_t n, std::int64_t bound);

struct OrbitHitData {
  std::vector<std::pair<std::string, natset::WindowSet>> hit_sets;
  std::int64_t n_max = 0;
};

// Membership of the simulated orbit in each labelled ball, per step.
OrbitHitData orbit_hit_set(const shiftlab::WeightSpec& w, const shiftlab::TruncatedVector& x,
                           const std::vector<std::pair<std::string, shiftlab::BallSpec>>& balls,
                           std::int64_t n_max);

} // namespace dynlab::recurrence
