#pragma once
// Finite-window combinatorics on subsets of the natural numbers.
//
// A WindowSet is the finite observation of a subset of N below a declared
// horizon. Every verdict produced here is window-relative: "holds-on-window"
// reports the trace of a property on [0, horizon), never the asymptotic
// property itself. BigWindowSet carries exact big-integer elements for
// windows whose horizon exceeds the 64-bit range.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace dynlab::natset {

inline double to_double(std::int64_t v) { return static_cast<double>(v); }
inline double to_double(const mpz_class& v) { return v.get_d(); }

inline std::string int_to_string(std::int64_t v) { return std::to_string(v); }
inline std::string int_to_string(const mpz_class& v) { return v.get_str(); }

// Verdict of a window-level family test. The two states render as
// "holds-on-window" / "fails-on-window" in reports. A failing verdict
// always carries a numeric witness.
template <typename Int>
struct FamilyVerdict {
  bool holds = false;
  std::optional<Int> witness;        // point, run start, or gap start
  std::optional<Int> witness_extent; // run or gap length when meaningful
  std::string detail;

  static FamilyVerdict pass() { return FamilyVerdict{true, std::nullopt, std::nullopt, {}}; }
  static FamilyVerdict pass_at(Int w, std::string d = {}) {
    return FamilyVerdict{true, std::move(w), std::nullopt, std::move(d)};
  }
  static FamilyVerdict fail_at(Int w, std::string d = {}) {
    return FamilyVerdict{false, std::move(w), std::nullopt, std::move(d)};
  }
};

template <typename Int>
const char* verdict_label(const FamilyVerdict<Int>& v) {
  return v.holds ? "holds-on-window" : "fails-on-window";
}

template <typename Int>
class BasicWindowSet {
public:
  BasicWindowSet() = default;

  BasicWindowSet(Int horizon, std::vector<Int> elements)
      : horizon_(std::move(horizon)), elems_(std::move(elements)) {
    if (horizon_ < Int(1)) throw std::invalid_argument("WindowSet: horizon must be positive");
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
    if (!elems_.empty()) {
      if (elems_.front() < Int(0)) throw std::invalid_argument("WindowSet: negative element");
      if (!(elems_.back() < horizon_)) throw std::invalid_argument("WindowSet: element >= horizon");
    }
  }

  const Int& horizon() const { return horizon_; }
  const std::vector<Int>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }

  bool contains(const Int& x) const {
    return std::binary_search(elems_.begin(), elems_.end(), x);
  }

  // Translation by n >= 0 with the horizon enlarged to match.
  BasicWindowSet shifted(const Int& n) const {
    std::vector<Int> out;
    out.reserve(elems_.size());
    for (const Int& e : elems_) out.push_back(e + n);
    return BasicWindowSet(horizon_ + n, std::move(out));
  }

  // The left shift A - m = {a - m : a in A, a >= m}, horizon preserved.
  BasicWindowSet minus(const Int& m) const {
    std::vector<Int> out;
    for (const Int& e : elems_)
      if (!(e < m)) out.push_back(e - m);
    return BasicWindowSet(horizon_, std::move(out));
  }

  BasicWindowSet intersect(const BasicWindowSet& other) const {
    std::vector<Int> out;
    std::set_intersection(elems_.begin(), elems_.end(),
                          other.elems_.begin(), other.elems_.end(),
                          std::back_inserter(out));
    return BasicWindowSet(std::min(horizon_, other.horizon_), std::move(out));
  }

  BasicWindowSet unite(const BasicWindowSet& other) const {
    std::vector<Int> out;
    std::set_union(elems_.begin(), elems_.end(),
                   other.elems_.begin(), other.elems_.end(),
                   std::back_inserter(out));
    return BasicWindowSet(std::max(horizon_, other.horizon_), std::move(out));
  }

  static BasicWindowSet arithmetic_progression(const Int& horizon, const Int& start, const Int& step) {
    if (step < Int(1)) throw std::invalid_argument("arithmetic_progression: step must be >= 1");
    std::vector<Int> out;
    for (Int x = start; x < horizon; x += step) out.push_back(x);
    return BasicWindowSet(horizon, std::move(out));
  }

  static BasicWindowSet full(const Int& horizon) {
    return arithmetic_progression(horizon, Int(0), Int(1));
  }

  bool operator==(const BasicWindowSet& other) const {
    return horizon_ == other.horizon_ && elems_ == other.elems_;
  }

private:
  Int horizon_{1};
  std::vector<Int> elems_;
};

using WindowSet = BasicWindowSet<std::int64_t>;
using BigWindowSet = BasicWindowSet<mpz_class>;

WindowSet random_window_set(std::int64_t horizon, double density, std::uint64_t seed);
WindowSet complement_of(const WindowSet& a);

// The index family k(n, r) = 2^(6^n) - r with 0 <= r <= n, for 1 <= n <= nmax.
// Level n contributes the n+1 consecutive integers 2^(6^n) - n .. 2^(6^n),
// so the family contains arbitrarily long runs as nmax grows.
BigWindowSet knr_window_set(int nmax);
// Same family restricted to nmax <= 2, where all elements fit in 64 bits.
WindowSet knr_window_set_small(int nmax);

// --- gap structure -----------------------------------------------------

template <typename Int>
struct GapStats {
  Int max_gap{0};
  Int gap_start{0}; // where the maximal gap begins (window start for the leading gap)
  FamilyVerdict<Int> verdict;
};

// Maximal gap of A observed on [window_start, horizon). Consecutive
// differences count, as do the boundary gaps before the first element and
// after the last one; the empty set reports the whole window width.
// Syndetic verdict at bound M: holds iff max_gap <= M.
template <typename Int>
GapStats<Int> gap_profile(const BasicWindowSet<Int>& a, const Int& bound,
                          const Int& window_start = Int(0)) {
  if (bound < Int(0)) throw std::invalid_argument("gap_profile: bound must be >= 0");
  GapStats<Int> out;
  const auto& e = a.elements();
  if (e.empty()) {
    out.max_gap = a.horizon() - window_start;
    out.gap_start = window_start;
  } else {
    if (e.front() < window_start)
      throw std::invalid_argument("gap_profile: element before window start");
    out.max_gap = e.front() - window_start;
    out.gap_start = window_start;
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
      Int g = e[i + 1] - e[i];
      if (g > out.max_gap) { out.max_gap = g; out.gap_start = e[i]; }
    }
    Int tail = (a.horizon() - Int(1)) - e.back();
    if (tail > out.max_gap) { out.max_gap = tail; out.gap_start = e.back(); }
  }
  if (out.max_gap <= bound) {
    out.verdict = FamilyVerdict<Int>::pass();
  } else {
    out.verdict = FamilyVerdict<Int>::fail_at(out.gap_start, "gap exceeds bound");
    out.verdict.witness_extent = out.max_gap;
  }
  return out;
}

// Holds iff A contains run_length consecutive integers; witness is the
// start of the first such run.
template <typename Int>
FamilyVerdict<Int> thick_witness(const BasicWindowSet<Int>& a, const Int& run_length) {
  if (run_length < Int(1)) throw std::invalid_argument("thick_witness: run length must be >= 1");
  if (!(run_length < a.horizon()))
    throw std::invalid_argument("thick_witness: window too small");
  const auto& e = a.elements();
  Int run{1};
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i > 0 && e[i] == e[i - 1] + Int(1)) run += Int(1); else run = Int(1);
    if (!(run < run_length)) {
      FamilyVerdict<Int> v = FamilyVerdict<Int>::pass_at(e[i] - (run_length - Int(1)));
      v.witness_extent = run_length;
      return v;
    }
  }
  FamilyVerdict<Int> v = FamilyVerdict<Int>::fail_at(Int(0), "no run of requested length");
  v.witness_extent = run_length;
  return v;
}

// Piecewise-syndetic trace: holds iff some block of the window of length
// run_length is covered by elements of A with consecutive gaps <= gap.
// Equivalently, a maximal gap<=g run of A spans at least run_length.
template <typename Int>
FamilyVerdict<Int> pw_syndetic(const BasicWindowSet<Int>& a, const Int& gap, const Int& run_length) {
  if (gap < Int(1) || run_length < Int(1))
    throw std::invalid_argument("pw_syndetic: gap and run length must be >= 1");
  const auto& e = a.elements();
  if (e.empty()) return FamilyVerdict<Int>::fail_at(Int(0), "empty set");
  std::size_t run_begin = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i > 0 && e[i] - e[i - 1] > gap) run_begin = i;
    Int span = e[i] - e[run_begin] + Int(1);
    if (!(span < run_length)) {
      FamilyVerdict<Int> v = FamilyVerdict<Int>::pass_at(e[run_begin]);
      v.witness_extent = span;
      return v;
    }
  }
  return FamilyVerdict<Int>::fail_at(e.front(), "no dense block of requested length");
}

// --- Banach density surrogate ------------------------------------------

struct BanachPoint {
  std::int64_t s = 0;
  std::int64_t alpha = 0; // max number of elements in any length-s block
  double ratio = 0.0;     // alpha / s
};

// Windowed surrogate of the upper Banach density profile: for each block
// length s, the maximal count of elements of A inside a length-s block of
// the window. The maximum is attained at a block starting on an element,
// so a two-pointer sweep over the element list suffices.
template <typename Int>
std::vector<BanachPoint> banach_profile(const BasicWindowSet<Int>& a, std::int64_t s_max) {
  if (s_max < 1 || !(Int(s_max) < a.horizon()))
    throw std::invalid_argument("banach_profile: need 1 <= s_max < horizon");
  const auto& e = a.elements();
  std::vector<BanachPoint> out;
  out.reserve(static_cast<std::size_t>(s_max));
  for (std::int64_t s = 1; s <= s_max; ++s) {
    std::int64_t best = 0;
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < e.size(); ++hi) {
      while (e[hi] - e[lo] > Int(s - 1)) ++lo;
      best = std::max<std::int64_t>(best, static_cast<std::int64_t>(hi - lo + 1));
    }
    out.push_back({s, best, static_cast<double>(best) / static_cast<double>(s)});
  }
  return out;
}

// Positive-density verdict at block length s with threshold delta.
template <typename Int>
FamilyVerdict<Int> banach_positive(const BasicWindowSet<Int>& a, std::int64_t s, double delta = 0.05) {
  auto prof = banach_profile(a, s);
  const BanachPoint& p = prof.back();
  if (p.ratio >= delta) {
    FamilyVerdict<Int> v = FamilyVerdict<Int>::pass_at(Int(p.alpha), "alpha at block length s");
    return v;
  }
  FamilyVerdict<Int> v = FamilyVerdict<Int>::fail_at(Int(p.alpha), "ratio below threshold");
  return v;
}

// --- derived sets -------------------------------------------------------

// {b - b' : b, b' in B, b > b'}, horizon preserved. Sets with fewer than
// two elements give the empty result.
template <typename Int>
BasicWindowSet<Int> difference_set(const BasicWindowSet<Int>& b) {
  const auto& e = b.elements();
  std::vector<Int> out;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = i + 1; j < e.size(); ++j)
      out.push_back(e[j] - e[i]);
  return BasicWindowSet<Int>(b.horizon(), std::move(out));
}

template <typename Int>
struct FiniteSums {
  BasicWindowSet<Int> set;
  bool clipped = false; // some subset sum exceeded the horizon
};

// Sums over non-empty subsets of the first `depth` generators, clipped to
// the horizon. Clipping is flagged, not an error.
template <typename Int>
FiniteSums<Int> finite_sums(const std::vector<Int>& generators, int depth, const Int& horizon) {
  if (depth < 1 || depth > static_cast<int>(generators.size()))
    throw std::invalid_argument("finite_sums: depth must be in [1, |generators|]");
  if (depth > 24) throw std::invalid_argument("finite_sums: depth capped at 24");
  for (const Int& g : generators)
    if (!(g > Int(0))) throw std::invalid_argument("finite_sums: generators must be positive");
  std::vector<Int> out;
  bool clipped = false;
  const std::uint32_t masks = 1u << depth;
  for (std::uint32_t mask = 1; mask < masks; ++mask) {
    Int sum{0};
    for (int i = 0; i < depth; ++i)
      if (mask & (1u << i)) sum += generators[static_cast<std::size_t>(i)];
    if (sum < horizon) out.push_back(sum); else clipped = true;
  }
  return {BasicWindowSet<Int>(horizon, std::move(out)), clipped};
}

// {m : i*m in B for every 1 <= i <= r}; the first coordinate of the tuples
// (m, 2m, ..., rm) that land componentwise in B. Horizon preserved.
template <typename Int>
BasicWindowSet<Int> stretch_intersection(const BasicWindowSet<Int>& b, int r) {
  if (r < 1) throw std::invalid_argument("stretch_intersection: r must be >= 1");
  std::vector<Int> out;
  const Int top = b.horizon() - Int(1);
  for (const Int& m : b.elements()) {
    bool all = true;
    for (int i = 2; i <= r && all; ++i) {
      if (m > Int(0) && top / Int(i) < m) { all = false; break; } // i*m >= horizon
      if (!b.contains(m * Int(i))) all = false;
    }
    if (all) out.push_back(m);
  }
  return BasicWindowSet<Int>(b.horizon(), std::move(out));
}

// Holds iff A meets every listed member; the witness of a failure is the
// index of the first member missed.
template <typename Int>
FamilyVerdict<Int> dual_meets(const BasicWindowSet<Int>& a,
                              const std::vector<BasicWindowSet<Int>>& members) {
  if (members.empty()) throw std::invalid_argument("dual_meets: members must be non-empty");
  for (std::size_t idx = 0; idx < members.size(); ++idx) {
    bool meets = false;
    for (const Int& x : a.elements())
      if (members[idx].contains(x)) { meets = true; break; }
    if (!meets)
      return FamilyVerdict<Int>::fail_at(Int(static_cast<long>(idx)), "disjoint from member");
  }
  return FamilyVerdict<Int>::pass();
}

// Difference-set membership surrogate: search for a seed B with
// difference_set(B) contained in A, greedily first and then exhaustively,
// with the seed size capped at 6. Returns the seed when found.
std::optional<WindowSet> delta_seed_search(const WindowSet& a, int seed_size,
                                           std::size_t node_budget = 1u << 20);

} // namespace dynlab::natset
