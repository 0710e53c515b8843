#include "dynlab/natset.hpp"

#include <functional>

namespace dynlab::natset {

WindowSet random_window_set(std::int64_t horizon, double density, std::uint64_t seed) {
  if (horizon < 1) throw std::invalid_argument("random_window_set: horizon must be positive");
  if (density < 0.0 || density > 1.0)
    throw std::invalid_argument("random_window_set: density must be in [0, 1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::int64_t> out;
  for (std::int64_t x = 0; x < horizon; ++x)
    if (coin(rng) < density) out.push_back(x);
  return WindowSet(horizon, std::move(out));
}

WindowSet complement_of(const WindowSet& a) {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(a.horizon()) - a.size());
  std::size_t i = 0;
  const auto& e = a.elements();
  for (std::int64_t x = 0; x < a.horizon(); ++x) {
    if (i < e.size() && e[i] == x) { ++i; continue; }
    out.push_back(x);
  }
  return WindowSet(a.horizon(), std::move(out));
}

namespace {

mpz_class pow2(unsigned long exponent) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, exponent);
  return r;
}

unsigned long six_to(int n) {
  unsigned long e = 1;
  for (int i = 0; i < n; ++i) e *= 6;
  return e;
}

} // namespace

BigWindowSet knr_window_set(int nmax) {
  if (nmax < 1 || nmax > 3) throw std::invalid_argument("knr_window_set: nmax must be in [1, 3]");
  std::vector<mpz_class> elems;
  for (int n = 1; n <= nmax; ++n) {
    mpz_class base = pow2(six_to(n));
    for (int r = 0; r <= n; ++r) elems.push_back(base - r);
  }
  mpz_class horizon = pow2(six_to(nmax)) + 1;
  return BigWindowSet(horizon, std::move(elems));
}

WindowSet knr_window_set_small(int nmax) {
  if (nmax < 1 || nmax > 2)
    throw std::invalid_argument("knr_window_set_small: nmax must be 1 or 2 (use knr_window_set beyond)");
  std::vector<std::int64_t> elems;
  for (int n = 1; n <= nmax; ++n) {
    std::int64_t base = std::int64_t(1) << six_to(n); // 2^6, 2^36
    for (int r = 0; r <= n; ++r) elems.push_back(base - r);
  }
  std::int64_t horizon = (std::int64_t(1) << six_to(nmax)) + 1;
  return WindowSet(horizon, std::move(elems));
}

std::optional<WindowSet> delta_seed_search(const WindowSet& a, int seed_size,
                                           std::size_t node_budget) {
  if (seed_size < 2) throw std::invalid_argument("delta_seed_search: seed size must be >= 2");
  if (seed_size > 6) throw std::invalid_argument("delta_seed_search: seed size capped at 6");

  const auto& cand = a.elements(); // candidate increments; b - 0 must lie in A
  auto extends = [&](const std::vector<std::int64_t>& seed, std::int64_t next) {
    for (std::int64_t b : seed)
      if (!a.contains(next - b)) return false;
    return true;
  };

  // Greedy pass: start at 0, absorb the smallest admissible candidates.
  std::vector<std::int64_t> seed{0};
  for (std::int64_t c : cand) {
    if (c == 0) continue;
    if (extends(seed, c)) {
      seed.push_back(c);
      if (static_cast<int>(seed.size()) == seed_size)
        return WindowSet(a.horizon(), seed);
    }
  }

  // Exhaustive pass with a node budget.
  std::size_t nodes = 0;
  std::vector<std::int64_t> stack{0};
  std::function<bool(std::size_t)> dfs = [&](std::size_t from) -> bool {
    if (static_cast<int>(stack.size()) == seed_size) return true;
    for (std::size_t i = from; i < cand.size(); ++i) {
      if (++nodes > node_budget) return false;
      std::int64_t c = cand[i];
      if (c <= stack.back()) continue;
      if (!extends(stack, c)) continue;
      stack.push_back(c);
      if (dfs(i + 1)) return true;
      stack.pop_back();
    }
    return false;
  };
  if (dfs(0)) return WindowSet(a.horizon(), stack);
  return std::nullopt;
}

} // namespace dynlab::natset
