#pragma once

// Divisor enumeration, factorization of concrete integers, and the
// combinatorial sub-searches (pair/triple/subset sums over divisors)
// every detector reduces to.

#include <array>
#include <cassert>
#include <cmath>
#include <span>
#include <utility>

#include "core_arith.hpp"

namespace nearperfect {

class factorization_timeout : public limit_error {
 public:
  explicit factorization_timeout(u64 n)
      : limit_error("factorize(" + std::to_string(n) +
                    "): effort bound exhausted") {}
};

class too_many_divisors : public limit_error {
 public:
  too_many_divisors(u64 count, u64 cap)
      : limit_error("divisor count " + std::to_string(count) +
                    " exceeds cap " + std::to_string(cap)) {}
};

class sum_domain_too_large : public limit_error {
 public:
  sum_domain_too_large(u64 states, u64 cap)
      : limit_error("subset-sum domain " + std::to_string(states) +
                    " exceeds cap " + std::to_string(cap)) {}
};

struct factorize_options {
  u64 trial_bound = 10'000'000;       // fallback trial-division ceiling
  u64 rho_iteration_cap = 20'000'000; // total rho iterations per call
};

struct divisor_limits {
  u64 max_divisors = u64{1} << 20;
};

struct subset_sum_limits {
  u64 max_sum_states = u64{1} << 31;  // bits in the reachability set
};

inline u64 isqrt_u64(u64 n) {
  u64 r = u64(std::sqrt(double(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n && (r + 1) != 0) ++r;
  return r;
}

namespace detail {

// Brent-cycle rho. Returns a nontrivial factor of odd composite n,
// or 0 once the shared iteration budget runs out.
inline u64 rho_brent(u64 n, u64& budget) {
  for (u64 c = 1; budget > 0; ++c) {
    auto step = [&](u64 x) { return u64((u128(x) * x + c) % n); };
    u64 y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0;
    const u64 batch = 128;
    while (g == 1 && budget > 0) {
      x = y;
      for (u64 i = 0; i < r && budget > 0; ++i, --budget) y = step(y);
      for (u64 k = 0; k < r && g == 1 && budget > 0; k += batch) {
        ys = y;
        u64 lim = std::min(batch, r - k);
        for (u64 i = 0; i < lim && budget > 0; ++i, --budget) {
          y = step(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
      r *= 2;
    }
    if (g == n) {
      // The batched gcd collapsed; retrace one step at a time.
      g = 1;
      while (g == 1 && budget > 0) {
        ys = step(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
        --budget;
      }
    }
    if (g != 1 && g != n) return g;
  }
  return 0;
}

inline void split_composite(u64 m, std::vector<u64>& primes,
                            const factorize_options& opt, u64 original_n) {
  u64 budget = opt.rho_iteration_cap;
  std::vector<u64> stack{m};
  while (!stack.empty()) {
    u64 x = stack.back();
    stack.pop_back();
    if (x == 1) continue;
    if (is_prime(x)) {
      primes.push_back(x);
      continue;
    }
    u64 s = isqrt_u64(x);
    if (s * s == x) {
      stack.push_back(s);
      stack.push_back(s);
      continue;
    }
    u64 f = rho_brent(x, budget);
    if (f == 0) {
      // Last resort: exhaustive trial division up to the configured bound.
      u64 d = 3, found = 0;
      for (; d <= opt.trial_bound && d * d <= x; d += 2) {
        if (x % d == 0) {
          found = d;
          break;
        }
      }
      if (found == 0) throw factorization_timeout(original_n);
      f = found;
    }
    stack.push_back(f);
    stack.push_back(x / f);
  }
}

}  // namespace detail

/// Canonical factorization of a concrete integer: trial division by small
/// primes, then a rho-style splitter with an iteration cap, then trial
/// division up to the configured bound. Exhausting all of it signals
/// factorization_timeout.
inline factorization factorize(u64 n, const factorize_options& opt = {}) {
  if (n == 0) throw std::invalid_argument("factorize: argument must be >= 1");
  std::vector<prime_power> pairs;
  u64 m = n;
  auto strip = [&](u64 p) {
    u32 e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e > 0) pairs.push_back({p, e});
  };
  strip(2);
  strip(3);
  strip(5);
  static constexpr u32 wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
  u64 d = 7;
  u32 w = 0;
  const u64 small_bound = std::min<u64>(opt.trial_bound, 4096);
  while (d <= small_bound && d * d <= m) {
    strip(d);
    d += wheel[w];
    w = (w + 1) & 7;
  }
  if (m > 1) {
    if (d * d > m || is_prime(m)) {
      pairs.push_back({m, 1});
    } else {
      std::vector<u64> rest;
      detail::split_composite(m, rest, opt, n);
      std::sort(rest.begin(), rest.end());
      for (size_t i = 0; i < rest.size();) {
        size_t j = i;
        while (j < rest.size() && rest[j] == rest[i]) ++j;
        pairs.push_back({rest[i], u32(j - i)});
        i = j;
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const prime_power& a, const prime_power& b) { return a.prime < b.prime; });
  return factorization(std::move(pairs));
}

/// Complete ascending divisor list plus the factorization it came from.
struct divisor_list {
  std::vector<u64> values;
  factorization source;
};

inline divisor_list divisors_of(const factorization& f,
                                const divisor_limits& lim = {}) {
  u64 count = f.divisor_count();
  if (count > lim.max_divisors) throw too_many_divisors(count, lim.max_divisors);
  std::vector<u64> d;
  d.reserve(size_t(count));
  d.push_back(1);
  for (const auto& pp : f.pairs()) {
    size_t base = d.size();
    u64 pk = 1;
    for (u32 i = 0; i < pp.exponent; ++i) {
      pk *= pp.prime;  // divides f.value(), cannot overflow
      for (size_t j = 0; j < base; ++j) d.push_back(d[j] * pk);
    }
  }
  std::sort(d.begin(), d.end());
#ifndef NDEBUG
  assert(d.size() == count);
  assert(d.front() == 1 && d.back() == f.value());
  u128 sum = 0;
  for (u64 x : d) {
    assert(f.value() % x == 0);
    sum += x;
  }
  assert(sum == detail::sigma_u128(f));
#endif
  return {std::move(d), f};
}

/// sigma(n) - 2n, exact; negative for deficient numbers.
using sum_target = i128;

/// All unordered pairs {d1, d2}, d1 != d2, of divisors summing to target,
/// ascending by smaller element. Sorted two-pointer scan, so the output
/// order is deterministic. Requires target > 0.
inline std::vector<std::pair<u64, u64>> find_pairs_with_sum(
    const divisor_list& d, sum_target target) {
  if (target <= 0)
    throw std::invalid_argument("find_pairs_with_sum: target must be positive");
  std::vector<std::pair<u64, u64>> out;
  const auto& v = d.values;
  if (v.size() < 2) return out;
  size_t lo = 0, hi = v.size() - 1;
  u128 t = u128(target);
  while (lo < hi) {
    u128 s = u128(v[lo]) + v[hi];
    if (s == t) {
      out.emplace_back(v[lo], v[hi]);
      ++lo;
      --hi;
    } else if (s < t) {
      ++lo;
    } else {
      --hi;
    }
  }
  return out;
}

/// All 3-element divisor subsets summing to target, lexicographic order.
/// Requires target > 0.
inline std::vector<std::array<u64, 3>> find_triples_with_sum(
    const divisor_list& d, sum_target target) {
  if (target <= 0)
    throw std::invalid_argument("find_triples_with_sum: target must be positive");
  std::vector<std::array<u64, 3>> out;
  const auto& v = d.values;
  if (v.size() < 3) return out;
  u128 t = u128(target);
  for (size_t i = 0; i + 2 < v.size(); ++i) {
    if (u128(v[i]) + v[i + 1] + v[i + 2] > t) break;
    u128 rest = t - v[i];
    size_t lo = i + 1, hi = v.size() - 1;
    while (lo < hi) {
      u128 s = u128(v[lo]) + v[hi];
      if (s == rest) {
        out.push_back({v[i], v[lo], v[hi]});
        ++lo;
        --hi;
      } else if (s < rest) {
        ++lo;
      } else {
        --hi;
      }
    }
  }
  return out;
}

/// Exact subset-sum decision over positive values: bitset dynamic
/// programming over the sum domain [0, target]. Beyond the configured
/// state cap it signals rather than approximating.
inline bool has_subset_with_sum(std::span<const u64> values, u64 target,
                                const subset_sum_limits& lim = {}) {
  if (target == 0)
    throw std::invalid_argument("has_subset_with_sum: target must be positive");
  u64 states = target + 1;
  if (states > lim.max_sum_states)
    throw sum_domain_too_large(states, lim.max_sum_states);
  u128 total = 0;
  for (u64 v : values) {
    if (v == 0)
      throw std::invalid_argument("has_subset_with_sum: values must be positive");
    if (v == target) return true;
    if (v < target) total += v;
  }
  if (total < target) return false;
  size_t words = size_t(states + 63) / 64;
  std::vector<u64> bits(words, 0);
  bits[0] = 1;
  auto test = [&](u64 i) { return (bits[size_t(i / 64)] >> (i % 64)) & 1; };
  for (u64 v : values) {
    if (v > target) continue;
    size_t ws = size_t(v / 64);
    u32 bs = u32(v % 64);
    for (size_t i = words; i-- > ws;) {
      u64 x = bits[i - ws] << bs;
      if (bs != 0 && i - ws > 0) x |= bits[i - ws - 1] >> (64 - bs);
      bits[i] |= x;
    }
    if (test(target)) return true;
  }
  return test(target);
}

/// Like has_subset_with_sum but reconstructs one qualifying subset
/// (ascending). Uses an index-tracking table, 4 bytes per sum state;
/// the cap is scaled to keep the same byte budget as the bitset DP.
inline std::optional<std::vector<u64>> find_subset_with_sum(
    std::span<const u64> values, u64 target, const subset_sum_limits& lim = {}) {
  if (target == 0)
    throw std::invalid_argument("find_subset_with_sum: target must be positive");
  u64 states = target + 1;
  if (states > lim.max_sum_states / 32)
    throw sum_domain_too_large(states, lim.max_sum_states / 32);
  std::vector<std::int32_t> parent(size_t(states), -1);
  std::vector<u64> reachable{0};
  std::vector<std::uint8_t> seen(size_t(states), 0);
  seen[0] = 1;
  for (size_t idx = 0; idx < values.size(); ++idx) {
    u64 v = values[idx];
    if (v == 0)
      throw std::invalid_argument("find_subset_with_sum: values must be positive");
    if (v > target) continue;
    size_t base = reachable.size();
    for (size_t j = 0; j < base; ++j) {
      u64 s = reachable[j] + v;
      if (s > target || seen[size_t(s)]) continue;
      seen[size_t(s)] = 1;
      parent[size_t(s)] = std::int32_t(idx);
      reachable.push_back(s);
      if (s == target) {
        std::vector<u64> subset;
        u64 cur = target;
        while (cur > 0) {
          u64 w = values[size_t(parent[size_t(cur)])];
          subset.push_back(w);
          cur -= w;
        }
        std::sort(subset.begin(), subset.end());
        return subset;
      }
    }
  }
  return std::nullopt;
}

}  // namespace nearperfect
