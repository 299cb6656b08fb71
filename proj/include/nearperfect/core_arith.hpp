#pragma once

// Overflow-safe 64-bit arithmetic and the multiplicative functions
// (sigma, 2-adic valuation, exact primality) the rest of the library
// builds on. All operations are pure; intermediate products use 128-bit
// precision and are range-checked, never wrapped.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nearperfect {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr u64 u64_max = ~u64{0};

// A configured effort or capacity bound was exhausted.
class limit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A checked computation does not fit in 64 bits.
class arith_overflow : public std::runtime_error {
 public:
  arith_overflow() : std::runtime_error("value exceeds 64-bit range") {}
  explicit arith_overflow(const std::string& what) : std::runtime_error(what) {}
};

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(char('0' + int(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

inline std::string to_string(i128 v) {
  if (v < 0) return "-" + to_string(u128(-v));
  return to_string(u128(v));
}

/// a + b, or nullopt when the sum exceeds 64 bits.
constexpr std::optional<u64> checked_add(u64 a, u64 b) noexcept {
  u64 s = a + b;
  if (s < a) return std::nullopt;
  return s;
}

/// a * b, or nullopt when the product exceeds 64 bits.
/// Overflow is reported distinctly from a zero product.
constexpr std::optional<u64> checked_mul(u64 a, u64 b) noexcept {
  if (a == 0 || b == 0) return u64{0};
  u128 p = u128(a) * b;
  if (p > u64_max) return std::nullopt;
  return u64(p);
}

/// base^exp by repeated checked multiplication; 0^0 = 1 by convention.
constexpr std::optional<u64> checked_pow(u64 base, u32 exp) noexcept {
  if (exp == 0) return u64{1};
  if (base <= 1) return base;
  u64 r = 1;
  for (u32 i = 0; i < exp; ++i) {
    auto p = checked_mul(r, base);
    if (!p) return std::nullopt;
    r = *p;
  }
  return r;
}

/// 2-adic valuation: the largest e with 2^e | n. Requires n >= 1.
inline u32 v2(u64 n) {
  if (n == 0) throw std::invalid_argument("v2: argument must be positive");
  return u32(std::countr_zero(n));
}

inline u64 mul_mod(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

inline u64 pow_mod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

namespace detail {

inline bool miller_rabin_composite(u64 n, u64 a, u64 d, int s) {
  u64 x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int i = 1; i < s; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

}  // namespace detail

/// Exact primality for every 64-bit input (no probabilistic error):
/// deterministic Miller-Rabin over a witness set known to cover 2^64.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  if (n < 41 * 41) return true;
  u64 d = n - 1;
  int s = std::countr_zero(d);
  d >>= s;
  // Sinclair's 7-base set, deterministic for all n < 2^64.
  for (u64 a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull,
                1795265022ull}) {
    a %= n;
    if (a == 0) continue;
    if (detail::miller_rabin_composite(n, a, d, s)) return false;
  }
  return true;
}

/// Ascending primes <= limit (simple Eratosthenes sieve).
inline std::vector<u64> sieve_primes(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  std::vector<std::uint8_t> composite(size_t(limit) + 1, 0);
  for (u64 i = 2; i * i <= limit; ++i) {
    if (composite[size_t(i)]) continue;
    for (u64 j = i * i; j <= limit; j += i) composite[size_t(j)] = 1;
  }
  for (u64 i = 2; i <= limit; ++i)
    if (!composite[size_t(i)]) primes.push_back(i);
  return primes;
}

/// sigma(p^m) = 1 + p + ... + p^m, by iterated checked add/mul.
/// The closed form (p^{m+1}-1)/(p-1) is deliberately avoided: p^{m+1}
/// can overflow even when the sum itself fits.
inline std::optional<u64> sigma_prime_power(u64 p, u32 m) {
  u64 sum = 1, term = 1;
  for (u32 i = 0; i < m; ++i) {
    auto t = checked_mul(term, p);
    if (!t) return std::nullopt;
    term = *t;
    auto s = checked_add(sum, term);
    if (!s) return std::nullopt;
    sum = *s;
  }
  return sum;
}

struct prime_power {
  u64 prime = 0;
  u32 exponent = 0;
  friend bool operator==(const prime_power&, const prime_power&) = default;
};

/// Canonical factorization: strictly increasing verified primes, exponents
/// >= 1, reconstructed value fits in 64 bits. The constructor re-verifies
/// everything rather than trusting callers.
class factorization {
 public:
  factorization() = default;  // the empty factorization of 1

  explicit factorization(std::vector<prime_power> pairs) : pairs_(std::move(pairs)) {
    u64 prev = 0;
    u64 value = 1;
    for (const auto& pp : pairs_) {
      if (pp.exponent == 0)
        throw std::invalid_argument("factorization: exponent must be >= 1");
      if (pp.prime <= prev)
        throw std::invalid_argument("factorization: primes must be strictly increasing");
      if (!is_prime(pp.prime))
        throw std::invalid_argument("factorization: " + std::to_string(pp.prime) +
                                    " is not prime");
      prev = pp.prime;
      auto q = checked_pow(pp.prime, pp.exponent);
      if (!q) throw arith_overflow("factorization value exceeds 64-bit range");
      auto v = checked_mul(value, *q);
      if (!v) throw arith_overflow("factorization value exceeds 64-bit range");
      value = *v;
    }
    value_ = value;
  }

  const std::vector<prime_power>& pairs() const noexcept { return pairs_; }
  u64 value() const noexcept { return value_; }
  std::size_t distinct_primes() const noexcept { return pairs_.size(); }

  u64 divisor_count() const noexcept {
    u64 c = 1;
    for (const auto& pp : pairs_) c *= pp.exponent + 1;
    return c;
  }

  std::string str() const {
    if (pairs_.empty()) return "1";
    std::string s;
    for (const auto& pp : pairs_) {
      if (!s.empty()) s += '*';
      s += std::to_string(pp.prime);
      if (pp.exponent > 1) s += '^' + std::to_string(pp.exponent);
    }
    return s;
  }

  friend bool operator==(const factorization&, const factorization&) = default;

 private:
  std::vector<prime_power> pairs_;
  u64 value_ = 1;
};

/// sigma(n) from the factorization, multiplicative; sigma(1) = 1.
inline std::optional<u64> sigma(const factorization& f) {
  u64 r = 1;
  for (const auto& pp : f.pairs()) {
    auto s = sigma_prime_power(pp.prime, pp.exponent);
    if (!s) return std::nullopt;
    auto m = checked_mul(r, *s);
    if (!m) return std::nullopt;
    r = *m;
  }
  return r;
}

namespace detail {

// sigma(n) in 128 bits; never overflows for n < 2^64 (sigma(n) < 2^70).
inline u128 sigma_u128(const factorization& f) {
  u128 r = 1;
  for (const auto& pp : f.pairs()) {
    u128 sum = 1, term = 1;
    for (u32 i = 0; i < pp.exponent; ++i) {
      term *= pp.prime;
      sum += term;
    }
    r *= sum;
  }
  return r;
}

}  // namespace detail

}  // namespace nearperfect
