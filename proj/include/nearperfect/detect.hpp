#pragma once

// Brute-force oracles: decide, with full witness sets, whether n is
// k-near perfect, 2-deficient perfect, hybrid 2-near perfect,
// pseudoperfect, abundant, or weird. Everything here is pure and
// replays its own defining equation before emitting a witness.

#include "divisors.hpp"

namespace nearperfect {

enum class abundance_class { deficient, perfect, abundant };

inline std::string to_string(abundance_class c) {
  switch (c) {
    case abundance_class::deficient: return "deficient";
    case abundance_class::perfect: return "perfect";
    case abundance_class::abundant: return "abundant";
  }
  return "?";
}

/// Which defining predicate a witness or search certifies.
struct variant {
  enum class kind_t {
    near_perfect,       // sigma(n) = 2n + d_1 + ... + d_k
    deficient_perfect,  // sigma(n) = 2n - d_1 - d_2
    hybrid,             // sigma(n) = 2n + d_1 - d_2
    pseudoperfect,      // n = sum of a subset of proper divisors
    weird,              // abundant but not pseudoperfect
    abundant,
    perfect,
    deficient,
  };

  kind_t kind = kind_t::near_perfect;
  u32 k = 2;  // divisor count, used by near_perfect only

  static variant near(u32 k) { return {kind_t::near_perfect, k}; }
  static variant deficient_perfect2() { return {kind_t::deficient_perfect, 2}; }
  static variant hybrid2() { return {kind_t::hybrid, 2}; }
  static variant pseudoperfect() { return {kind_t::pseudoperfect, 0}; }
  static variant weird() { return {kind_t::weird, 0}; }
  static variant abundance(abundance_class c) {
    switch (c) {
      case abundance_class::abundant: return {kind_t::abundant, 0};
      case abundance_class::perfect: return {kind_t::perfect, 0};
      default: return {kind_t::deficient, 0};
    }
  }

  std::string str() const {
    switch (kind) {
      case kind_t::near_perfect: return "near" + std::to_string(k);
      case kind_t::deficient_perfect: return "deficient2";
      case kind_t::hybrid: return "hybrid2";
      case kind_t::pseudoperfect: return "pseudoperfect";
      case kind_t::weird: return "weird";
      case kind_t::abundant: return "abundant";
      case kind_t::perfect: return "perfect";
      case kind_t::deficient: return "deficient";
    }
    return "?";
  }

  friend bool operator==(const variant&, const variant&) = default;
};

/// A verified instance: n satisfies the variant's defining equation with
/// the stored divisors. The constructor replays the equation exactly and
/// refuses to build an inconsistent witness.
///
/// For near/deficient variants `omitted` is sorted ascending; for the
/// hybrid variant it is the ordered pair (added, subtracted); for
/// pseudoperfect it is the subset of proper divisors summing to n.
class witness {
 public:
  witness(u64 n, variant v, std::vector<u64> omitted, u64 sigma_n)
      : n_(n), var_(v), omitted_(std::move(omitted)), sigma_(sigma_n) {
    validate();
  }

  u64 n() const noexcept { return n_; }
  const variant& var() const noexcept { return var_; }
  const std::vector<u64>& omitted() const noexcept { return omitted_; }
  u64 sigma_n() const noexcept { return sigma_; }

  friend bool operator==(const witness&, const witness&) = default;

 private:
  void validate() const {
    using kind_t = variant::kind_t;
    auto fail = [&](const std::string& why) {
      throw std::logic_error("witness replay failed for n=" + std::to_string(n_) +
                             " (" + var_.str() + "): " + why);
    };
    for (u64 d : omitted_) {
      if (d == 0 || n_ % d != 0) fail("entry does not divide n");
    }
    i128 lhs = i128(sigma_);
    switch (var_.kind) {
      case kind_t::near_perfect: {
        if (omitted_.size() != var_.k) fail("wrong divisor count");
        if (!std::is_sorted(omitted_.begin(), omitted_.end())) fail("not sorted");
        i128 rhs = i128(n_) * 2;
        for (size_t i = 0; i < omitted_.size(); ++i) {
          if (i > 0 && omitted_[i] == omitted_[i - 1]) fail("divisors not distinct");
          rhs += omitted_[i];
        }
        if (lhs != rhs) fail("defining equation does not hold");
        break;
      }
      case kind_t::deficient_perfect: {
        if (omitted_.size() != 2) fail("wrong divisor count");
        if (omitted_[0] >= omitted_[1]) fail("divisors not distinct ascending");
        if (lhs != i128(n_) * 2 - omitted_[0] - omitted_[1])
          fail("defining equation does not hold");
        break;
      }
      case kind_t::hybrid: {
        if (omitted_.size() != 2) fail("wrong divisor count");
        if (omitted_[0] == omitted_[1]) fail("divisors not distinct");
        if (lhs != i128(n_) * 2 + omitted_[0] - omitted_[1])
          fail("defining equation does not hold");
        break;
      }
      case kind_t::pseudoperfect: {
        u128 sum = 0;
        for (size_t i = 0; i < omitted_.size(); ++i) {
          if (omitted_[i] >= n_) fail("subset entry is not a proper divisor");
          if (i > 0 && omitted_[i] <= omitted_[i - 1]) fail("not sorted distinct");
          sum += omitted_[i];
        }
        if (sum != n_) fail("subset does not sum to n");
        break;
      }
      default:
        break;  // weird/abundance witnesses carry no divisors
    }
  }

  u64 n_;
  variant var_;
  std::vector<u64> omitted_;
  u64 sigma_;
};

inline void require_candidate(u64 n) {
  if (n < 2)
    throw std::invalid_argument("n must be >= 2 (n=1 has a single divisor)");
}

inline u64 checked_sigma(const factorization& f) {
  auto s = sigma(f);
  if (!s)
    throw arith_overflow("sigma(" + std::to_string(f.value()) +
                         ") exceeds 64-bit range");
  return *s;
}

/// Trichotomy by the sign of sigma(n) - 2n.
inline abundance_class classify_abundance(const factorization& f) {
  u128 s = detail::sigma_u128(f);
  u128 twice = u128(f.value()) * 2;
  if (s > twice) return abundance_class::abundant;
  if (s == twice) return abundance_class::perfect;
  return abundance_class::deficient;
}

inline abundance_class classify_abundance(u64 n, const factorize_options& opt = {}) {
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  return classify_abundance(factorize(n, opt));
}

/// All witnesses for sigma(n) = 2n + d_1 + ... + d_k, k in {1,2,3}.
/// Empty result means n is not k-near perfect.
inline std::vector<witness> detect_k_near_perfect(const factorization& f, u32 k,
                                                  const divisor_limits& lim = {}) {
  require_candidate(f.value());
  if (k < 1 || k > 3)
    throw std::invalid_argument("near-perfect detection supports k in {1,2,3}");
  u64 n = f.value();
  u64 s = checked_sigma(f);
  std::vector<witness> out;
  i128 excess = i128(s) - i128(n) * 2;
  if (excess <= 0) return out;
  variant var = variant::near(k);
  if (k == 1) {
    // The single omitted divisor is forced to equal the excess.
    if (u128(excess) <= n && n % u64(excess) == 0)
      out.emplace_back(n, var, std::vector<u64>{u64(excess)}, s);
    return out;
  }
  auto d = divisors_of(f, lim);
  if (k == 2) {
    for (auto [a, b] : find_pairs_with_sum(d, excess))
      out.emplace_back(n, var, std::vector<u64>{a, b}, s);
  } else {
    for (const auto& t : find_triples_with_sum(d, excess))
      out.emplace_back(n, var, std::vector<u64>{t[0], t[1], t[2]}, s);
  }
  return out;
}

inline std::vector<witness> detect_k_near_perfect(u64 n, u32 k,
                                                  const factorize_options& opt = {},
                                                  const divisor_limits& lim = {}) {
  require_candidate(n);
  return detect_k_near_perfect(factorize(n, opt), k, lim);
}

/// All witnesses for sigma(n) = 2n - d_1 - d_2 (distinct divisors).
/// Empty when 2n - sigma(n) <= 0.
inline std::vector<witness> detect_2_deficient(const factorization& f,
                                               const divisor_limits& lim = {}) {
  require_candidate(f.value());
  u64 n = f.value();
  u64 s = checked_sigma(f);
  std::vector<witness> out;
  i128 defect = i128(n) * 2 - i128(s);
  if (defect <= 0) return out;
  auto d = divisors_of(f, lim);
  for (auto [a, b] : find_pairs_with_sum(d, defect))
    out.emplace_back(n, variant::deficient_perfect2(), std::vector<u64>{a, b}, s);
  return out;
}

inline std::vector<witness> detect_2_deficient(u64 n,
                                               const factorize_options& opt = {},
                                               const divisor_limits& lim = {}) {
  require_candidate(n);
  return detect_2_deficient(factorize(n, opt), lim);
}

/// All ordered pairs (added, subtracted) with sigma(n) = 2n + d_1 - d_2,
/// d_1 != d_2, ascending by the subtracted divisor. (d_1,d_2) and a
/// coincidental (d_2,d_1) solution count as distinct witnesses.
inline std::vector<witness> detect_hybrid_2_near(const factorization& f,
                                                 const divisor_limits& lim = {}) {
  require_candidate(f.value());
  u64 n = f.value();
  u64 s = checked_sigma(f);
  std::vector<witness> out;
  i128 e = i128(s) - i128(n) * 2;  // d_1 - d_2; zero would force d_1 = d_2
  if (e == 0) return out;
  auto d = divisors_of(f, lim);
  for (u64 sub : d.values) {
    i128 add = i128(sub) + e;
    if (add < 1 || add > i128(n)) continue;
    u64 a = u64(add);
    if (a == sub || n % a != 0) continue;
    out.emplace_back(n, variant::hybrid2(), std::vector<u64>{a, sub}, s);
  }
  return out;
}

inline std::vector<witness> detect_hybrid_2_near(u64 n,
                                                 const factorize_options& opt = {},
                                                 const divisor_limits& lim = {}) {
  require_candidate(n);
  return detect_hybrid_2_near(factorize(n, opt), lim);
}

/// n equals the sum of some subset of its proper divisors.
inline bool is_pseudoperfect(const factorization& f,
                             const divisor_limits& dlim = {},
                             const subset_sum_limits& slim = {}) {
  require_candidate(f.value());
  auto d = divisors_of(f, dlim);
  std::span<const u64> proper(d.values.data(), d.values.size() - 1);
  return has_subset_with_sum(proper, f.value(), slim);
}

/// One subset of proper divisors summing to n, when n is pseudoperfect
/// and the reconstruction table fits the configured byte budget.
inline std::optional<witness> pseudoperfect_witness(const factorization& f,
                                                    const divisor_limits& dlim = {},
                                                    const subset_sum_limits& slim = {}) {
  require_candidate(f.value());
  auto d = divisors_of(f, dlim);
  std::span<const u64> proper(d.values.data(), d.values.size() - 1);
  auto subset = find_subset_with_sum(proper, f.value(), slim);
  if (!subset) return std::nullopt;
  return witness(f.value(), variant::pseudoperfect(), std::move(*subset),
                 checked_sigma(f));
}

/// Abundant but not pseudoperfect.
inline bool is_weird(const factorization& f, const divisor_limits& dlim = {},
                     const subset_sum_limits& slim = {}) {
  require_candidate(f.value());
  if (classify_abundance(f) != abundance_class::abundant) return false;
  return !is_pseudoperfect(f, dlim, slim);
}

inline bool is_weird(u64 n, const factorize_options& opt = {},
                     const divisor_limits& dlim = {},
                     const subset_sum_limits& slim = {}) {
  require_candidate(n);
  return is_weird(factorize(n, opt), dlim, slim);
}

/// n = 2^k * p^m with p an odd prime, k >= 1.
struct two_prime_form {
  u32 k = 0;
  u64 p = 0;
  u32 m = 0;
};

inline std::optional<two_prime_form> as_two_prime_form(const factorization& f) {
  const auto& pp = f.pairs();
  if (pp.size() != 2 || pp[0].prime != 2) return std::nullopt;
  return two_prime_form{pp[0].exponent, pp[1].prime, pp[1].exponent};
}

/// Structural identities every valid 2-near witness of an n = 2^k p^m
/// must satisfy; checked in exact 128-bit arithmetic on every search hit.
struct two_prime_identity_report {
  bool sigma_product_identity = false;  // (2^{k+1}-1) sigma(p^m) = 2^{k+1} p^m + d1 + d2
  bool reduced_sum_identity = false;    // (2^{k+1}-p) sigma(p^{m-1}) = 1 + d1 + d2
  bool parity_rule = false;             // m odd: same parity; m even: opposite
  bool all() const {
    return sigma_product_identity && reduced_sum_identity && parity_rule;
  }
};

inline two_prime_identity_report check_two_prime_identities(const two_prime_form& f,
                                                            const witness& w) {
  if (w.var().kind != variant::kind_t::near_perfect || w.var().k != 2 ||
      w.omitted().size() != 2)
    throw std::invalid_argument("identity check expects a 2-near witness");
  two_prime_identity_report r;
  u64 d1 = w.omitted()[0], d2 = w.omitted()[1];
  i128 two_k1 = i128(1) << (f.k + 1);
  i128 pm = 1, geo = 0, geo_lower = 0;
  for (u32 i = 0; i < f.m; ++i) {
    geo_lower += pm;
    pm *= f.p;
  }
  geo = geo_lower + pm;  // 1 + p + ... + p^m
  r.sigma_product_identity = (two_k1 - 1) * geo == two_k1 * pm + d1 + d2;
  r.reduced_sum_identity = (two_k1 - f.p) * geo_lower == i128(1) + d1 + d2;
  bool same_parity = ((d1 ^ d2) & 1) == 0;
  r.parity_rule = (f.m % 2 == 1) ? same_parity : !same_parity;
  return r;
}

}  // namespace nearperfect
