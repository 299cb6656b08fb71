#pragma once

// Constructive generators and membership classifiers for the classified
// families of two-prime 2-near perfect and 2-deficient perfect numbers:
//
//   T1_Case1..4     n = 2^k p, the four m=1 cases
//   T2_Sporadic     n = 2^k p^2, exactly {18, 36, 200}
//   T4_MersenneCube n = 2^k p^3 with p = 2^{k+1}-1 (Mersenne), omitted {p, p^2}
//   Deficient_M1    n = 2^k p with p = 2^{k+1}+2^a+2^b-1, omitted {2^a, 2^b}
//
// Every generated member replays its defining equation at construction;
// the classifier doubles as a falsification detector (a confirmed witness
// that matches no family is reported as unclassified).

#include "detect.hpp"

namespace nearperfect {

class not_two_prime_form : public std::runtime_error {
 public:
  explicit not_two_prime_form(const factorization& f)
      : std::runtime_error(f.str() + " is not of the form 2^k * p^m"
                                     " with p an odd prime") {}
};

enum class family_id {
  t1_case1,
  t1_case2,
  t1_case3,
  t1_case4,
  t2_sporadic,
  t4_mersenne_cube,
  deficient_m1,
};

inline std::string to_string(family_id id) {
  switch (id) {
    case family_id::t1_case1: return "T1_Case1";
    case family_id::t1_case2: return "T1_Case2";
    case family_id::t1_case3: return "T1_Case3";
    case family_id::t1_case4: return "T1_Case4";
    case family_id::t2_sporadic: return "T2_Sporadic";
    case family_id::t4_mersenne_cube: return "T4_MersenneCube";
    case family_id::deficient_m1: return "Deficient_M1";
  }
  return "?";
}

inline bool is_deficient_family(family_id id) {
  return id == family_id::deficient_m1;
}

/// A member of a classified family: n = 2^k * p^m with its parameters and
/// the omitted divisors the family prescribes.
struct family_member {
  family_id family{};
  u64 n = 0;
  u32 k = 0;
  u32 m = 1;
  u64 p = 0;
  std::optional<u32> a, b;
  std::vector<u64> omitted;

  friend bool operator==(const family_member&, const family_member&) = default;
};

/// Parameters of a member whose n does not fit in 64 bits. These are
/// reported alongside the members, never silently dropped.
struct truncated_member {
  family_id family{};
  u32 k = 0;
  u32 m = 1;
  u64 p = 0;
  std::optional<u32> a, b;

  friend bool operator==(const truncated_member&, const truncated_member&) = default;
};

struct generation {
  std::vector<family_member> members;
  std::vector<truncated_member> truncated;
};

namespace detail {

inline bool is_odd_prime(u64 p) { return p >= 3 && (p & 1) && is_prime(p); }

// Builds the member and replays its defining equation exactly.
inline void add_member(generation& g, family_id id, u32 k, u32 m, u64 p,
                       std::optional<u32> a, std::optional<u32> b,
                       std::vector<u64> omitted) {
  auto pm = checked_pow(p, m);
  auto n = pm ? checked_mul(u64{1} << k, *pm) : std::nullopt;
  if (!n) {
    g.truncated.push_back({id, k, m, p, a, b});
    return;
  }
  factorization f({{2, k}, {p, m}});
  u64 s = checked_sigma(f);
  i128 rhs = i128(*n) * 2;
  for (u64 d : omitted) {
    if (d == 0 || *n % d != 0)
      throw std::logic_error("family member omitted divisor does not divide n");
    rhs += is_deficient_family(id) ? -i128(d) : i128(d);
  }
  if (i128(s) != rhs)
    throw std::logic_error("family member fails its defining equation: n=" +
                           std::to_string(*n));
  std::sort(omitted.begin(), omitted.end());
  g.members.push_back({id, *n, k, m, p, a, b, std::move(omitted)});
}

}  // namespace detail

/// The four n = 2^k p cases, enumerated over k <= k_max and a, b in
/// {0..k}. Candidates whose n exceeds 64 bits go to the truncation list.
///
///   case 1: p = 2^k - 1,                      omitted {1, p}
///   case 2: p = 2^{k+1} - 2^a - 2^b - 1,      omitted {2^a, 2^b}, a < b
///   case 3: p = (2^{k+1} - 2^a - 1)/(1+2^b),  omitted {2^a, 2^b p}
///   case 4: p = (2^{k+1} - 1)/(1+2^a+2^b),    omitted {2^a p, 2^b p}, a < b
///
/// Case 3 skips (a,b) = (0,0): that instance is exactly case 1.
inline generation generate_t1(u32 k_max) {
  if (k_max > 62)
    throw std::invalid_argument("generate_t1: k_max must be <= 62");
  generation g;
  for (u32 k = 1; k <= k_max; ++k) {
    const u64 two_k1 = u64{1} << (k + 1);
    {
      u64 p = (u64{1} << k) - 1;
      if (detail::is_odd_prime(p))
        detail::add_member(g, family_id::t1_case1, k, 1, p, std::nullopt,
                           std::nullopt, {1, p});
    }
    for (u32 a = 0; a <= k; ++a) {
      for (u32 b = a + 1; b <= k; ++b) {
        u64 p = two_k1 - (u64{1} << a) - (u64{1} << b) - 1;
        if (detail::is_odd_prime(p))
          detail::add_member(g, family_id::t1_case2, k, 1, p, a, b,
                             {u64{1} << a, u64{1} << b});
      }
    }
    for (u32 a = 0; a <= k; ++a) {
      u64 num = two_k1 - (u64{1} << a) - 1;
      for (u32 b = 0; b <= k; ++b) {
        if (a == 0 && b == 0) continue;
        u64 den = 1 + (u64{1} << b);
        if (num % den != 0) continue;  // non-members, not near-misses
        u64 p = num / den;
        if (detail::is_odd_prime(p))
          detail::add_member(g, family_id::t1_case3, k, 1, p, a, b,
                             {u64{1} << a, (u64{1} << b) * p});
      }
    }
    for (u32 a = 0; a <= k; ++a) {
      for (u32 b = a + 1; b <= k; ++b) {
        u64 num = two_k1 - 1;
        u64 den = 1 + (u64{1} << a) + (u64{1} << b);
        if (num % den != 0) continue;
        u64 p = num / den;
        if (detail::is_odd_prime(p))
          detail::add_member(g, family_id::t1_case4, k, 1, p, a, b,
                             {(u64{1} << a) * p, (u64{1} << b) * p});
      }
    }
  }
  return g;
}

/// The three sporadic n = 2^k p^2 members: 18, 36, 200. Their omitted
/// divisor sets are derived from the oracle, not hardcoded.
inline generation generate_t2() {
  generation g;
  for (auto [k, p] : {std::pair<u32, u64>{1, 3}, {2, 3}, {3, 5}}) {
    factorization f({{2, k}, {p, 2}});
    auto witnesses = detect_k_near_perfect(f, 2);
    if (witnesses.empty())
      throw std::logic_error("sporadic member is not 2-near perfect");
    detail::add_member(g, family_id::t2_sporadic, k, 2, p, std::nullopt,
                       std::nullopt, witnesses.front().omitted());
  }
  return g;
}

/// The Mersenne-cube family: for each k with p = 2^{k+1}-1 prime,
/// n = 2^k p^3 with omitted divisors {p, p^2}.
inline generation generate_t4(u32 k_max) {
  if (k_max > 62)
    throw std::invalid_argument("generate_t4: k_max must be <= 62");
  generation g;
  for (u32 k = 1; k <= k_max; ++k) {
    u64 p = (u64{1} << (k + 1)) - 1;
    if (!detail::is_odd_prime(p)) continue;
    auto p2 = checked_mul(p, p);
    if (!p2) {
      g.truncated.push_back({family_id::t4_mersenne_cube, k, 3, p,
                             std::nullopt, std::nullopt});
      continue;
    }
    detail::add_member(g, family_id::t4_mersenne_cube, k, 3, p, std::nullopt,
                       std::nullopt, {p, *p2});
  }
  return g;
}

/// The 2-deficient m=1 family: p = 2^{k+1} + 2^a + 2^b - 1 prime with
/// distinct a < b <= k; n = 2^k p with omitted divisors {2^a, 2^b}.
inline generation generate_deficient_m1(u32 k_max) {
  if (k_max > 61)
    throw std::invalid_argument("generate_deficient_m1: k_max must be <= 61");
  generation g;
  for (u32 k = 1; k <= k_max; ++k) {
    for (u32 a = 0; a <= k; ++a) {
      for (u32 b = a + 1; b <= k; ++b) {
        u64 p = (u64{1} << (k + 1)) + (u64{1} << a) + (u64{1} << b) - 1;
        if (detail::is_odd_prime(p))
          detail::add_member(g, family_id::deficient_m1, k, 1, p, a, b,
                             {u64{1} << a, u64{1} << b});
      }
    }
  }
  return g;
}

/// Family memberships of a number, keyed per witness: one n can carry
/// several witness pairs landing in different cases. A confirmed witness
/// matching no family lands in `unclassified` - the falsification signal.
struct classify_result {
  std::vector<family_member> matches;
  std::vector<witness> unclassified;
};

namespace detail {

inline bool is_pow2(u64 x) { return x != 0 && (x & (x - 1)) == 0; }

// Classification of one confirmed 2-near witness of n = 2^k p^m. Divisors
// of 2^k p are 2^i or 2^i p, so at m=1 the witness shape picks the case.
inline void classify_near_witness(const two_prime_form& f, const witness& w,
                                  classify_result& out) {
  u64 n = w.n();
  u64 d1 = w.omitted()[0], d2 = w.omitted()[1];
  if (f.m == 1) {
    if (d1 == 1 && d2 == f.p) {
      out.matches.push_back({family_id::t1_case1, n, f.k, 1, f.p, std::nullopt,
                             std::nullopt, {d1, d2}});
      return;
    }
    bool p1 = d1 % f.p == 0, p2 = d2 % f.p == 0;
    if (!p1 && !p2 && is_pow2(d1) && is_pow2(d2)) {
      out.matches.push_back({family_id::t1_case2, n, f.k, 1, f.p, v2(d1), v2(d2),
                             {d1, d2}});
      return;
    }
    if (p1 != p2) {
      u64 pure = p1 ? d2 : d1;
      u64 mult = p1 ? d1 : d2;
      if (is_pow2(pure) && is_pow2(mult / f.p)) {
        out.matches.push_back({family_id::t1_case3, n, f.k, 1, f.p, v2(pure),
                               v2(mult / f.p), {d1, d2}});
        return;
      }
    }
    if (p1 && p2 && is_pow2(d1 / f.p) && is_pow2(d2 / f.p)) {
      out.matches.push_back({family_id::t1_case4, n, f.k, 1, f.p, v2(d1 / f.p),
                             v2(d2 / f.p), {d1, d2}});
      return;
    }
  } else if (f.m == 2) {
    if (n == 18 || n == 36 || n == 200) {
      out.matches.push_back({family_id::t2_sporadic, n, f.k, 2, f.p,
                             std::nullopt, std::nullopt, {d1, d2}});
      return;
    }
  } else {
    if (f.m == 3 && f.p == (u64{1} << (f.k + 1)) - 1 && d1 == f.p &&
        d2 == f.p * f.p) {
      out.matches.push_back({family_id::t4_mersenne_cube, n, f.k, 3, f.p,
                             std::nullopt, std::nullopt, {d1, d2}});
      return;
    }
  }
  out.unclassified.push_back(w);
}

inline void classify_deficient_witness(const two_prime_form& f, const witness& w,
                                       classify_result& out) {
  u64 d1 = w.omitted()[0], d2 = w.omitted()[1];
  if (f.m == 1 && is_pow2(d1) && is_pow2(d2)) {
    u32 a = v2(d1), b = v2(d2);
    if (f.p == (u64{1} << (f.k + 1)) + d1 + d2 - 1) {
      out.matches.push_back({family_id::deficient_m1, w.n(), f.k, 1, f.p, a, b,
                             {d1, d2}});
      return;
    }
  }
  out.unclassified.push_back(w);
}

}  // namespace detail

/// Classify precomputed witnesses (2-near and/or 2-deficient) of a number
/// of the form 2^k p^m.
inline classify_result classify_witnesses(const two_prime_form& form,
                                          std::span<const witness> witnesses) {
  classify_result r;
  for (const auto& w : witnesses) {
    if (w.var().kind == variant::kind_t::near_perfect && w.var().k == 2)
      detail::classify_near_witness(form, w, r);
    else if (w.var().kind == variant::kind_t::deficient_perfect)
      detail::classify_deficient_witness(form, w, r);
  }
  return r;
}

/// Run the oracles and classify every witness. Throws not_two_prime_form
/// unless f = 2^k p^m with p an odd prime.
inline classify_result classify(const factorization& f,
                                const divisor_limits& lim = {}) {
  auto form = as_two_prime_form(f);
  if (!form) throw not_two_prime_form(f);
  std::vector<witness> all = detect_k_near_perfect(f, 2, lim);
  for (auto& w : detect_2_deficient(f, lim)) all.push_back(std::move(w));
  return classify_witnesses(*form, all);
}

/// Exponent bound satisfied by every Mersenne-cube member:
/// 2^{k+1} < p^2 + 1, in exact arithmetic.
inline bool check_m3_bound(u32 k, u64 p) {
  return (u128{1} << (k + 1)) < u128(p) * p + 1;
}

inline bool check_m3_bound(const family_member& member) {
  if (member.m < 3)
    throw std::invalid_argument("check_m3_bound expects a member with m >= 3");
  return check_m3_bound(member.k, member.p);
}

}  // namespace nearperfect
