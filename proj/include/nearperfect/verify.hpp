#pragma once

// Cross-checks each constructive family against an independent
// exhaustive search over the same coverage: the generator and the
// oracle must agree exactly, and every hit must carry the shape the
// classification prescribes.

#include "search.hpp"

namespace nearperfect {

enum class theorem_id { t1, t2, t4, odd_exclusion, deficient };

inline std::string to_string(theorem_id t) {
  switch (t) {
    case theorem_id::t1: return "t1";
    case theorem_id::t2: return "t2";
    case theorem_id::t4: return "t4";
    case theorem_id::odd_exclusion: return "odd";
    case theorem_id::deficient: return "deficient";
  }
  return "?";
}

struct verify_options {
  unsigned jobs = 1;
  // Optional lattice caps; 0 = derive an exhaustive cap from the bound.
  u32 k_max = 0;
  u32 m_max = 0;
  u64 p_max = 0;
  const std::atomic<bool>* cancel = nullptr;
};

struct verify_report {
  theorem_id theorem{};
  u64 bound = 0;
  verdict v;
  std::vector<std::string> failures;  // shape/identity violations on hits
  search_summary summary;

  bool ok() const { return v.match && failures.empty(); }
};

namespace detail {

inline u32 floor_log2(u64 x) { return x ? u32(63 - std::countl_zero(x)) : 0; }

// Largest m with 3^m * 2 <= bound.
inline u32 max_exponent_base3(u64 bound) {
  u32 m = 0;
  u128 v = 2;
  while (v * 3 <= bound) {
    v *= 3;
    ++m;
  }
  return m;
}

inline u64 icbrt(u64 n) {
  u64 r = u64(std::cbrt(double(n)));
  while (r > 0 && u128(r) * r * r > n) --r;
  while (u128(r + 1) * (r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace detail

/// Verify one classification theorem at the given bound by independent
/// generator-vs-search cross-check plus per-hit shape assertions.
inline verify_report verify_theorem(theorem_id theorem, u64 bound,
                                    const verify_options& opt = {}) {
  if (bound < 2) throw std::invalid_argument("verify: bound must be >= 2");
  verify_report rep;
  rep.theorem = theorem;
  rep.bound = bound;

  search_config cfg;
  cfg.jobs = opt.jobs;
  cfg.cancel = opt.cancel;
  cfg.n_limit = bound;
  std::vector<family_member> generated;

  switch (theorem) {
    case theorem_id::t1: {
      u32 k_auto = std::max<u32>(1, detail::floor_log2(std::max<u64>(bound / 3, 2)));
      generated = generate_t1(opt.k_max ? opt.k_max : std::min<u32>(k_auto, 62)).members;
      cfg.mode = search_mode::form_2kpm;
      cfg.k_max = opt.k_max ? opt.k_max : std::min<u32>(k_auto, 62);
      cfg.m_min = cfg.m_max = 1;
      cfg.p_max = opt.p_max ? opt.p_max : std::max<u64>(bound / 2, 3);
      cfg.var = variant::near(2);
      break;
    }
    case theorem_id::t2: {
      generated = generate_t2().members;
      cfg.mode = search_mode::form_2kpm;
      cfg.k_max = opt.k_max ? opt.k_max
                            : std::max<u32>(1, detail::floor_log2(std::max<u64>(bound / 9, 2)));
      cfg.m_min = cfg.m_max = 2;
      cfg.p_max = opt.p_max ? opt.p_max : std::max<u64>(isqrt_u64(bound / 2), 3);
      cfg.var = variant::near(2);
      break;
    }
    case theorem_id::t4: {
      u32 k_auto = std::max<u32>(1, detail::floor_log2(std::max<u64>(bound / 27, 2)));
      u32 k_max = opt.k_max ? opt.k_max : std::min<u32>(k_auto, 62);
      generated = generate_t4(k_max).members;
      cfg.mode = search_mode::form_2kpm;
      cfg.k_max = k_max;
      cfg.m_min = 3;
      cfg.m_max = opt.m_max ? opt.m_max
                            : std::max<u32>(3, detail::max_exponent_base3(bound));
      cfg.p_max = opt.p_max ? opt.p_max : std::max<u64>(detail::icbrt(bound / 2), 3);
      cfg.var = variant::near(2);
      break;
    }
    case theorem_id::odd_exclusion: {
      cfg.mode = search_mode::form_odd_two_prime;
      cfg.var = variant::near(2);
      break;
    }
    case theorem_id::deficient: {
      u32 k_auto = std::max<u32>(1, detail::floor_log2(std::max<u64>(bound / 3, 2)));
      u32 k_max = opt.k_max ? opt.k_max : std::min<u32>(k_auto, 61);
      generated = generate_deficient_m1(k_max).members;
      cfg.mode = search_mode::form_2kpm;
      cfg.k_max = k_max;
      cfg.m_min = 1;
      cfg.m_max = opt.m_max ? opt.m_max
                            : std::max<u32>(1, detail::max_exponent_base3(bound));
      cfg.p_max = opt.p_max ? opt.p_max : std::max<u64>(bound / 2, 3);
      cfg.var = variant::deficient_perfect2();
      break;
    }
  }

  auto result = run_search(cfg);
  rep.summary = result.summary;

  // Per-hit shape assertions.
  for (const auto& r : result.records) {
    auto form = as_two_prime_form(r.fact);
    switch (theorem) {
      case theorem_id::t1:
      case theorem_id::deficient:
        if (r.unclassified_witnesses > 0)
          rep.failures.push_back("n=" + std::to_string(r.n) +
                                 ": witness matches no classified case");
        break;
      case theorem_id::t2:
        if (r.n != 18 && r.n != 36 && r.n != 200)
          rep.failures.push_back("n=" + std::to_string(r.n) +
                                 ": unexpected member with m=2");
        break;
      case theorem_id::t4: {
        bool shape_ok = form && form->m == 3 &&
                        form->p == (u64{1} << (form->k + 1)) - 1 &&
                        r.witness_sets.size() == 1 &&
                        r.witness_sets[0] ==
                            std::vector<u64>{form->p, form->p * form->p};
        if (!shape_ok)
          rep.failures.push_back("n=" + std::to_string(r.n) +
                                 ": hit does not match the Mersenne-cube form");
        else if (!check_m3_bound(form->k, form->p))
          rep.failures.push_back("n=" + std::to_string(r.n) +
                                 ": exponent bound 2^{k+1} < p^2+1 violated");
        break;
      }
      case theorem_id::odd_exclusion:
        rep.failures.push_back("n=" + std::to_string(r.n) +
                               ": odd two-prime 2-near perfect number found");
        break;
    }
  }

  rep.v = cross_check(generated, result, bound);
  return rep;
}

}  // namespace nearperfect
