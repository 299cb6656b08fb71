#pragma once

// Exhaustive and form-restricted search harness. Scans ranges or
// parameterized forms, invokes the detect oracles, validates the
// structural identities on every two-prime hit, and emits records.
//
// Parallel strategy: static block partitioning of the candidate space
// with per-worker record buffers merged by ascending n - determinism
// over peak throughput. The merged output is byte-identical for any
// worker count.

#include <atomic>
#include <map>
#include <thread>

#include "families.hpp"

namespace nearperfect {

class range_mismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A hit violated an identity every valid witness must satisfy, or an
// exhaustive scan contradicts a generator. The run aborts with a report.
class falsification_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class search_mode {
  range,               // factorize and test every n in [lo, hi]
  form_2kpm,           // enumerate n = 2^k p^m lattice points directly
  form_odd_two_prime,  // enumerate odd n = p^a q^b (two distinct odd primes)
};

enum class table_format { csv, json, markdown };

struct search_config {
  search_mode mode = search_mode::range;

  // range mode
  u64 lo = 2;
  u64 hi = 2;

  // form modes; n_limit bounds the constructed value in every mode
  u32 k_max = 1;
  u32 m_min = 1;
  u32 m_max = 1;
  u64 p_max = 3;
  u128 n_limit = u64_max;

  variant var = variant::near(2);
  std::optional<u32> prime_factor_count;  // distinct primes filter
  unsigned jobs = 1;
  table_format format = table_format::csv;  // emitter selection
  const std::atomic<bool>* cancel = nullptr; // honored per candidate

  factorize_options fopt{};
  divisor_limits dlim{};
  subset_sum_limits slim{};
};

struct search_record {
  u64 n = 0;
  u64 sigma_n = 0;
  variant var;
  std::vector<std::vector<u64>> witness_sets;
  factorization fact;
  std::vector<family_member> family_matches;
  u32 unclassified_witnesses = 0;
  bool top_prime_power_omitted = false;
  bool invariants_ok = true;

  std::vector<std::string> family_tags() const {
    std::vector<std::string> tags;
    for (const auto& m : family_matches) tags.push_back(to_string(m.family));
    std::sort(tags.begin(), tags.end());
    tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
    return tags;
  }
};

struct search_summary {
  std::string mode;
  std::string variant_name;
  u64 candidates = 0;
  u64 records = 0;
  u64 overflow_skipped = 0;
  u64 factorization_timeouts = 0;
  u64 non_matching = 0;
  std::vector<u64> timeout_values;  // listed, never dropped silently
  std::map<std::string, u64> family_counts;
  bool cancelled = false;

  // records + overflow_skipped + factorization_timeouts + non_matching
  // always equals candidates.
  bool conserved() const {
    return records + overflow_skipped + factorization_timeouts + non_matching ==
           candidates;
  }
};

struct search_result {
  std::vector<search_record> records;
  search_summary summary;
  search_config config;
};

namespace detail {

// Each witness set contains a divisor divisible by the largest prime
// factor raised to its exponent in n. Reported as an exploratory column,
// not asserted as an invariant.
inline bool top_prime_power_in_every_witness(
    const factorization& f, const std::vector<std::vector<u64>>& sets) {
  if (sets.empty() || f.pairs().empty()) return false;
  const auto& top = f.pairs().back();
  u64 q = *checked_pow(top.prime, top.exponent);  // divides n, always fits
  for (const auto& set : sets) {
    bool any = false;
    for (u64 d : set)
      if (d % q == 0) any = true;
    if (!any) return false;
  }
  return true;
}

struct candidate_2kpm {
  u32 k;
  u32 m;
  u64 p;
};

struct candidate_odd {
  u64 p, q;
  u32 a, b;
  u64 n;
};

inline std::vector<candidate_2kpm> enumerate_2kpm(const search_config& cfg) {
  std::vector<candidate_2kpm> out;
  if (cfg.p_max < 3 || cfg.k_max < 1 || cfg.m_max < cfg.m_min) return out;
  auto primes = sieve_primes(cfg.p_max);
  for (u64 p : primes) {
    if (p == 2) continue;
    u128 pm = 1;
    for (u32 m = 1; m <= cfg.m_max; ++m) {
      pm *= p;
      if (pm * 2 > cfg.n_limit) break;
      if (m < cfg.m_min) continue;
      u128 n = pm;
      for (u32 k = 1; k <= cfg.k_max; ++k) {
        n *= 2;
        if (n > cfg.n_limit) break;
        out.push_back({k, m, p});
      }
    }
  }
  return out;
}

inline std::vector<candidate_odd> enumerate_odd_two_prime(const search_config& cfg) {
  std::vector<candidate_odd> out;
  if (cfg.n_limit < 15) return out;
  u64 bound = u64(std::min<u128>(cfg.n_limit, u64_max));
  auto primes = sieve_primes(bound / 3);
  for (size_t i = 0; i < primes.size(); ++i) {
    u64 p = primes[i];
    if (p == 2) continue;
    if (u128(p) * primes[std::min(i + 1, primes.size() - 1)] > bound) break;
    u128 pa = 1;
    for (u32 a = 1;; ++a) {
      pa *= p;
      if (pa * 3 > bound) break;
      for (size_t j = i + 1; j < primes.size(); ++j) {
        u64 q = primes[j];
        if (pa * q > bound) break;
        u128 nq = pa;
        for (u32 b = 1;; ++b) {
          nq *= q;
          if (nq > bound) break;
          out.push_back({p, q, a, b, u64(nq)});
        }
      }
    }
  }
  return out;
}

struct shard {
  std::vector<search_record> records;
  search_summary tally;
  std::exception_ptr error;
};

// One candidate: factorize/construct, filter, detect, validate, record.
template <typename MakeFactorization>
inline void process_candidate(const search_config& cfg, u64 candidate_n,
                              MakeFactorization&& make, shard& s) {
  ++s.tally.candidates;
  factorization f;
  try {
    f = make();
  } catch (const factorization_timeout&) {
    ++s.tally.factorization_timeouts;
    s.tally.timeout_values.push_back(candidate_n);
    return;
  }
  if (cfg.prime_factor_count && f.distinct_primes() != *cfg.prime_factor_count) {
    ++s.tally.non_matching;
    return;
  }
  search_record rec;
  rec.n = f.value();
  rec.var = cfg.var;
  using kind_t = variant::kind_t;
  try {
    std::vector<witness> witnesses;
    bool matched = false;
    switch (cfg.var.kind) {
      case kind_t::near_perfect:
        witnesses = detect_k_near_perfect(f, cfg.var.k, cfg.dlim);
        matched = !witnesses.empty();
        break;
      case kind_t::deficient_perfect:
        witnesses = detect_2_deficient(f, cfg.dlim);
        matched = !witnesses.empty();
        break;
      case kind_t::hybrid:
        witnesses = detect_hybrid_2_near(f, cfg.dlim);
        matched = !witnesses.empty();
        break;
      case kind_t::pseudoperfect:
        if (is_pseudoperfect(f, cfg.dlim, cfg.slim)) {
          matched = true;
          if (auto w = pseudoperfect_witness(f, cfg.dlim, cfg.slim))
            witnesses.push_back(std::move(*w));
        }
        break;
      case kind_t::weird:
        matched = is_weird(f, cfg.dlim, cfg.slim);
        break;
      case kind_t::abundant:
        matched = classify_abundance(f) == abundance_class::abundant;
        break;
      case kind_t::perfect:
        matched = classify_abundance(f) == abundance_class::perfect;
        break;
      case kind_t::deficient:
        matched = classify_abundance(f) == abundance_class::deficient;
        break;
    }
    if (!matched) {
      ++s.tally.non_matching;
      return;
    }
    rec.sigma_n = witnesses.empty() ? checked_sigma(f) : witnesses.front().sigma_n();
    for (const auto& w : witnesses) rec.witness_sets.push_back(w.omitted());

    auto form = as_two_prime_form(f);
    if (form && cfg.var.kind == kind_t::near_perfect && cfg.var.k == 2) {
      // Every two-prime hit must satisfy the structural identities;
      // a violation is a falsification and aborts the run.
      for (const auto& w : witnesses) {
        auto report = check_two_prime_identities(*form, w);
        if (!report.all())
          throw falsification_error(
              "identity violation on n=" + std::to_string(rec.n) + " (" +
              f.str() + "): sigma_product=" +
              (report.sigma_product_identity ? "ok" : "FAIL") +
              " reduced_sum=" + (report.reduced_sum_identity ? "ok" : "FAIL") +
              " parity=" + (report.parity_rule ? "ok" : "FAIL"));
      }
    }
    if (form && (cfg.var.kind == kind_t::near_perfect ||
                 cfg.var.kind == kind_t::deficient_perfect)) {
      auto cls = classify_witnesses(*form, witnesses);
      rec.family_matches = std::move(cls.matches);
      rec.unclassified_witnesses = u32(cls.unclassified.size());
    }
    rec.top_prime_power_omitted =
        top_prime_power_in_every_witness(f, rec.witness_sets);
    rec.fact = std::move(f);
  } catch (const arith_overflow&) {
    ++s.tally.overflow_skipped;
    return;
  }
  ++s.tally.records;
  for (const auto& tag : rec.family_tags()) ++s.tally.family_counts[tag];
  s.records.push_back(std::move(rec));
}

}  // namespace detail

/// Deterministic record set, ascending n, independent of the worker
/// count. Overflow and factorization-timeout candidates are counted
/// (and timeouts listed) in the summary, never silently dropped.
inline search_result run_search(const search_config& cfg) {
  if (cfg.jobs < 1) throw std::invalid_argument("run_search: jobs must be >= 1");
  if (cfg.mode == search_mode::range && cfg.lo < 2)
    throw std::invalid_argument("run_search: lo must be >= 2");
  if (cfg.mode == search_mode::range && cfg.hi < cfg.lo)
    throw std::invalid_argument("run_search: hi must be >= lo");

  std::vector<detail::candidate_2kpm> lattice;
  std::vector<detail::candidate_odd> odd_lattice;
  u64 total = 0;
  if (cfg.mode == search_mode::range) {
    total = cfg.hi - cfg.lo + 1;
  } else if (cfg.mode == search_mode::form_2kpm) {
    lattice = detail::enumerate_2kpm(cfg);
    total = lattice.size();
  } else {
    odd_lattice = detail::enumerate_odd_two_prime(cfg);
    total = odd_lattice.size();
  }

  unsigned jobs = std::max(1u, cfg.jobs);
  if (u64(jobs) > std::max<u64>(total, 1)) jobs = unsigned(std::max<u64>(total, 1));
  std::vector<detail::shard> shards(jobs);

  auto worker = [&](unsigned wi) {
    detail::shard& s = shards[wi];
    try {
      u64 begin = total * wi / jobs;
      u64 end = total * (wi + 1) / jobs;
      for (u64 i = begin; i < end; ++i) {
        if (cfg.cancel && cfg.cancel->load(std::memory_order_relaxed)) {
          s.tally.cancelled = true;
          break;
        }
        if (cfg.mode == search_mode::range) {
          u64 n = cfg.lo + i;
          detail::process_candidate(
              cfg, n, [&] { return factorize(n, cfg.fopt); }, s);
        } else if (cfg.mode == search_mode::form_2kpm) {
          const auto& c = lattice[size_t(i)];
          detail::process_candidate(
              cfg, 0,
              [&] {
                return factorization({{2, c.k}, {c.p, c.m}});
              },
              s);
        } else {
          const auto& c = odd_lattice[size_t(i)];
          detail::process_candidate(
              cfg, c.n,
              [&] {
                return factorization({{c.p, c.a}, {c.q, c.b}});
              },
              s);
        }
      }
    } catch (...) {
      s.error = std::current_exception();
    }
  };

  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (unsigned wi = 0; wi < jobs; ++wi) threads.emplace_back(worker, wi);
    for (auto& t : threads) t.join();
  }

  for (auto& s : shards)
    if (s.error) std::rethrow_exception(s.error);

  search_result result;
  result.config = cfg;
  auto& sum = result.summary;
  sum.mode = cfg.mode == search_mode::range ? "range"
             : cfg.mode == search_mode::form_2kpm ? "form_2kpm"
                                                  : "form_odd_two_prime";
  sum.variant_name = cfg.var.str();
  for (auto& s : shards) {
    sum.candidates += s.tally.candidates;
    sum.records += s.tally.records;
    sum.overflow_skipped += s.tally.overflow_skipped;
    sum.factorization_timeouts += s.tally.factorization_timeouts;
    sum.non_matching += s.tally.non_matching;
    sum.cancelled = sum.cancelled || s.tally.cancelled;
    for (u64 t : s.tally.timeout_values) sum.timeout_values.push_back(t);
    for (const auto& [tag, c] : s.tally.family_counts) sum.family_counts[tag] += c;
    for (auto& r : s.records) result.records.push_back(std::move(r));
  }
  std::sort(sum.timeout_values.begin(), sum.timeout_values.end());
  std::sort(result.records.begin(), result.records.end(),
            [](const search_record& a, const search_record& b) { return a.n < b.n; });
  return result;
}

/// Outcome of cross-checking a generator against an independent search
/// over the same coverage. Missing = generated member the search did not
/// confirm (soundness bug); extra = search hit outside every family
/// (falsification or bug).
struct verdict {
  bool match = false;
  std::vector<u64> missing;
  std::vector<u64> extra;
  std::vector<u64> confirmed;
};

/// Both inputs must cover the same range: generated members are compared
/// after restriction to [2, bound], and the search must have scanned
/// exactly up to bound. A member is confirmed only when its prescribed
/// omitted divisors appear among the record's witness alternatives.
inline verdict cross_check(const std::vector<family_member>& generated,
                           const search_result& searched, u64 bound) {
  u64 scanned = searched.config.mode == search_mode::range
                    ? searched.config.hi
                    : u64(std::min<u128>(searched.config.n_limit, u64_max));
  if (scanned != bound)
    throw range_mismatch("cross_check: search covered up to " +
                         std::to_string(scanned) + ", expected " +
                         std::to_string(bound));
  std::map<u64, const search_record*> by_n;
  for (const auto& r : searched.records) by_n[r.n] = &r;
  verdict v;
  std::vector<u64> gen_ns;
  for (const auto& m : generated) {
    if (m.n > bound) continue;
    gen_ns.push_back(m.n);
    auto it = by_n.find(m.n);
    bool confirmed =
        it != by_n.end() &&
        std::find(it->second->witness_sets.begin(), it->second->witness_sets.end(),
                  m.omitted) != it->second->witness_sets.end();
    if (!confirmed) v.missing.push_back(m.n);
  }
  std::sort(gen_ns.begin(), gen_ns.end());
  gen_ns.erase(std::unique(gen_ns.begin(), gen_ns.end()), gen_ns.end());
  for (const auto& r : searched.records) {
    if (std::binary_search(gen_ns.begin(), gen_ns.end(), r.n))
      v.confirmed.push_back(r.n);
    else
      v.extra.push_back(r.n);
  }
  std::sort(v.missing.begin(), v.missing.end());
  v.missing.erase(std::unique(v.missing.begin(), v.missing.end()), v.missing.end());
  v.match = v.missing.empty() && v.extra.empty();
  return v;
}

}  // namespace nearperfect
