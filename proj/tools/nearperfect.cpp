// Command-line front end: check a number, classify it, generate the
// classified families, run searches, and verify each classification
// against an independent exhaustive search.
//
// Exit codes: 0 = success/verified, 1 = falsification or mismatch found,
// 2 = usage or limit error.

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <nearperfect/nearperfect.hpp>

namespace np = nearperfect;

namespace {

std::atomic<bool> g_cancel{false};

void on_signal(int) { g_cancel.store(true); }

// Numbers accept underscore separators for readability: 1_000_000.
np::u64 parse_u64(const std::string& raw, const std::string& flag) {
  std::string digits;
  for (char c : raw) {
    if (c == '_') continue;
    if (c < '0' || c > '9')
      throw CLI::ValidationError(flag, "expected an unsigned integer");
    digits += c;
  }
  if (digits.empty()) throw CLI::ValidationError(flag, "expected an unsigned integer");
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(digits.c_str(), &end, 10);
  if (errno == ERANGE || end != digits.c_str() + digits.size())
    throw CLI::ValidationError(flag, "value out of 64-bit range");
  return v;
}

np::variant parse_variant(const std::string& name, np::u32 k) {
  if (name == "near") return np::variant::near(k);
  if (name == "deficient") return np::variant::deficient_perfect2();
  if (name == "hybrid") return np::variant::hybrid2();
  if (name == "pseudoperfect") return np::variant::pseudoperfect();
  if (name == "weird") return np::variant::weird();
  if (name == "abundant") return {np::variant::kind_t::abundant, 0};
  if (name == "perfect") return {np::variant::kind_t::perfect, 0};
  throw CLI::ValidationError("--variant", "unknown variant: " + name);
}

unsigned default_jobs() {
  if (const char* env = std::getenv("NEARPERFECT_JOBS")) {
    try {
      unsigned long v = std::stoul(env);
      if (v >= 1) return unsigned(v);
    } catch (...) {
    }
  }
  return 1;
}

std::string witness_str(const np::witness& w) {
  std::string s;
  if (w.var().kind == np::variant::kind_t::hybrid) {
    s = "(+" + std::to_string(w.omitted()[0]) + ",-" +
        std::to_string(w.omitted()[1]) + ")";
    return s;
  }
  s = "{";
  for (size_t i = 0; i < w.omitted().size(); ++i) {
    if (i) s += ",";
    s += std::to_string(w.omitted()[i]);
  }
  s += "}";
  return s;
}

int run_check(np::u64 n, const std::string& variant_name, np::u32 k) {
  if (n < 2) {
    std::cerr << "error: n must be >= 2\n";
    return 2;
  }
  auto f = np::factorize(n);
  auto abundance = np::classify_abundance(f);
  std::cout << "n = " << n << " = " << f.str() << "\n";
  auto s = np::sigma(f);
  if (s)
    std::cout << "sigma(n) = " << *s << "  (2n = " << np::to_string(np::u128(n) * 2)
              << ")  abundance: " << np::to_string(abundance) << "\n";
  else
    std::cout << "sigma(n) exceeds 64-bit range\n";

  auto var = parse_variant(variant_name, k);
  using kind_t = np::variant::kind_t;
  switch (var.kind) {
    case kind_t::near_perfect: {
      auto ws = np::detect_k_near_perfect(f, k);
      std::cout << "near-perfect witnesses (k=" << k << "):";
      for (const auto& w : ws) std::cout << " " << witness_str(w);
      std::cout << (ws.empty() ? " none" : "") << "\n";
      return ws.empty() ? 1 : 0;
    }
    case kind_t::deficient_perfect: {
      auto ws = np::detect_2_deficient(f);
      std::cout << "2-deficient witnesses:";
      for (const auto& w : ws) std::cout << " " << witness_str(w);
      std::cout << (ws.empty() ? " none" : "") << "\n";
      return ws.empty() ? 1 : 0;
    }
    case kind_t::hybrid: {
      auto ws = np::detect_hybrid_2_near(f);
      std::cout << "hybrid witnesses (added,subtracted):";
      for (const auto& w : ws) std::cout << " " << witness_str(w);
      std::cout << (ws.empty() ? " none" : "") << "\n";
      return ws.empty() ? 1 : 0;
    }
    case kind_t::pseudoperfect: {
      bool yes = np::is_pseudoperfect(f);
      std::cout << "pseudoperfect: " << (yes ? "yes" : "no");
      if (yes) {
        if (auto w = np::pseudoperfect_witness(f))
          std::cout << "  subset " << witness_str(*w);
      }
      std::cout << "\n";
      return yes ? 0 : 1;
    }
    case kind_t::weird: {
      bool yes = np::is_weird(f);
      std::cout << "weird: " << (yes ? "yes" : "no") << "\n";
      return yes ? 0 : 1;
    }
    case kind_t::abundant:
      return abundance == np::abundance_class::abundant ? 0 : 1;
    case kind_t::perfect:
      return abundance == np::abundance_class::perfect ? 0 : 1;
    default:
      return abundance == np::abundance_class::deficient ? 0 : 1;
  }
}

int run_classify(np::u64 n) {
  if (n < 2) {
    std::cerr << "error: n must be >= 2\n";
    return 2;
  }
  auto f = np::factorize(n);
  std::cout << "n = " << n << " = " << f.str() << "\n";
  auto result = np::classify(f);
  if (result.matches.empty() && result.unclassified.empty()) {
    std::cout << "no family membership (not 2-near perfect or 2-deficient perfect)\n";
    return 0;
  }
  for (const auto& m : result.matches) {
    std::cout << to_string(m.family) << "  k=" << m.k << " m=" << m.m
              << " p=" << m.p;
    if (m.a) std::cout << " a=" << *m.a;
    if (m.b) std::cout << " b=" << *m.b;
    std::cout << "  omitted {";
    for (size_t i = 0; i < m.omitted.size(); ++i)
      std::cout << (i ? "," : "") << m.omitted[i];
    std::cout << "}\n";
  }
  for (const auto& w : result.unclassified)
    std::cout << "UNCLASSIFIED witness " << witness_str(w)
              << " - matches no family (falsification)\n";
  return result.unclassified.empty() ? 0 : 1;
}

struct output_target {
  std::ofstream file;
  std::ostream* os = &std::cout;

  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path, std::ios::binary);
    if (!file) throw std::ios_base::failure("cannot open " + path);
    os = &file;
  }
};

int run_generate(const std::string& family, np::u32 k_max,
                 const std::string& format, const std::string& out_path) {
  np::generation g;
  if (family == "t1")
    g = np::generate_t1(k_max);
  else if (family == "t2")
    g = np::generate_t2();
  else if (family == "t4")
    g = np::generate_t4(k_max);
  else if (family == "deficient")
    g = np::generate_deficient_m1(k_max);
  else {
    std::cerr << "error: unknown family '" << family
              << "' (expected t1, t2, t4, deficient)\n";
    return 2;
  }
  output_target target;
  target.open(out_path);
  np::emit_family_table(g.members, np::parse_table_format(format), *target.os);
  if (!g.truncated.empty()) {
    std::cerr << "note: " << g.truncated.size()
              << " member(s) exceed the 64-bit range and were truncated:";
    for (const auto& t : g.truncated) {
      std::cerr << " (k=" << t.k << ",p=" << t.p << ",m=" << t.m;
      if (t.a) std::cerr << ",a=" << *t.a;
      if (t.b) std::cerr << ",b=" << *t.b;
      std::cerr << ")";
    }
    std::cerr << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2-near perfect number toolkit: oracles, classified families,"
               " exhaustive searches"};
  app.require_subcommand(1);
  std::signal(SIGINT, on_signal);

  std::function<int()> action;

  // check ------------------------------------------------------------
  auto* check = app.add_subcommand("check", "test one number against an oracle");
  {
    auto n_raw = std::make_shared<std::string>();
    auto variant_name = std::make_shared<std::string>("near");
    auto k = std::make_shared<np::u32>(2);
    check->add_option("n", *n_raw, "number to test")->required();
    check->add_option("--variant", *variant_name,
                      "near|deficient|hybrid|pseudoperfect|weird|abundant|perfect");
    check->add_option("--k", *k, "divisor count for --variant near (1..3)");
    check->callback([=, &action] {
      action = [=] { return run_check(parse_u64(*n_raw, "n"), *variant_name, *k); };
    });
  }

  // classify ----------------------------------------------------------
  auto* classify = app.add_subcommand("classify", "family membership of a number");
  {
    auto n_raw = std::make_shared<std::string>();
    classify->add_option("n", *n_raw, "number of the form 2^k * p^m")->required();
    classify->callback([=, &action] {
      action = [=] { return run_classify(parse_u64(*n_raw, "n")); };
    });
  }

  // generate ----------------------------------------------------------
  auto* generate = app.add_subcommand("generate", "emit a classified family");
  {
    auto family = std::make_shared<std::string>();
    auto k_max = std::make_shared<np::u32>(12);
    auto format = std::make_shared<std::string>("csv");
    auto out = std::make_shared<std::string>();
    generate->add_option("--family", *family, "t1|t2|t4|deficient")->required();
    generate->add_option("--k-max", *k_max, "largest exponent of 2");
    generate->add_option("--format", *format, "csv|json|markdown");
    generate->add_option("--out", *out, "output file (default stdout)");
    generate->callback([=, &action] {
      action = [=] { return run_generate(*family, *k_max, *format, *out); };
    });
  }

  // search ------------------------------------------------------------
  auto* search = app.add_subcommand("search", "scan a range or a parameterized form");
  {
    auto lo = std::make_shared<std::string>();
    auto hi = std::make_shared<std::string>();
    auto form = std::make_shared<std::string>();
    auto k_max = std::make_shared<np::u32>(20);
    auto m_min = std::make_shared<np::u32>(1);
    auto m_max = std::make_shared<np::u32>(1);
    auto p_max = std::make_shared<std::string>("1000000");
    auto n_max = std::make_shared<std::string>();
    auto variant_name = std::make_shared<std::string>("near");
    auto count = std::make_shared<np::u32>(2);
    auto factors = std::make_shared<np::u32>(0);
    auto jobs = std::make_shared<unsigned>(default_jobs());
    auto format = std::make_shared<std::string>("csv");
    auto out = std::make_shared<std::string>();
    search->add_option("--lo", *lo, "range start (>= 2)");
    search->add_option("--hi", *hi, "range end, inclusive");
    search->add_option("--form", *form, "2kpm (n = 2^k p^m) | oddpq (odd p^a q^b)");
    search->add_option("--k-max", *k_max, "form 2kpm: largest exponent of 2");
    search->add_option("--m-min", *m_min, "form 2kpm: smallest exponent of p");
    search->add_option("--m-max", *m_max, "form 2kpm: largest exponent of p");
    search->add_option("--p-max", *p_max, "form 2kpm: largest odd prime");
    search->add_option("--n-max", *n_max, "cap on the constructed value");
    search->add_option("--variant", *variant_name,
                       "near|deficient|hybrid|pseudoperfect|weird|abundant|perfect");
    search->add_option("--count", *count, "omitted divisor count for near (1..3)");
    search->add_option("--factors", *factors, "keep only n with this many distinct primes");
    search->add_option("--jobs", *jobs, "worker threads (default $NEARPERFECT_JOBS or 1)");
    search->add_option("--format", *format, "csv|json|markdown");
    search->add_option("--out", *out, "record stream file (default stdout)");
    search->callback([=, &action] {
      action = [=] {
        bool range_mode = !lo->empty() || !hi->empty();
        bool form_mode = !form->empty();
        if (range_mode == form_mode) {
          std::cerr << "error: select exactly one of --lo/--hi or --form\n";
          return 2;
        }
        np::search_config cfg;
        cfg.var = parse_variant(*variant_name, *count);
        cfg.jobs = *jobs;
        cfg.cancel = &g_cancel;
        cfg.format = np::parse_table_format(*format);
        if (*factors > 0) cfg.prime_factor_count = *factors;
        if (range_mode) {
          if (lo->empty() || hi->empty()) {
            std::cerr << "error: range mode needs both --lo and --hi\n";
            return 2;
          }
          cfg.mode = np::search_mode::range;
          cfg.lo = parse_u64(*lo, "--lo");
          cfg.hi = parse_u64(*hi, "--hi");
        } else if (*form == "2kpm") {
          cfg.mode = np::search_mode::form_2kpm;
          cfg.k_max = *k_max;
          cfg.m_min = *m_min;
          cfg.m_max = std::max(*m_min, *m_max);
          cfg.p_max = parse_u64(*p_max, "--p-max");
          if (!n_max->empty()) cfg.n_limit = parse_u64(*n_max, "--n-max");
        } else if (*form == "oddpq") {
          cfg.mode = np::search_mode::form_odd_two_prime;
          if (!n_max->empty()) cfg.n_limit = parse_u64(*n_max, "--n-max");
        } else {
          std::cerr << "error: unknown form '" << *form << "' (2kpm|oddpq)\n";
          return 2;
        }
        auto result = np::run_search(cfg);
        output_target target;
        target.open(*out);
        np::emit_table(result.records, cfg.format, *target.os);
        std::cerr << np::summary_to_json(result.summary) << "\n";
        return result.summary.cancelled ? 2 : 0;
      };
    });
  }

  // verify ------------------------------------------------------------
  auto* verify = app.add_subcommand(
      "verify", "cross-check a classification against an exhaustive search");
  {
    auto theorem = std::make_shared<std::string>();
    auto bound = std::make_shared<std::string>();
    auto jobs = std::make_shared<unsigned>(default_jobs());
    auto k_max = std::make_shared<np::u32>(0);
    auto m_max = std::make_shared<np::u32>(0);
    auto p_max = std::make_shared<std::string>("0");
    verify->add_option("--theorem", *theorem, "t1|t2|t4|odd|deficient|all")->required();
    verify->add_option("--bound", *bound, "search every candidate n <= bound");
    verify->add_option("--jobs", *jobs, "worker threads");
    verify->add_option("--k-max", *k_max, "override the derived exponent cap");
    verify->add_option("--m-max", *m_max, "override the derived exponent cap");
    verify->add_option("--p-max", *p_max, "override the derived prime cap");
    verify->callback([=, &action] {
      action = [=] {
        struct job {
          np::theorem_id id;
          np::u64 default_bound;
        };
        std::vector<job> jobs_to_run;
        if (*theorem == "t1") jobs_to_run.push_back({np::theorem_id::t1, 10'000'000});
        else if (*theorem == "t2") jobs_to_run.push_back({np::theorem_id::t2, 100'000'000});
        else if (*theorem == "t4") jobs_to_run.push_back({np::theorem_id::t4, 1'000'000'000'000});
        else if (*theorem == "odd") jobs_to_run.push_back({np::theorem_id::odd_exclusion, 1'000'000});
        else if (*theorem == "deficient") jobs_to_run.push_back({np::theorem_id::deficient, 1'000'000});
        else if (*theorem == "all") {
          jobs_to_run = {{np::theorem_id::t1, 10'000'000},
                         {np::theorem_id::t2, 100'000'000},
                         {np::theorem_id::t4, 1'000'000'000'000},
                         {np::theorem_id::odd_exclusion, 1'000'000},
                         {np::theorem_id::deficient, 1'000'000}};
        } else {
          std::cerr << "error: unknown theorem '" << *theorem << "'\n";
          return 2;
        }
        bool all_ok = true;
        for (const auto& j : jobs_to_run) {
          np::verify_options opt;
          opt.jobs = *jobs;
          opt.k_max = *k_max;
          opt.m_max = *m_max;
          opt.p_max = parse_u64(*p_max, "--p-max");
          opt.cancel = &g_cancel;
          np::u64 b = bound->empty() ? j.default_bound : parse_u64(*bound, "--bound");
          auto rep = np::verify_theorem(j.id, b, opt);
          std::cout << "theorem " << to_string(j.id) << " bound " << b << ": "
                    << (rep.ok() ? "MATCH" : "MISMATCH");
          if (rep.ok()) {
            std::cout << " (" << rep.v.confirmed.size() << " member(s)";
            if (!rep.v.confirmed.empty()) {
              std::cout << ":";
              for (np::u64 n : rep.v.confirmed) std::cout << " " << n;
            }
            std::cout << ")";
          }
          std::cout << "\n";
          for (np::u64 n : rep.v.missing)
            std::cout << "  missing from search: " << n << "\n";
          for (np::u64 n : rep.v.extra)
            std::cout << "  outside every family: " << n << "\n";
          for (const auto& fmsg : rep.failures) std::cout << "  " << fmsg << "\n";
          all_ok = all_ok && rep.ok();
        }
        return all_ok ? 0 : 1;
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    return action();
  } catch (const np::falsification_error& e) {
    std::cerr << "FALSIFICATION: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
