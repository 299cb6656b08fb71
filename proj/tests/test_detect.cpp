#include <catch2/catch_amalgamated.hpp>

#include <nearperfect/detect.hpp>

#include "support.hpp"

using namespace nearperfect;

namespace {
std::vector<std::vector<u64>> sets(const std::vector<witness>& ws) {
  std::vector<std::vector<u64>> out;
  for (const auto& w : ws) out.push_back(w.omitted());
  return out;
}
}  // namespace

TEST_CASE("2-near perfect detection", "[detect]") {
  CHECK(sets(detect_k_near_perfect(18, 2)) ==
        std::vector<std::vector<u64>>{{1, 2}});
  auto w54 = sets(detect_k_near_perfect(54, 2));
  CHECK(std::find(w54.begin(), w54.end(), std::vector<u64>{3, 9}) != w54.end());
  CHECK(detect_k_near_perfect(7, 2).empty());
  CHECK(detect_k_near_perfect(864, 2).empty());
  // 48 carries two distinct witness pairs.
  CHECK(sets(detect_k_near_perfect(48, 2)) ==
        std::vector<std::vector<u64>>{{4, 24}, {12, 16}});
}

TEST_CASE("1-near and 3-near detection", "[detect]") {
  CHECK(sets(detect_k_near_perfect(12, 1)) == std::vector<std::vector<u64>>{{4}});
  CHECK(sets(detect_k_near_perfect(40, 1)) == std::vector<std::vector<u64>>{{10}});
  CHECK(sets(detect_k_near_perfect(18, 1)) == std::vector<std::vector<u64>>{{3}});
  CHECK(detect_k_near_perfect(7, 1).empty());
  CHECK(sets(detect_k_near_perfect(24, 3)) ==
        std::vector<std::vector<u64>>{{1, 3, 8}, {2, 4, 6}});
  CHECK(sets(detect_k_near_perfect(30, 3)) ==
        std::vector<std::vector<u64>>{{1, 5, 6}});
}

TEST_CASE("detection preconditions", "[detect]") {
  CHECK_THROWS_AS(detect_k_near_perfect(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(detect_k_near_perfect(12, 0), std::invalid_argument);
  CHECK_THROWS_AS(detect_k_near_perfect(12, 4), std::invalid_argument);
  CHECK_THROWS_AS(detect_2_deficient(1), std::invalid_argument);
  CHECK_THROWS_AS(is_weird(u64{1}), std::invalid_argument);
  // sigma(2^62 * 3) = (2^63 - 1) * 4 exceeds 64 bits.
  CHECK_THROWS_AS(detect_k_near_perfect(factorization({{2, 62}, {3, 1}}), 2),
                  arith_overflow);
}

TEST_CASE("2-deficient perfect detection", "[detect]") {
  CHECK(sets(detect_2_deficient(52)) == std::vector<std::vector<u64>>{{2, 4}});
  CHECK(detect_2_deficient(6).empty());
  // Powers of two have defect exactly 1, never a sum of two divisors.
  for (u32 k = 1; k <= 20; ++k)
    CHECK(detect_2_deficient(factorization({{2, k}})).empty());
}

TEST_CASE("hybrid detection", "[detect]") {
  auto w12 = sets(detect_hybrid_2_near(12));
  CHECK(std::find(w12.begin(), w12.end(), std::vector<u64>{6, 2}) != w12.end());
  CHECK(detect_hybrid_2_near(6).empty());
  CHECK(sets(detect_hybrid_2_near(18)) ==
        std::vector<std::vector<u64>>{{6, 3}, {9, 6}});
  // Deficient numbers can be hybrid too: sigma(4) = 7 = 8 + 1 - 2.
  auto w4 = sets(detect_hybrid_2_near(4));
  CHECK(std::find(w4.begin(), w4.end(), std::vector<u64>{1, 2}) != w4.end());
}

TEST_CASE("abundance classification", "[detect]") {
  CHECK(classify_abundance(70) == abundance_class::abundant);
  CHECK(classify_abundance(6) == abundance_class::perfect);
  CHECK(classify_abundance(28) == abundance_class::perfect);
  CHECK(classify_abundance(9) == abundance_class::deficient);
  CHECK(classify_abundance(1) == abundance_class::deficient);
  CHECK_THROWS_AS(classify_abundance(0), std::invalid_argument);
}

TEST_CASE("weird numbers", "[detect]") {
  CHECK(is_weird(70));
  CHECK_FALSE(is_weird(12));
  CHECK_FALSE(is_weird(18));
  CHECK(is_weird(836));
  CHECK(is_weird(4030));
  CHECK_FALSE(is_weird(9));  // deficient, not abundant
}

TEST_CASE("pseudoperfect witnesses", "[detect]") {
  CHECK(is_pseudoperfect(factorize(12)));
  CHECK(is_pseudoperfect(factorize(6)));
  CHECK_FALSE(is_pseudoperfect(factorize(70)));
  auto w = pseudoperfect_witness(factorize(20));
  REQUIRE(w.has_value());
  u128 sum = 0;
  for (u64 v : w->omitted()) sum += v;
  CHECK(sum == 20);
}

TEST_CASE("near-perfect numbers are abundant", "[detect]") {
  for (u64 n = 2; n <= 3000; ++n) {
    auto f = factorize(n);
    for (u32 k = 1; k <= 3; ++k) {
      if (!detect_k_near_perfect(f, k).empty())
        REQUIRE(classify_abundance(f) == abundance_class::abundant);
    }
  }
}

TEST_CASE("weird numbers admit no near-perfect witness", "[detect]") {
  u64 weird_seen = 0;
  for (u64 n = 2; n <= 1200; ++n) {
    auto f = factorize(n);
    if (!is_weird(f)) continue;
    ++weird_seen;
    for (u32 k = 1; k <= 3; ++k) REQUIRE(detect_k_near_perfect(f, k).empty());
  }
  CHECK(weird_seen == 2);  // 70 and 836
}

TEST_CASE("witness replay is enforced at construction", "[detect]") {
  CHECK_NOTHROW(witness(18, variant::near(2), {1, 2}, 39));
  CHECK_THROWS_AS(witness(12, variant::near(2), {1, 2}, 28), std::logic_error);
  CHECK_THROWS_AS(witness(18, variant::near(2), {1, 5}, 39), std::logic_error);
  CHECK_THROWS_AS(witness(18, variant::near(2), {2, 2}, 39), std::logic_error);
  CHECK_NOTHROW(witness(52, variant::deficient_perfect2(), {2, 4}, 98));
  CHECK_THROWS_AS(witness(52, variant::deficient_perfect2(), {2, 8}, 98),
                  std::logic_error);
  CHECK_NOTHROW(witness(12, variant::hybrid2(), {6, 2}, 28));
  CHECK_THROWS_AS(witness(12, variant::hybrid2(), {2, 6}, 28), std::logic_error);
}

TEST_CASE("structural identities hold on every two-prime witness", "[detect]") {
  // Scan all n = 2^k p^m in range and validate every 2-near witness.
  u64 witnesses_checked = 0;
  for (u32 k = 1; k <= 8; ++k) {
    for (u64 p : {3ull, 5ull, 7ull, 11ull, 13ull, 31ull, 127ull}) {
      for (u32 m = 1; m <= 4; ++m) {
        auto pm = checked_pow(p, m);
        if (!pm) continue;
        auto n = checked_mul(u64{1} << k, *pm);
        if (!n) continue;
        factorization f({{2, k}, {p, m}});
        two_prime_form form{k, p, m};
        for (const auto& w : detect_k_near_perfect(f, 2)) {
          auto rep = check_two_prime_identities(form, w);
          REQUIRE(rep.sigma_product_identity);
          REQUIRE(rep.reduced_sum_identity);
          REQUIRE(rep.parity_rule);
          ++witnesses_checked;
        }
      }
    }
  }
  CHECK(witnesses_checked >= 10);

  // A witness paired with the wrong form must fail.
  witness w(54, variant::near(2), {3, 9}, 120);
  CHECK(check_two_prime_identities({1, 3, 3}, w).all());
  CHECK_FALSE(check_two_prime_identities({2, 3, 3}, w).all());
}

TEST_CASE("two-prime form recognition", "[detect]") {
  auto f = as_two_prime_form(factorization({{2, 3}, {5, 2}}));
  REQUIRE(f.has_value());
  CHECK(f->k == 3);
  CHECK(f->p == 5);
  CHECK(f->m == 2);
  CHECK_FALSE(as_two_prime_form(factorization({{3, 2}, {5, 1}})).has_value());
  CHECK_FALSE(as_two_prime_form(factorization({{2, 3}})).has_value());
  CHECK_FALSE(as_two_prime_form(factorization({{2, 1}, {3, 1}, {5, 1}})).has_value());
}
