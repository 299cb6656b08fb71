#pragma once

// Shared test utilities: independent brute-force oracles (kept free of
// the library's own code paths), a CLI runner, and a small CSV parser.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include <nearperfect/core_arith.hpp>

namespace oracle {

using nearperfect::u128;
using nearperfect::u64;

// Sum of all divisors by paired trial division; no sigma formula.
inline u128 sigma(u64 n) {
  u128 sum = 0;
  for (u64 d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    sum += d;
    if (d != n / d) sum += n / d;
  }
  return sum;
}

inline std::vector<u64> divisors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    if (d != n / d) out.push_back(n / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (u64 d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

// O(|d|^2) pair scan.
inline std::vector<std::pair<u64, u64>> pairs_with_sum(const std::vector<u64>& d,
                                                       u128 target) {
  std::vector<std::pair<u64, u64>> out;
  for (size_t i = 0; i < d.size(); ++i)
    for (size_t j = i + 1; j < d.size(); ++j)
      if (u128(d[i]) + d[j] == target) out.emplace_back(d[i], d[j]);
  std::sort(out.begin(), out.end());
  return out;
}

// O(|d|^3) triple scan.
inline std::vector<std::array<u64, 3>> triples_with_sum(const std::vector<u64>& d,
                                                        u128 target) {
  std::vector<std::array<u64, 3>> out;
  for (size_t i = 0; i < d.size(); ++i)
    for (size_t j = i + 1; j < d.size(); ++j)
      for (size_t k = j + 1; k < d.size(); ++k)
        if (u128(d[i]) + d[j] + d[k] == target) out.push_back({d[i], d[j], d[k]});
  std::sort(out.begin(), out.end());
  return out;
}

// Exhaustive subset enumeration with suffix-sum pruning.
inline bool subset_with_sum(const std::vector<u64>& values, u64 target) {
  std::vector<u64> v = values;
  std::sort(v.begin(), v.end(), std::greater<>());
  std::vector<u128> suffix(v.size() + 1, 0);
  for (size_t i = v.size(); i-- > 0;) suffix[i] = suffix[i + 1] + v[i];
  std::function<bool(size_t, u128)> go = [&](size_t i, u128 rest) -> bool {
    if (rest == 0) return true;
    if (i == v.size() || suffix[i] < rest) return false;
    if (v[i] <= rest && go(i + 1, rest - v[i])) return true;
    return go(i + 1, rest);
  };
  return go(0, target);
}

}  // namespace oracle

namespace support {

struct cli_result {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string cli_path() {
  const char* p = std::getenv("NEARPERFECT_CLI");
  if (!p) throw std::runtime_error("NEARPERFECT_CLI environment variable not set");
  return p;
}

inline cli_result run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  std::string err_path =
      "/tmp/nearperfect_test_err_" + std::to_string(getpid()) + "_" +
      std::to_string(counter++) + ".txt";
  std::string cmd = env + (env.empty() ? "" : " ") + "\"" + cli_path() + "\" " +
                    args + " 2>" + err_path;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  cli_result r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int rc = pclose(pipe);
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream ef(err_path);
  std::stringstream ss;
  ss << ef.rdbuf();
  r.err = ss.str();
  std::remove(err_path.c_str());
  return r;
}

// Minimal RFC-style CSV parser (quotes, doubled quotes, no embedded
// newlines in our tables).
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n') {
      row.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
    } else {
      cell += c;
    }
  }
  if (!cell.empty() || !row.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace support
