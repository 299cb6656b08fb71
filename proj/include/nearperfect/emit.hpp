#pragma once

// Table emitters for search records and family members: CSV (default),
// JSON, and markdown. Output is UTF-8, newline-terminated, header row
// first, and byte-identical across runs of the same search.

#include <ostream>
#include <sstream>

#include <json.hpp>

#include "search.hpp"

namespace nearperfect {

inline table_format parse_table_format(const std::string& s) {
  if (s == "csv") return table_format::csv;
  if (s == "json") return table_format::json;
  if (s == "markdown" || s == "md") return table_format::markdown;
  throw std::invalid_argument("unknown format: " + s);
}

namespace detail {

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  return q;
}

inline std::string join_set(const std::vector<u64>& set) {
  std::string s;
  for (size_t i = 0; i < set.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(set[i]);
  }
  return s;
}

// "1,3,8;2,4,6" - semicolon-separated alternatives, each comma-separated.
inline std::string join_witness_sets(const std::vector<std::vector<u64>>& sets) {
  std::string s;
  for (size_t i = 0; i < sets.size(); ++i) {
    if (i) s += ';';
    s += join_set(sets[i]);
  }
  return s;
}

inline std::string join_tags(const std::vector<std::string>& tags) {
  std::string s;
  for (size_t i = 0; i < tags.size(); ++i) {
    if (i) s += ';';
    s += tags[i];
  }
  return s;
}

inline void require_good(const std::ostream& os) {
  if (!os.good()) throw std::ios_base::failure("emit_table: write failed");
}

inline void emit_rows(const std::vector<std::vector<std::string>>& header_and_rows,
                      table_format fmt, std::ostream& os) {
  const auto& rows = header_and_rows;
  switch (fmt) {
    case table_format::csv:
      for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
          if (i) os << ',';
          os << csv_cell(row[i]);
        }
        os << '\n';
      }
      break;
    case table_format::markdown:
      for (size_t r = 0; r < rows.size(); ++r) {
        os << '|';
        for (const auto& cell : rows[r]) os << ' ' << cell << " |";
        os << '\n';
        if (r == 0) {
          os << '|';
          for (size_t i = 0; i < rows[0].size(); ++i) os << " --- |";
          os << '\n';
        }
      }
      break;
    case table_format::json:
      break;  // handled by the callers, which know the value types
  }
  require_good(os);
}

}  // namespace detail

/// Columns: n, sigma, variant, omitted_divisor_sets, factorization,
/// family_tags, top_prime_power_omitted. An empty record list still
/// emits the header.
inline void emit_table(const std::vector<search_record>& records,
                       table_format fmt, std::ostream& os) {
  if (fmt == table_format::json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : records) {
      nlohmann::ordered_json row;
      row["n"] = r.n;
      row["sigma"] = r.sigma_n;
      row["variant"] = r.var.str();
      row["omitted_divisor_sets"] = r.witness_sets;
      row["factorization"] = r.fact.str();
      row["family_tags"] = r.family_tags();
      row["top_prime_power_omitted"] = r.top_prime_power_omitted;
      arr.push_back(std::move(row));
    }
    os << arr.dump(2) << '\n';
    detail::require_good(os);
    return;
  }
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"n", "sigma", "variant", "omitted_divisor_sets", "factorization",
                  "family_tags", "top_prime_power_omitted"});
  for (const auto& r : records) {
    rows.push_back({std::to_string(r.n), std::to_string(r.sigma_n), r.var.str(),
                    detail::join_witness_sets(r.witness_sets), r.fact.str(),
                    detail::join_tags(r.family_tags()),
                    r.top_prime_power_omitted ? "true" : "false"});
  }
  detail::emit_rows(rows, fmt, os);
}

inline void emit_family_table(const std::vector<family_member>& members,
                              table_format fmt, std::ostream& os) {
  auto opt_str = [](const std::optional<u32>& v) {
    return v ? std::to_string(*v) : std::string();
  };
  if (fmt == table_format::json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& m : members) {
      nlohmann::ordered_json row;
      row["n"] = m.n;
      row["family"] = to_string(m.family);
      row["k"] = m.k;
      row["m"] = m.m;
      row["p"] = m.p;
      if (m.a) row["a"] = *m.a;
      if (m.b) row["b"] = *m.b;
      row["omitted_divisors"] = m.omitted;
      arr.push_back(std::move(row));
    }
    os << arr.dump(2) << '\n';
    detail::require_good(os);
    return;
  }
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"n", "family", "k", "m", "p", "a", "b", "omitted_divisors"});
  for (const auto& m : members) {
    rows.push_back({std::to_string(m.n), to_string(m.family), std::to_string(m.k),
                    std::to_string(m.m), std::to_string(m.p), opt_str(m.a),
                    opt_str(m.b), detail::join_set(m.omitted)});
  }
  detail::emit_rows(rows, fmt, os);
}

/// Final summary as a single JSON object, printed on a separate channel
/// from the record stream.
inline std::string summary_to_json(const search_summary& s) {
  nlohmann::ordered_json j;
  j["mode"] = s.mode;
  j["variant"] = s.variant_name;
  j["candidates"] = s.candidates;
  j["records"] = s.records;
  j["overflow_skipped"] = s.overflow_skipped;
  j["factorization_timeouts"] = s.factorization_timeouts;
  j["non_matching"] = s.non_matching;
  if (!s.timeout_values.empty()) j["timeout_values"] = s.timeout_values;
  j["family_counts"] = s.family_counts;
  if (s.cancelled) j["cancelled"] = true;
  return j.dump();
}

}  // namespace nearperfect
