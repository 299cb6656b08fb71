#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "support.hpp"

using support::parse_csv;
using support::run_cli;

TEST_CASE("check: witnesses and exit codes", "[cli]") {
  auto r = run_cli("check 54 --variant near --k 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("{3,9}") != std::string::npos);
  CHECK(r.out.find("abundant") != std::string::npos);

  CHECK(run_cli("check 70 --variant near --k 2").exit_code == 1);
  CHECK(run_cli("check 0").exit_code == 2);
  CHECK(run_cli("check nonsense").exit_code == 2);
  CHECK(run_cli("check 1").exit_code == 2);

  CHECK(run_cli("check 70 --variant weird").exit_code == 0);
  CHECK(run_cli("check 12 --variant weird").exit_code == 1);
  CHECK(run_cli("check 52 --variant deficient").exit_code == 0);
  CHECK(run_cli("check 12 --variant hybrid").exit_code == 0);

  auto pseudo = run_cli("check 20 --variant pseudoperfect");
  CHECK(pseudo.exit_code == 0);
  CHECK(pseudo.out.find("subset") != std::string::npos);

  // Underscore separators parse.
  auto r1372 = run_cli("check 1_372 --variant near --k 2");
  CHECK(r1372.exit_code == 0);
  CHECK(r1372.out.find("{7,49}") != std::string::npos);
}

TEST_CASE("check: sigma overflow is a limit error", "[cli]") {
  // 2^62 * 3 fits, but its sigma does not.
  CHECK(run_cli("check 13835058055282163712").exit_code == 2);
}

TEST_CASE("classify", "[cli]") {
  auto r = run_cli("classify 200");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("T2_Sporadic") != std::string::npos);
  CHECK(run_cli("classify 45").exit_code == 2);
  auto r20 = run_cli("classify 20");
  CHECK(r20.exit_code == 0);
  CHECK(r20.out.find("no family membership") != std::string::npos);
}

TEST_CASE("generate", "[cli]") {
  auto t4 = run_cli("generate --family t4 --k-max 4");
  CHECK(t4.exit_code == 0);
  auto rows = parse_csv(t4.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[1][0] == "54");
  CHECK(rows[2][0] == "1372");
  CHECK(rows[3][0] == "476656");

  auto t2 = run_cli("generate --family t2");
  CHECK(parse_csv(t2.out).size() == 4);  // header + 3

  auto t1 = run_cli("generate --family t1 --k-max 0");
  CHECK(t1.exit_code == 0);
  CHECK(parse_csv(t1.out).size() == 1);  // header only

  CHECK(run_cli("generate --family bogus").exit_code == 2);

  auto trunc = run_cli("generate --family t4 --k-max 62");
  CHECK(trunc.exit_code == 0);
  CHECK(trunc.err.find("truncated") != std::string::npos);

  auto json_out = run_cli("generate --family t2 --format json");
  auto j = nlohmann::json::parse(json_out.out);
  REQUIRE(j.size() == 3);
  CHECK(j[0]["n"] == 18);
}

TEST_CASE("search: modes and table output", "[cli]") {
  CHECK(run_cli("search --lo 2 --hi 10 --form 2kpm").exit_code == 2);
  CHECK(run_cli("search").exit_code == 2);
  CHECK(run_cli("search --lo 2").exit_code == 2);
  CHECK(run_cli("search --form bogus").exit_code == 2);

  auto header_only = run_cli("search --lo 2 --hi 2");
  CHECK(header_only.exit_code == 0);
  auto rows = parse_csv(header_only.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][0] == "n");
  auto summary = nlohmann::json::parse(header_only.err);
  CHECK(summary["candidates"] == 1);
  CHECK(summary["records"] == 0);

  auto table = run_cli("search --lo 2 --hi 200 --variant near --count 2 --factors 3");
  CHECK(table.exit_code == 0);
  auto trows = parse_csv(table.out);
  REQUIRE(trows.size() == 10);  // header + 8 tabulated members + 198
  CHECK(trows[1][0] == "30");
  CHECK(trows[8][0] == "180");
  CHECK(trows[9][0] == "198");

  auto form = run_cli(
      "search --form 2kpm --k-max 12 --m-min 3 --m-max 6 --p-max 1_048_576 "
      "--variant near --count 2");
  CHECK(form.exit_code == 0);
  auto frows = parse_csv(form.out);
  REQUIRE(frows.size() == 6);
  CHECK(frows[1][0] == "54");
  CHECK(frows[5][0] == "2250975280623616");
}

TEST_CASE("search: --out writes the record stream to a file", "[cli]") {
  std::string path = "/tmp/nearperfect_cli_out_" + std::to_string(getpid()) + ".csv";
  auto r = run_cli("search --lo 2 --hi 60 --variant near --count 3 --out " + path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  auto rows = parse_csv(ss.str());
  REQUIRE(rows.size() == 9);
  CHECK(rows[1][0] == "24");
  std::remove(path.c_str());
}

TEST_CASE("search: jobs flag and environment default agree", "[cli]") {
  std::string args = "search --lo 2 --hi 3000 --variant near --count 2";
  auto a = run_cli(args + " --jobs 1");
  auto b = run_cli(args + " --jobs 3");
  auto c = run_cli(args, "NEARPERFECT_JOBS=3");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(a.err == b.err);  // summary excludes worker count: byte-identical
}

TEST_CASE("verify", "[cli]") {
  auto t2 = run_cli("verify --theorem t2 --bound 1_000_000");
  CHECK(t2.exit_code == 0);
  CHECK(t2.out.find("MATCH") != std::string::npos);
  CHECK(t2.out.find("18 36 200") != std::string::npos);

  CHECK(run_cli("verify --theorem odd --bound 100000").exit_code == 0);
  CHECK(run_cli("verify --theorem deficient --bound 100000").exit_code == 0);
  CHECK(run_cli("verify --theorem bogus --bound 10").exit_code == 2);
  CHECK(run_cli("verify --theorem t2 --bound 0").exit_code == 2);
}

TEST_CASE("usage errors", "[cli]") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}
