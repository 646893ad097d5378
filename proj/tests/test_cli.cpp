#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "helpers/process.hpp"

using testutil::run_command;

namespace {

std::string cli() { return std::string(WOMSEARCH_CLI_PATH); }

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

constexpr const char* kSolveHeader =
    "v,c,k,l,c_lower,c_upper,q_at_peak,root_index,q,stability,eta,expected_price,"
    "expected_min_price,support_low,support_high,firm_profit,searcher_forms,"
    "nonsearcher_forms,l_bar";

}  // namespace

TEST_CASE("solve: csv report for the two-root instance") {
  const auto r = run_command(cli() + " solve --v 1 --c 0.075 --k 1");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == kSolveHeader);
  const auto row0 = split_csv(lines[1]);
  const auto row1 = split_csv(lines[2]);
  REQUIRE(row0.size() == 19);
  REQUIRE(row1.size() == 19);
  CHECK(row0[9] == "unstable");
  CHECK(row1[9] == "stable");
  CHECK_THAT(std::stod(row1[8]), Catch::Matchers::WithinAbs(0.91200557327289861, 1e-9));
  // no --l given: link columns empty
  CHECK(row0[16].empty());
  CHECK(row0[18].empty());
  // output uses LF endings only
  CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("solve: link columns appear when l is given") {
  const auto r = run_command(cli() + " solve --v 1 --c 0.075 --k 1 --l 0.02");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  const auto stable_row = split_csv(lines[2]);
  CHECK(stable_row[16] == "true");
  CHECK(stable_row[17] == "true");
  CHECK_THAT(std::stod(stable_row[18]), Catch::Matchers::WithinRel(0.041473878208497518, 1e-8));
}

TEST_CASE("solve: json mode carries the same roots plus the boundary note") {
  const auto r = run_command(cli() + " solve --v 1 --c 0.075 --k 1 --l 0.02 --format json");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["params"]["v"] == 1.0);
  CHECK(j["roots"].size() == 2);
  CHECK(j["roots"][1]["stability"] == "stable");
  CHECK(j["roots"][1]["link"]["searcher_forms"] == true);
  CHECK(j.contains("note"));
  CHECK(j["c_lower"].get<double>() < 0.075);
  CHECK(j["c_upper"].get<double>() > 0.075);
}

TEST_CASE("solve: v and c scale together leave q fixed and double the money") {
  const auto a = run_command(cli() + " solve --v 1 --c 0.075 --k 1");
  const auto b = run_command(cli() + " solve --v 2 --c 0.15 --k 1");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  const auto la = lines_of(a.out), lb = lines_of(b.out);
  REQUIRE(la.size() == lb.size());
  for (std::size_t i = 1; i < la.size(); ++i) {
    const auto ra = split_csv(la[i]), rb = split_csv(lb[i]);
    CHECK(ra[8] == rb[8]);    // q identical, textually
    CHECK(ra[10] == rb[10]);  // eta identical
    // doubling is exact in the library; the CSV carries 15 significant digits
    CHECK_THAT(std::stod(rb[11]), Catch::Matchers::WithinRel(2.0 * std::stod(ra[11]), 1e-14));
    CHECK_THAT(std::stod(rb[15]), Catch::Matchers::WithinRel(2.0 * std::stod(ra[15]), 1e-14));
  }
}

TEST_CASE("solve: exit code 3 when the cost exceeds the benefit peak") {
  const auto r = run_command(cli() + " solve --v 1 --c 0.9 --k 1");
  CHECK(r.exit_code == 3);
  CHECK(r.out.empty());
  CHECK(r.err.find("c_upper") != std::string::npos);
}

TEST_CASE("bad inputs exit with code 2") {
  CHECK(run_command(cli() + " nonsense --v 1").exit_code == 2);
  CHECK(run_command(cli() + " solve --v 1 --c 0.075").exit_code == 2);          // missing --k
  CHECK(run_command(cli() + " solve --v 1 --c 0.075 --k 1 --bogus 3").exit_code == 2);
  CHECK(run_command(cli() + " solve --v abc --c 0.075 --k 1").exit_code == 2);
  CHECK(run_command(cli() + " solve --v 1 --c -0.1 --k 1").exit_code == 2);
  CHECK(run_command(cli() + " solve --v 1 --c 2 --k 1").exit_code == 2);        // c >= v
  CHECK(run_command(cli() + " simulate --q 1.5 --k 1").exit_code == 2);
  CHECK(run_command(cli() + " simulate --q 0.5 --k 1 --n 10").exit_code == 2);  // n too small
  CHECK(run_command(cli() + " scan --v 1 --c 0.01 --k-max-exp 80").exit_code == 2);
  CHECK(run_command(cli() + " figure1 --format json").exit_code == 2);
  CHECK(run_command(cli() + " dynamics --v 1 --c 0.075 --k 1 --q0 1.5").exit_code == 2);
}

TEST_CASE("figure1: curve shape and reference levels") {
  const auto r = run_command(cli() + " figure1");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 1002);
  CHECK(lines[0] == "q,benefit,c_lower,c1,c_upper");
  double peak = 0.0;
  for (std::size_t i = 1; i < lines.size(); ++i)
    peak = std::max(peak, std::stod(split_csv(lines[i])[1]));
  CHECK(peak > 0.075);

  const auto first = split_csv(lines[1]);
  CHECK_THAT(std::stod(first[2]), Catch::Matchers::WithinAbs((std::log(3.0) - 1.0) / 2.0, 1e-9));
  CHECK(std::stod(first[3]) == 0.075);

  const auto last = split_csv(lines[1001]);
  CHECK(std::stod(last[0]) == 1.0);
  CHECK(std::abs(std::stod(last[1]) - std::stod(last[2])) < 1e-7);  // curve meets c_lower at q=1
}

TEST_CASE("scan: csv table with per-k statuses") {
  const auto r = run_command(cli() + " scan --v 1 --c 0.01 --k-max-exp 6");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 8);
  CHECK(lines[0] == "v,c,k,status,q_star,eta,expected_price,c_lower,l_bar,firm_profit");
  CHECK(split_csv(lines[1])[3] == "no_stable_root");
  CHECK(split_csv(lines[2])[3] == "no_stable_root");
  double prev_q = 1.0;
  for (std::size_t i = 3; i < lines.size(); ++i) {
    const auto row = split_csv(lines[i]);
    REQUIRE(row.size() == 10);
    CHECK(row[3] == "stable");
    const double q_star = std::stod(row[4]);
    CHECK(q_star < prev_q);
    prev_q = q_star;
    CHECK(std::stod(row[8]) > 0.0);  // l_bar
  }
}

TEST_CASE("simulate: deterministic json, env seed below the explicit flag") {
  const std::string cmd = cli() + " simulate --q 0.5 --k 1 --n 2000 --seed 42 --reps 8";
  const auto a = run_command(cmd);
  const auto b = run_command(cmd);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);  // byte-identical rerun

  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["params"]["seed"] == 42);
  const double none = j["shares"]["none"]["mean"].get<double>();
  const double captive = j["shares"]["captive"]["mean"].get<double>();
  const double compare = j["shares"]["compare"]["mean"].get<double>();
  CHECK(std::abs(none + captive + compare - 1.0) < 1e-12);

  // WOM_SEED fills in when --seed is absent ...
  const auto env_run =
      run_command(cli() + " simulate --q 0.5 --k 1 --n 2000 --reps 8", "WOM_SEED=42");
  CHECK(env_run.out == a.out);
  // ... but an explicit flag wins over the environment
  const auto flag_wins =
      run_command(cli() + " simulate --q 0.5 --k 1 --n 2000 --seed 42 --reps 8", "WOM_SEED=7");
  CHECK(flag_wins.out == a.out);
  const auto env_only =
      run_command(cli() + " simulate --q 0.5 --k 1 --n 2000 --reps 8", "WOM_SEED=7");
  CHECK(env_only.out != a.out);
}

TEST_CASE("dynamics: trajectory converges to the stable root") {
  const auto r = run_command(cli() + " dynamics --v 1 --c 0.075 --k 1 --q0 0.9");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() >= 3);
  CHECK(lines[0] == "v,c,k,q0,gain,status,step,q");
  const auto last = split_csv(lines.back());
  CHECK(last[5] == "converged");
  CHECK_THAT(std::stod(last[7]), Catch::Matchers::WithinAbs(0.91200557327289861, 1e-6));
  // steps increase from zero
  CHECK(split_csv(lines[1])[6] == "0");
}

TEST_CASE("config file feeds defaults, flags override, unknown keys rejected") {
  const auto dir = testutil::fresh_temp_dir("womsearch_cfg");
  const auto cfg = dir / "run.cfg";
  testutil::spit(cfg, "# two-root benchmark instance\nv = 1\nc = 0.075   # cost level\nk = 1\n");

  const auto via_file = run_command(cli() + " solve --config " + cfg.string());
  const auto via_flags = run_command(cli() + " solve --v 1 --c 0.075 --k 1");
  REQUIRE(via_file.exit_code == 0);
  CHECK(via_file.out == via_flags.out);

  const auto overridden = run_command(cli() + " solve --config " + cfg.string() + " --c 0.08");
  REQUIRE(overridden.exit_code == 0);
  CHECK(overridden.out != via_file.out);
  CHECK(split_csv(lines_of(overridden.out)[1])[1] == "0.08");

  testutil::spit(cfg, "v = 1\nwhatever = 3\n");
  CHECK(run_command(cli() + " solve --config " + cfg.string() + " --c 0.075 --k 1").exit_code == 2);

  CHECK(run_command(cli() + " solve --config " + (dir / "missing.cfg").string()).exit_code == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("--out writes the report to a file, identically to stdout") {
  const auto dir = testutil::fresh_temp_dir("womsearch_out");
  const auto path = dir / "roots.csv";
  const auto to_file = run_command(cli() + " solve --v 1 --c 0.075 --k 1 --out " + path.string());
  REQUIRE(to_file.exit_code == 0);
  CHECK(to_file.out.empty());
  const auto to_stdout = run_command(cli() + " solve --v 1 --c 0.075 --k 1");
  CHECK(testutil::slurp(path) == to_stdout.out);
  std::filesystem::remove_all(dir);
}
