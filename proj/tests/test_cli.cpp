//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#include <doctest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "isq/bounds.hpp"
#include "isq/report.hpp"

namespace {

struct CommandResult {
  int exit_code;
  std::string out;
};

// Run the packaged binary, capturing stdout; stderr goes to a scratch file.
CommandResult run_cli(const std::string& args) {
  const std::string out_path = "/tmp/isqsim_test_stdout.txt";
  const std::string cmd =
      std::string(ISQSIM_BIN) + " " + args + " > " + out_path + " 2>/tmp/isqsim_test_stderr.txt";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(out_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return CommandResult{WEXITSTATUS(raw), buffer.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

TEST_CASE("simulate: noiseless full-rank run produces all-zero rows") {
  const CommandResult r =
      run_cli("simulate --n 8 --alpha 1.0 --sigma 0 --decoder isq --trials 10 --seed 7");
  CHECK(r.exit_code == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 3);  // header, one row, summary
  CHECK(lines[0] == isq::csv_header());
  const auto fields = split_csv(lines[1]);
  REQUIRE(fields.size() == 20);
  CHECK(fields[0] == "isq");
  CHECK(fields[8] == "0");   // symbol_errors
  CHECK(fields[10] == "0");  // ser_point
  CHECK(lines[2] == "# rows=1 skips=0");
}

TEST_CASE("simulate: repeated invocations are byte-identical") {
  const std::string flags =
      "simulate --n 6,9 --alpha 0.7 --sigma 0.2 --decoder isq,risq --trials 15 --seed 3";
  const CommandResult a = run_cli(flags + " --out /tmp/isqsim_a.csv");
  const CommandResult b = run_cli(flags + " --out /tmp/isqsim_b.csv");
  const CommandResult c = run_cli(flags + " --threads 4 --out /tmp/isqsim_c.csv");
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  CHECK(c.exit_code == 0);
  const std::string da = slurp("/tmp/isqsim_a.csv");
  CHECK(!da.empty());
  CHECK(da == slurp("/tmp/isqsim_b.csv"));
  CHECK(da == slurp("/tmp/isqsim_c.csv"));
}

TEST_CASE("simulate: row schema for a multi-decoder run, jsonl and gnuplot mirrors") {
  const CommandResult r = run_cli(
      "simulate --n 16 --alpha 0.5 --sigma 0.1 --decoder risq,amp --trials 20 --seed 1 "
      "--out /tmp/isqsim_m.csv --jsonl /tmp/isqsim_m.jsonl --gnuplot");
  CHECK(r.exit_code == 0);
  const auto lines = split_lines(slurp("/tmp/isqsim_m.csv"));
  REQUIRE(lines.size() == 4);
  CHECK(split_csv(lines[1])[0] == "risq");
  CHECK(split_csv(lines[2])[0] == "amp");
  for (int row : {1, 2}) {
    const auto fields = split_csv(lines[static_cast<std::size_t>(row)]);
    REQUIRE(fields.size() == 20);
    CHECK(fields[1] == "16");
    CHECK(fields[2] == "8");
    CHECK(std::stod(fields[12]) >= std::stod(fields[11]));  // ci_high >= ci_low
  }
  const auto jlines = split_lines(slurp("/tmp/isqsim_m.jsonl"));
  REQUIRE(jlines.size() == 2);
  CHECK(jlines[0].find("\"decoder\":\"risq\"") != std::string::npos);
  const std::string gp = slurp("/tmp/isqsim_m.csv.gp");
  CHECK(gp.find("plot") != std::string::npos);
  CHECK(gp.find("risq") != std::string::npos);
}

TEST_CASE("simulate: config file with flag overrides") {
  {
    std::ofstream cfg("/tmp/isqsim_cfg.json");
    cfg << "{\"n_values\":[5],\"alpha\":1.0,\"sigma_values\":[0.0],"
        << "\"decoders\":[\"isq\"],\"trials\":4,\"master_seed\":2}";
  }
  const CommandResult r = run_cli("simulate --config /tmp/isqsim_cfg.json --trials 6");
  CHECK(r.exit_code == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(split_csv(lines[1])[7] == "6");  // trials overridden by the flag

  {
    std::ofstream cfg("/tmp/isqsim_bad.json");
    cfg << "{\"n_values\":[5],\"alpha\":1.0,\"sigma_values\":[0.0],"
        << "\"decoders\":[\"isq\"],\"bogus_key\":1}";
  }
  const CommandResult bad = run_cli("simulate --config /tmp/isqsim_bad.json");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("simulate: exit codes for config errors and strict skips") {
  CHECK(run_cli("simulate --n 8 --alpha 0 --sigma 0.1 --decoder isq --trials 2").exit_code == 2);
  CHECK(run_cli("simulate --no-such-flag").exit_code == 2);
  CHECK(run_cli("nonsense-subcommand").exit_code == 2);

  // n=16 bpsk needs 16 bits (fine for ml) but the 0.1-pitch grid needs ~70
  const std::string skip_flags =
      "simulate --n 16 --alpha 0.5 --sigma 0.1 --decoder grid --epsilon 0.1 --trials 2 --seed 1";
  CHECK(run_cli(skip_flags).exit_code == 0);
  CHECK(run_cli(skip_flags + " --strict").exit_code == 4);
}

TEST_CASE("sweep: verdict lines per decoder and sigma") {
  const CommandResult r = run_cli(
      "sweep --n 8,16,32 --alpha 0.75 --sigma 0.3 --decoder isq --trials 40 --seed 5 "
      "--out /tmp/isqsim_sweep.csv");
  CHECK(r.exit_code == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].find("decoder=isq sigma=0.3 non-increasing within CI:") == 0);

  CHECK(run_cli("sweep --n 8 --alpha 0.75 --sigma 0.3 --decoder isq --trials 4 "
                "--out /tmp/isqsim_sweep2.csv")
            .exit_code == 2);

  // two decoders at the same grid give one verdict line each
  const CommandResult two = run_cli(
      "sweep --n 8,16 --alpha 0.4 --sigma 0 --decoder risq,amp --trials 25 --seed 6 "
      "--out /tmp/isqsim_sweep3.csv");
  CHECK(two.exit_code == 0);
  const auto tlines = split_lines(two.out);
  REQUIRE(tlines.size() == 2);
  CHECK(tlines[0].find("decoder=risq") == 0);
  CHECK(tlines[1].find("decoder=amp") == 0);
}

TEST_CASE("bounds: printed table matches the calculators") {
  const CommandResult r = run_cli("bounds --n 10 --alpha 0.4");
  CHECK(r.exit_code == 0);
  double threshold = -1.0;
  for (const std::string& line : split_lines(r.out)) {
    std::stringstream ss(line);
    std::string key;
    double value;
    if (ss >> key >> value && key == "lemma1_threshold") threshold = value;
  }
  CHECK(threshold == doctest::Approx(2.3026).epsilon(1e-4));

  const CommandResult g = run_cli("bounds --n 16 --k-prime 0.25 --epsilon 0.25 --a 2");
  double grid_value = -1.0, union_value = -1.0, pattern_value = -1.0;
  for (const std::string& line : split_lines(g.out)) {
    std::stringstream ss(line);
    std::string key;
    double value;
    if (!(ss >> key >> value)) continue;
    if (key == "grid_union_bound") grid_value = value;
    if (key == "union_bound") union_value = value;
    if (key == "chi_sq_per_pattern") pattern_value = value;
  }
  CHECK(grid_value == doctest::Approx(16.0 * std::pow(2.0, -80.0)).epsilon(1e-9));
  CHECK(union_value >= 0.0);
  CHECK(pattern_value ==
        doctest::Approx(isq::lemma1_tail_bound(16, 1.0, 1.0, 0.25 * 16).probability)
            .epsilon(1e-9));

  // k' = 1 keeps only the full-error term: union bound = p_n / 2
  const CommandResult u = run_cli("bounds --n 2 --alpha 1.0 --k-prime 1.0");
  double union_k1 = -1.0;
  for (const std::string& line : split_lines(u.out)) {
    std::stringstream ss(line);
    std::string key;
    double value;
    if (ss >> key >> value && key == "union_bound") union_k1 = value;
  }
  const double p2 = isq::lemma1_tail_bound(2, 1.0, 1.0, 2.0).probability;
  CHECK(union_k1 == doctest::Approx(0.5 * p2).epsilon(1e-9));

  CHECK(run_cli("bounds --n 1 --alpha 0.4").exit_code == 2);
}

TEST_CASE("verify: quick suites through the CLI") {
  CHECK(run_cli("verify determinism").exit_code == 0);
  CHECK(run_cli("verify mgf").exit_code == 0);
  CHECK(run_cli("verify no-such-suite").exit_code == 2);
}

TEST_CASE("version flag") {
  const CommandResult r = run_cli("--version");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("isqsim") != std::string::npos);
}
