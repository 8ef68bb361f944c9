//
// Project isqsim - Copyright 2026 the isqsim authors.
// SPDX-License-Identifier: Apache-2.0
//
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "isq/report.hpp"
#include "isq/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitVerify = 3;
constexpr int kExitStrictSkip = 4;

isq::ExperimentConfig config_from_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config: " + std::string(e.what()));
  }
  isq::ExperimentConfig config;
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "n_values") {
        config.n_values = value.get<std::vector<int>>();
      } else if (key == "alpha") {
        config.alpha = value.get<double>();
      } else if (key == "xi") {
        config.xi = value.get<double>();
      } else if (key == "sigma_values") {
        config.sigma_values = value.get<std::vector<double>>();
      } else if (key == "fading") {
        config.fading = isq::fading_by_name(value.get<std::string>());
      } else if (key == "constellation") {
        config.constellation = value.get<std::string>();
      } else if (key == "decoders") {
        config.decoders.clear();
        for (const auto& name : value.get<std::vector<std::string>>())
          config.decoders.push_back(isq::decoder_by_name(name));
      } else if (key == "trials") {
        config.trials = value.get<int>();
      } else if (key == "master_seed") {
        config.master_seed = value.get<std::uint64_t>();
      } else if (key == "k_fraction") {
        config.k_fraction = value.get<double>();
      } else if (key == "max_exhaustive_bits") {
        config.max_exhaustive_bits = value.get<int>();
      } else if (key == "epsilon") {
        config.epsilon = value.get<double>();
      } else if (key == "delta") {
        config.delta = value.get<double>();
      } else if (key == "amp_iterations") {
        config.amp_iterations = value.get<int>();
      } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config: bad value for key '" + key + "': " + e.what());
    }
  }
  return config;
}

std::vector<isq::DecoderId> parse_decoder_list(const std::string& names) {
  std::vector<isq::DecoderId> out;
  std::stringstream ss(names);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(isq::decoder_by_name(item));
  }
  if (out.empty()) throw std::invalid_argument("decoder: empty list");
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

struct SimulateArgs {
  std::string config_path;
  std::vector<int> n_values;
  double alpha = 0.0;
  double xi = 0.0;
  std::vector<double> sigma_values;
  std::string decoder_list;
  std::string constellation;
  std::string fading;
  int trials = 0;
  std::uint64_t seed = 0;
  double k_fraction = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::string out_path;
  std::string jsonl_path;
  bool gnuplot = false;
  bool strict = false;
  int threads = 1;
};

void add_simulate_flags(CLI::App* cmd, SimulateArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file; flags override its values");
  cmd->add_option("--n", args.n_values, "transmitter counts (comma separated)")->delimiter(',');
  cmd->add_option("--alpha", args.alpha, "receive antennas per transmitter");
  cmd->add_option("--xi", args.xi, "antenna schedule exponent: alpha_n = 1/(ln n)^xi");
  cmd->add_option("--sigma", args.sigma_values, "noise standard deviations (comma separated)")
      ->delimiter(',');
  cmd->add_option("--decoder", args.decoder_list, "comma list of ml,isq,risq,grid,amp");
  cmd->add_option("--constellation", args.constellation, "bpsk|pam4|psk4");
  cmd->add_option("--fading", args.fading, "gaussian|rademacher|uniform");
  cmd->add_option("--trials", args.trials, "Monte Carlo trials per grid point");
  cmd->add_option("--seed", args.seed, "master seed");
  cmd->add_option("--k-fraction", args.k_fraction, "error fraction threshold for P_e^k");
  cmd->add_option("--epsilon", args.epsilon, "grid decoder pitch");
  cmd->add_option("--delta", args.delta, "grid decoder offset");
  cmd->add_option("--out", args.out_path, "CSV output path (default: stdout)");
  cmd->add_option("--jsonl", args.jsonl_path, "JSON-lines mirror output path");
  cmd->add_flag("--gnuplot", args.gnuplot, "write a companion gnuplot script next to --out");
  cmd->add_flag("--strict", args.strict, "exit 4 if any decoder/grid-point was skipped");
  cmd->add_option("--threads", args.threads, "worker threads (results are thread-count invariant)");
}

isq::ExperimentConfig build_config(const CLI::App* cmd, const SimulateArgs& args) {
  isq::ExperimentConfig config =
      args.config_path.empty() ? isq::ExperimentConfig{} : config_from_json(args.config_path);
  if (cmd->count("--n")) config.n_values = args.n_values;
  if (cmd->count("--alpha")) config.alpha = args.alpha;
  if (cmd->count("--xi")) config.xi = args.xi;
  if (cmd->count("--alpha") && !cmd->count("--xi")) config.xi.reset();
  if (cmd->count("--xi") && !cmd->count("--alpha")) config.alpha.reset();
  if (cmd->count("--sigma")) config.sigma_values = args.sigma_values;
  if (cmd->count("--decoder")) config.decoders = parse_decoder_list(args.decoder_list);
  if (cmd->count("--constellation")) config.constellation = args.constellation;
  if (cmd->count("--fading")) config.fading = isq::fading_by_name(args.fading);
  if (cmd->count("--trials")) config.trials = args.trials;
  if (cmd->count("--seed")) config.master_seed = args.seed;
  if (cmd->count("--k-fraction")) config.k_fraction = args.k_fraction;
  if (cmd->count("--epsilon")) config.epsilon = args.epsilon;
  if (cmd->count("--delta")) config.delta = args.delta;
  return config;
}

int emit_results(const isq::ExperimentResult& result, const isq::ExperimentConfig& config,
                 const SimulateArgs& args) {
  const std::string csv = isq::render_csv(result, config);
  if (args.out_path.empty())
    std::cout << csv;
  else
    write_file(args.out_path, csv);
  if (!args.jsonl_path.empty()) write_file(args.jsonl_path, isq::render_jsonl(result, config));
  if (args.gnuplot) {
    if (args.out_path.empty()) throw std::invalid_argument("--gnuplot requires --out");
    write_file(args.out_path + ".gp", isq::gnuplot_script(args.out_path, config));
  }
  double wall = 0.0;
  for (const auto& s : result.stats) wall += s.wall_time_s;
  std::cerr << "rows=" << result.stats.size() << " skips=" << result.skips.size()
            << " wall_s=" << isq::format_g9(wall) << "\n";
  for (const auto& skip : result.skips)
    std::cerr << "skip: decoder=" << isq::to_string(skip.decoder) << " n=" << skip.n
              << " sigma=" << isq::format_g9(skip.sigma) << " (" << skip.reason << ")\n";
  if (!result.skips.empty() && args.strict) return kExitStrictSkip;
  return kExitOk;
}

int cmd_simulate(const CLI::App* cmd, const SimulateArgs& args) {
  const isq::ExperimentConfig config = build_config(cmd, args);
  const isq::ExperimentResult result = isq::run_experiment(config, args.threads);
  return emit_results(result, config, args);
}

int cmd_sweep(const CLI::App* cmd, const SimulateArgs& args) {
  const isq::ExperimentConfig config = build_config(cmd, args);
  if (config.n_values.size() < 2)
    throw std::invalid_argument("n_values: sweep needs at least two n values");
  const isq::ExperimentResult result = isq::run_experiment(config, args.threads);
  const int code = emit_results(result, config, args);
  for (const isq::SweepSummary& sum : isq::sweep_summaries(result.stats)) {
    std::cout << "decoder=" << isq::to_string(sum.decoder)
              << " sigma=" << isq::format_g9(sum.sigma)
              << " non-increasing within CI: " << (sum.non_increasing_within_ci ? "true" : "false")
              << "\n";
  }
  return code;
}

struct BoundsArgs {
  int n = 16;
  double alpha = 1.0;
  double sigma = 1.0;
  double k_prime = 0.02;
  double epsilon = 0.25;
  double t = 1.0;
  double a = 0.0;
  bool optimize_t = false;
};

int cmd_bounds(const CLI::App* cmd, const BoundsArgs& args) {
  isq::BoundParams params;
  params.sigma = args.sigma;
  params.t = args.t;
  params.k_prime = args.k_prime;
  params.epsilon = args.epsilon;
  if (cmd->count("--a")) params.a = args.a;
  const isq::BoundReport rep = isq::evaluate_bounds(args.n, args.alpha, params, args.optimize_t);
  std::cout << "n                  " << args.n << "\n"
            << "alpha              " << isq::format_g9(args.alpha) << "\n"
            << "snr_per_antenna    " << isq::format_g9(rep.snr_per_antenna) << "\n"
            << "chernoff_t         " << isq::format_g9(rep.chernoff_t) << "\n"
            << "lemma1_threshold   " << isq::format_g9(rep.threshold) << "\n"
            << "chi_sq_per_pattern " << isq::format_g9(rep.per_pattern) << "\n"
            << "union_bound        " << isq::format_g9(rep.union_b) << "\n"
            << "grid_union_bound   " << isq::format_g9(rep.grid_union) << "\n"
            << "per_user_bound     " << isq::format_g9(rep.per_user) << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& suite) {
  std::vector<std::string> names =
      suite == "all" ? isq::verify_suite_names() : std::vector<std::string>{suite};
  bool all_passed = true;
  for (const std::string& name : names) {
    const isq::CheckResult res = isq::run_verify_suite(name);
    std::cout << (res.passed ? "[PASS] " : "[FAIL] ") << res.name << ": " << res.detail << "\n";
    all_passed = all_passed && res.passed;
  }
  return all_passed ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiuser decoder simulator for the single-input multiple-output MAC"};
  app.set_version_flag("--version", isq::kVersion);
  app.require_subcommand(1);

  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand("simulate", "run a Monte Carlo experiment grid");
  add_simulate_flags(simulate, sim_args);

  SimulateArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "run a grid over n and print trend verdicts");
  add_simulate_flags(sweep, sweep_args);

  BoundsArgs bounds_args;
  CLI::App* bounds = app.add_subcommand("bounds", "evaluate the analytical error bounds");
  bounds->add_option("--n", bounds_args.n, "transmitters");
  bounds->add_option("--alpha", bounds_args.alpha, "antennas per transmitter");
  bounds->add_option("--sigma", bounds_args.sigma, "noise standard deviation");
  bounds->add_option("--k-prime", bounds_args.k_prime, "block error fraction");
  bounds->add_option("--epsilon", bounds_args.epsilon, "grid pitch");
  bounds->add_option("--t", bounds_args.t, "Chernoff parameter");
  bounds->add_option("--a", bounds_args.a, "grid bound constant (default alpha/4)");
  bounds->add_flag("--optimize-t", bounds_args.optimize_t, "tune t by golden-section search");

  std::string verify_suite = "all";
  CLI::App* verify = app.add_subcommand("verify", "run a named property suite");
  verify->add_option("suite", verify_suite, "relaxation|lemma2|mgf|projection|determinism|all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(simulate, sim_args);
    if (sweep->parsed()) return cmd_sweep(sweep, sweep_args);
    if (bounds->parsed()) return cmd_bounds(bounds, bounds_args);
    if (verify->parsed()) return cmd_verify(verify_suite);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
