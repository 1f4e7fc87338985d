#include <cstdio>
#include <exception>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "allocsim/version.hpp"
#include "commands.hpp"

namespace {

using allocsim::Mechanism;
using allocsim::cli::OutputFormat;
using allocsim::cli::RunConfig;

void add_common(CLI::App* cmd, RunConfig& config, std::string& seed_text,
                std::string& format_text) {
  cmd->add_option("--seed", seed_text, "Master seed (integer) or 'random'")
      ->capture_default_str();
  cmd->add_option("--out", config.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--format", format_text, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--threads", config.threads,
                  "Trial parallelism (0: ALLOCSIM_THREADS or 1)")
      ->capture_default_str();
}

void finish_common(RunConfig& config, const std::string& seed_text,
                   const std::string& format_text) {
  if (seed_text == "random") {
    std::random_device rd;
    config.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    config.random_seed = true;
  } else {
    try {
      config.seed = std::stoull(seed_text);
    } catch (...) {
      throw allocsim::cli::BadConfig("bad --seed value: " + seed_text);
    }
  }
  config.format = format_text == "json" ? OutputFormat::Json : OutputFormat::Csv;
}

std::vector<Mechanism> parse_mechanisms(const std::vector<std::string>& names) {
  std::vector<Mechanism> out;
  for (const auto& name : names) {
    try {
      out.push_back(allocsim::mechanism_from_name(name));
    } catch (const allocsim::Error& e) {
      throw allocsim::cli::BadConfig(e.what());
    }
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Housing-allocation mechanism simulator and limit calculator"};
  app.set_version_flag("--version", std::string(allocsim::kVersion));
  app.require_subcommand(1);

  RunConfig config;
  std::string seed_text = "12345";
  std::string format_text = "csv";
  std::vector<std::string> mech_names;

  auto* limits = app.add_subcommand("limits", "Evaluate limiting-quantity tables");
  limits->add_option("--table", config.table, "Table id: 1, 2, 3 or 4")->required();
  limits->add_option("--theta", config.theta_grid, "Theta grid points")->delimiter(',');
  limits->add_option("--k", config.k_list, "k values for tables 3 and 4")
      ->delimiter(',');
  limits->add_option("--rmax", config.r_max, "Rounds to tabulate")
      ->capture_default_str();
  limits->add_option("--smax", config.s_max, "Rank truncation")->capture_default_str();
  add_common(limits, config, seed_text, format_text);

  auto* figure = app.add_subcommand("figure", "Emit per-figure plot data");
  figure->add_option("--id", config.figure, "Figure id: 1..6")->required();
  figure->add_option("--rmax", config.fig_r_max, "Round series count")
      ->capture_default_str();
  figure->add_option("--smax", config.fig_s_max, "Rank series count")
      ->capture_default_str();
  figure->add_option("--kmax", config.k_max, "Largest k for figures 5 and 6")
      ->capture_default_str();
  add_common(figure, config, seed_text, format_text);

  auto* simulate = app.add_subcommand("simulate", "Run trials and compare to limits");
  simulate->add_option("--mech", mech_names, "Mechanism: sd, nb or ab")
      ->required()
      ->delimiter(',');
  simulate->add_option("--n", config.n, "Agents (= items)")->capture_default_str();
  simulate->add_option("--trials", config.trials, "Independent trials")
      ->capture_default_str();
  simulate->add_option("--theta-grid", config.theta_grid, "Theta grid points")
      ->delimiter(',');
  simulate->add_option("--rule", config.rule, "Scoring rule: borda or approval:k")
      ->capture_default_str();
  simulate->add_option("--rmax", config.r_max, "Rounds reported")->capture_default_str();
  simulate->add_option("--smax", config.s_max, "Rank histogram truncation")
      ->capture_default_str();
  simulate->add_flag("--raw", config.raw_totals, "Also report raw welfare totals");
  simulate->add_flag("--force", config.force, "Override the n * trials resource cap");
  add_common(simulate, config, seed_text, format_text);

  auto* converge = app.add_subcommand("converge", "Error-vs-n decay tables");
  converge->add_option("--mech", mech_names, "Mechanism: sd, nb or ab")
      ->required()
      ->delimiter(',');
  converge->add_option("--stat", config.stat, "Statistic: survivors or welfare")
      ->capture_default_str();
  converge->add_option("--r", config.stat_round, "Round for the survivors statistic")
      ->capture_default_str();
  converge->add_option("--rule", config.rule, "Scoring rule for the welfare statistic")
      ->capture_default_str();
  converge->add_option("--n-list", config.n_list, "Instance sizes")->delimiter(',');
  converge->add_option("--trials", config.trials, "Trials per instance size")
      ->default_val(50);
  converge->add_option("--theta-grid", config.theta_grid, "Theta grid points")
      ->delimiter(',');
  converge->add_option("--smax", config.s_max, "Rank truncation for welfare limits")
      ->capture_default_str();
  converge->add_flag("--force", config.force, "Override the n * trials resource cap");
  add_common(converge, config, seed_text, format_text);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    finish_common(config, seed_text, format_text);
    config.mechanisms = parse_mechanisms(mech_names);

    std::vector<std::filesystem::path> files;
    if (limits->parsed()) {
      config.subcommand = "limits";
      files = allocsim::cli::cmd_limits(config);
    } else if (figure->parsed()) {
      config.subcommand = "figure";
      files = allocsim::cli::cmd_figure(config);
    } else if (simulate->parsed()) {
      config.subcommand = "simulate";
      files = allocsim::cli::cmd_simulate(config);
    } else {
      config.subcommand = "converge";
      files = allocsim::cli::cmd_converge(config);
    }
    for (const auto& f : files) std::printf("wrote %s\n", f.string().c_str());
    return 0;
  } catch (const allocsim::cli::BadConfig& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (...) {
    std::fprintf(stderr, "error: unknown failure\n");
    return 3;
  }
}
