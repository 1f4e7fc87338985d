#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "allocsim/mechanism.hpp"

namespace allocsim::cli {

enum class OutputFormat { Csv, Json };

/// Parsed command-line configuration; echoed into every output file header.
struct RunConfig {
  std::string subcommand;

  int table = 0;   // limits
  int figure = 0;  // figure

  std::vector<Mechanism> mechanisms;  // simulate/converge use the first entry
  std::uint32_t n = 1000;
  std::uint64_t trials = 100;
  std::uint64_t seed = 12345;
  bool random_seed = false;

  std::vector<double> theta_grid;
  std::vector<std::uint32_t> k_list = {1, 2, 3};
  std::uint32_t k_max = 10;
  std::string rule = "approval:1";
  std::uint32_t s_max = 200;
  std::uint32_t r_max = 10;
  std::uint32_t fig_r_max = 5;  // round series in figure 1
  std::uint32_t fig_s_max = 6;  // rank series in figures 2-4
  std::vector<std::uint32_t> n_list = {100, 1000, 10000};
  std::string stat = "survivors";
  std::uint32_t stat_round = 2;

  unsigned threads = 0;  // 0: ALLOCSIM_THREADS or 1
  bool force = false;
  bool raw_totals = false;

  std::string out_dir = ".";
  OutputFormat format = OutputFormat::Csv;

  std::vector<std::pair<std::string, std::string>> echo() const;
};

}  // namespace allocsim::cli
