#include "run_config.hpp"

#include <sstream>

namespace allocsim::cli {

namespace {

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::ostringstream out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out << ' ';
    out << xs[i];
  }
  return out.str();
}

}  // namespace

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("command", subcommand);
  if (table) kv.emplace_back("table", std::to_string(table));
  if (figure) kv.emplace_back("figure", std::to_string(figure));
  if (!mechanisms.empty()) {
    std::string names;
    for (auto m : mechanisms) {
      if (!names.empty()) names += ' ';
      names += mechanism_name(m);
    }
    kv.emplace_back("mechanisms", names);
  }
  kv.emplace_back("n", std::to_string(n));
  kv.emplace_back("trials", std::to_string(trials));
  kv.emplace_back("seed", std::to_string(seed));
  if (!theta_grid.empty()) kv.emplace_back("theta_grid", join(theta_grid));
  kv.emplace_back("k_list", join(k_list));
  kv.emplace_back("k_max", std::to_string(k_max));
  kv.emplace_back("rule", rule);
  kv.emplace_back("s_max", std::to_string(s_max));
  kv.emplace_back("r_max", std::to_string(r_max));
  if (subcommand == "converge") {
    kv.emplace_back("n_list", join(n_list));
    kv.emplace_back("stat", stat);
    kv.emplace_back("stat_round", std::to_string(stat_round));
  }
  // thread count cannot influence results, so it is not part of provenance
  return kv;
}

}  // namespace allocsim::cli
