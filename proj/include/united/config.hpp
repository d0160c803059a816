#ifndef UNITED_CONFIG_HPP
#define UNITED_CONFIG_HPP

#include <cstdint>
#include <string_view>

#include "united/deduct.hpp"
#include "united/induct.hpp"
#include "united/mlfeat.hpp"

namespace united {

/// All tunables of the prover in one place. Defaults here are the shipped
/// defaults; a config file and command-line flags may override them.
struct SearchConfig {
  DeductBudgets deduct;
  InductLimits induct;

  std::size_t max_conjectures = 8;
  std::size_t refute_size = 8;
  std::uint64_t eval_fuel = 10000;

  FeatureSet features;
  Weights weights;
  bool use_ranking = true;
  std::size_t top_k = 5;

  // priority = w_score * stepScore - w_goal_size * sum(goal sizes)
  //            - w_depth * depth - w_goal_count * #goals
  double w_score = 1.0;
  double w_goal_size = 0.1;
  double w_depth = 0.5;
  double w_goal_count = 1.0;
  double deductive_bonus = 5.0;

  std::uint64_t max_nodes = 50000;
  int strategy_max_depth = 4;
  std::uint64_t strategy_max_nodes = 10000;
  double timeout_sec = 0.0;  // 0 = no timeout
};

SearchConfig default_config();

/// Applies `key = value` lines; '#' starts a comment. Unknown keys raise
/// std::invalid_argument.
void apply_config_text(SearchConfig& config, std::string_view text);

}  // namespace united

#endif
