#include "united/config.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <string>

namespace united {

SearchConfig default_config() {
  SearchConfig c;
  c.features = default_feature_set();
  c.weights = default_weights();
  return c;
}

namespace {

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.pop_back();
  std::size_t lead = 0;
  while (lead < s.size() && std::isspace(static_cast<unsigned char>(s[lead])))
    ++lead;
  return s.substr(lead);
}

}  // namespace

void apply_config_text(SearchConfig& config, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line without '=': " + t);
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    auto as_u64 = [&] { return std::stoull(value); };
    auto as_int = [&] { return std::stoi(value); };
    auto as_double = [&] { return std::stod(value); };
    if (key == "simp_steps") config.deduct.simp_steps = as_int();
    else if (key == "auto_iters") config.deduct.auto_iters = as_int();
    else if (key == "rule_cap") config.deduct.rule_cap = as_int();
    else if (key == "implication_induction")
      config.deduct.implication_induction = value == "true" || value == "1";
    else if (key == "max_arbitrary") config.induct.max_arbitrary = as_u64();
    else if (key == "max_conjectures") config.max_conjectures = as_u64();
    else if (key == "refute_size") config.refute_size = as_u64();
    else if (key == "eval_fuel") config.eval_fuel = as_u64();
    else if (key == "use_ranking")
      config.use_ranking = value == "true" || value == "1";
    else if (key == "top_k") config.top_k = as_u64();
    else if (key == "w_score") config.w_score = as_double();
    else if (key == "w_goal_size") config.w_goal_size = as_double();
    else if (key == "w_depth") config.w_depth = as_double();
    else if (key == "w_goal_count") config.w_goal_count = as_double();
    else if (key == "deductive_bonus") config.deductive_bonus = as_double();
    else if (key == "max_nodes") config.max_nodes = as_u64();
    else if (key == "strategy_max_depth") config.strategy_max_depth = as_int();
    else if (key == "strategy_max_nodes") config.strategy_max_nodes = as_u64();
    else if (key == "timeout_sec") config.timeout_sec = as_double();
    else
      throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

}  // namespace united
