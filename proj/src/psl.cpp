#include "united/psl.hpp"

#include <chrono>

#include "united/abduce.hpp"
#include "united/config.hpp"
#include "united/unite.hpp"

namespace united {

Strategy dind_strategy() {
  Strategy d;
  d.kind = Strategy::Kind::Thens;
  d.children.resize(3);
  d.children[0].kind = Strategy::Kind::DynamicInduct;
  d.children[1].kind = Strategy::Kind::Auto;
  d.children[2].kind = Strategy::Kind::IsSolved;
  return d;
}

std::optional<Strategy> lookup_named_strategy(std::string_view name) {
  if (name == "DInd") return dind_strategy();
  return std::nullopt;
}

namespace {

using Yield = std::function<bool(const std::vector<Sequent>&,
                                 const std::vector<ProofStep>&, int)>;

struct StrategyRun {
  const Theory& theory;
  const SearchConfig& config;
  std::uint64_t& nodes_left;
  std::vector<ProofStep> steps;

  bool spend_node() {
    if (nodes_left == 0) return false;
    --nodes_left;
    return true;
  }

  bool with_step(ProofStep step, const std::vector<Sequent>& state, int depth,
                 const Yield& yield) {
    steps.push_back(std::move(step));
    bool stop = yield(state, steps, depth);
    steps.pop_back();
    return stop;
  }

  bool apply(const std::vector<Sequent>& state, const Strategy& strat,
             int depth, const Yield& yield) {
    if (!spend_node()) return false;
    switch (strat.kind) {
      case Strategy::Kind::Auto:
      case Strategy::Kind::Simp: {
        ProofStep step = strat.kind == Strategy::Kind::Auto ? step_auto()
                                                            : step_simp();
        if (auto next = apply_step(theory, state, step, config))
          return with_step(std::move(step), *next, depth, yield);
        return false;
      }
      case Strategy::Kind::IsSolved:
        return state.empty() && yield(state, steps, depth);
      case Strategy::Kind::DynamicInduct: {
        if (state.empty() || depth <= 0) return false;
        for (auto& [args, score] : scored_candidates(state.front(), theory,
                                                     config)) {
          (void)score;
          ProofStep step = step_induct(args);
          if (auto next = apply_step(theory, state, step, config))
            if (with_step(std::move(step), *next, depth - 1, yield))
              return true;
        }
        return false;
      }
      case Strategy::Kind::DynamicConjecture: {
        if (state.empty() || depth <= 0) return false;
        for (const auto& conj :
             generate_conjectures(state.front(), theory, config)) {
          if (!conjecture_valuable(theory, state.front(), conj, config))
            continue;
          ProofStep step = step_conjecture(conj);
          if (auto next = apply_step(theory, state, step, config))
            if (with_step(std::move(step), *next, depth - 1, yield))
              return true;
        }
        return false;
      }
      case Strategy::Kind::Thens:
        return apply_seq(state, strat.children, 0, depth, yield);
      case Strategy::Kind::Ors: {
        for (const auto& child : strat.children) {
          if (depth <= 0) return false;
          if (apply(state, child, depth - 1, yield)) return true;
        }
        return false;
      }
      case Strategy::Kind::Repeat:
        return apply_repeat(state, strat.children.front(), strat.max_iter,
                            depth, yield);
    }
    return false;
  }

  bool apply_seq(const std::vector<Sequent>& state,
                 const std::vector<Strategy>& children, std::size_t index,
                 int depth, const Yield& yield) {
    if (index == children.size()) return yield(state, steps, depth);
    return apply(state, children[index], depth,
                 [&](const std::vector<Sequent>& s2,
                     const std::vector<ProofStep>&, int d2) {
                   return apply_seq(s2, children, index + 1, d2, yield);
                 });
  }

  bool apply_repeat(const std::vector<Sequent>& state, const Strategy& body,
                    int iters_left, int depth, const Yield& yield) {
    if (iters_left == 0) return yield(state, steps, depth);
    bool applied = false;
    bool stop = apply(state, body, depth,
                      [&](const std::vector<Sequent>& s2,
                          const std::vector<ProofStep>&, int d2) {
                        applied = true;
                        return apply_repeat(s2, body, iters_left - 1, d2, yield);
                      });
    if (stop) return true;
    // the body no longer applies: yield the state as-is
    if (!applied) return yield(state, steps, depth);
    return false;
  }
};

}  // namespace

bool apply_strategy(const Theory& theory, const std::vector<Sequent>& state,
                    const Strategy& strategy, int depth_budget,
                    const SearchConfig& config, std::uint64_t& nodes_left,
                    const Yield& yield) {
  StrategyRun run{theory, config, nodes_left, {}};
  return run.apply(state, strategy, depth_budget, yield);
}

std::optional<ProofScript> run_strategy(const Theory& theory,
                                        const Formula& goal,
                                        const Strategy& strategy,
                                        const SearchConfig& config,
                                        StrategyStats* stats) {
  auto start = std::chrono::steady_clock::now();
  std::uint64_t nodes_left = config.strategy_max_nodes;
  std::vector<Sequent> root{root_sequent(goal)};

  std::optional<ProofScript> found;
  for (int d = 1; d <= config.strategy_max_depth && !found; ++d) {
    apply_strategy(theory, root, strategy, d, config, nodes_left,
                   [&](const std::vector<Sequent>& state,
                       const std::vector<ProofStep>& steps, int) {
                     if (!state.empty()) return false;
                     ProofScript script = steps;
                     script.push_back(step_qed());
                     found = std::move(script);
                     return true;
                   });
    if (nodes_left == 0) break;
  }
  if (stats) {
    stats->nodes = config.strategy_max_nodes - nodes_left;
    stats->millis = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  }
  return found;
}

}  // namespace united
