#ifndef UNITED_PSL_HPP
#define UNITED_PSL_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "united/induct.hpp"
#include "united/kernel.hpp"

namespace united {

struct SearchConfig;

/// Strategy combinator AST. Dynamic nodes expand into one alternative per
/// generated argument set; Thens sequences, Ors tries alternatives in order.
struct Strategy {
  enum class Kind {
    Auto,
    Simp,
    IsSolved,
    DynamicInduct,
    DynamicConjecture,
    Thens,
    Ors,
    Repeat,
  };
  Kind kind = Kind::Auto;
  std::vector<Strategy> children;  // Thens/Ors alternatives, Repeat body
  int max_iter = 1;                // Repeat only

  friend bool operator==(const Strategy&, const Strategy&) = default;
};

/// One line of a replayable proof script.
struct ProofStep {
  enum class Kind { Induct, Cases, Auto, Simp, Conjecture, Qed };
  Kind kind = Kind::Auto;
  InductArgs induct;   // Kind::Induct
  std::string var;     // Kind::Cases
  Formula conjecture;  // Kind::Conjecture
};

bool equal(const ProofStep& a, const ProofStep& b);

using ProofScript = std::vector<ProofStep>;

bool equal(const ProofScript& a, const ProofScript& b);

ProofStep step_auto();
ProofStep step_simp();
ProofStep step_qed();
ProofStep step_induct(InductArgs args);
ProofStep step_cases(std::string var);
ProofStep step_conjecture(Formula f);

/// The preregistered strategy: Thens [Dynamic(Induct), Auto, IsSolved].
Strategy dind_strategy();
std::optional<Strategy> lookup_named_strategy(std::string_view name);

struct StrategyStats {
  std::uint64_t nodes = 0;
  double millis = 0;
};

/// Enumerates outcomes of one strategy application by calling `yield` for
/// each result (residual sequents, steps taken so far, remaining choice
/// depth) in depth-first order. Enumeration stops early when `yield`
/// returns true; the return value reports whether that happened.
bool apply_strategy(
    const Theory& theory, const std::vector<Sequent>& state,
    const Strategy& strategy, int depth_budget, const SearchConfig& config,
    std::uint64_t& nodes_left,
    const std::function<bool(const std::vector<Sequent>&,
                             const std::vector<ProofStep>&, int)>& yield);

/// Iterative-deepening search over choice-point depth; returns the first
/// complete script reaching an empty state, or nullopt.
std::optional<ProofScript> run_strategy(const Theory& theory,
                                        const Formula& goal,
                                        const Strategy& strategy,
                                        const SearchConfig& config,
                                        StrategyStats* stats = nullptr);

}  // namespace united

#endif
