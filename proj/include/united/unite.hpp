#ifndef UNITED_UNITE_HPP
#define UNITED_UNITE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "united/abduce.hpp"
#include "united/config.hpp"
#include "united/eval.hpp"
#include "united/psl.hpp"

namespace united {

class UnknownGoal : public std::runtime_error {
public:
  explicit UnknownGoal(const std::string& name)
      : std::runtime_error("unknown goal '" + name + "'") {}
};

/// Search node: open sequents plus the step log that produced them.
/// Replaying the log from the root reproduces `goals` exactly, because
/// search children and replay use the same step semantics (apply_step).
struct ProofState {
  std::vector<Sequent> goals;
  ProofScript log;
  std::size_t depth = 0;
  std::uint64_t seqno = 0;
};

/// Max-priority queue with FIFO tie-breaking by insertion order.
class StateQueue {
public:
  void push(double priority, ProofState state);
  ProofState pop();  // highest priority, lowest seqno among equals
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

private:
  struct Entry {
    double priority;
    std::uint64_t seqno;
    ProofState state;
  };
  static bool less(const Entry& a, const Entry& b);
  std::vector<Entry> heap_;
  std::uint64_t next_seqno_ = 0;
};

struct SearchStats {
  std::uint64_t nodes = 0;
  double millis = 0;
};

struct SearchResult {
  enum class Kind { Proved, Refuted, GaveUp };
  enum class GaveUpReason { BudgetExhausted, QueueEmpty };
  Kind kind = Kind::GaveUp;
  GaveUpReason reason = GaveUpReason::QueueEmpty;
  ProofScript script;  // Proved
  Counterexample cex;  // Refuted
  SearchStats stats;
};

/// The single step semantics shared by search, strategy execution and
/// replay. Returns the new open sequents, or nullopt when the step does not
/// apply (with the reason in *why_not). Qed is handled by callers.
std::optional<std::vector<Sequent>> apply_step(const Theory& theory,
                                               const std::vector<Sequent>& goals,
                                               const ProofStep& step,
                                               const SearchConfig& config,
                                               std::string* why_not = nullptr);

/// Same Valuable test as filter_conjecture (refutation checked first since
/// it is cheaper); used by the search loops.
bool conjecture_valuable(const Theory& theory, const Sequent& sequent,
                         const Formula& conjecture, const SearchConfig& config);

/// Candidate induction arguments with their scores, best first (ranking
/// disabled leaves enumeration order with zero scores).
std::vector<std::pair<InductArgs, double>> scored_candidates(
    const Sequent& sequent, const Theory& theory, const SearchConfig& config);

double priority(const ProofState& state, const ProofStep& step,
                double step_score, const SearchConfig& config);

struct Expansion {
  ProofStep step;
  ProofState state;
  double prio = 0;
};

/// Children of a state: deductive (auto), abductive (each valuable
/// conjecture), inductive (top-K ranked candidates), in that order.
std::vector<Expansion> expand(const Theory& theory, const ProofState& state,
                              const SearchConfig& config,
                              std::uint64_t& seqno_counter);

/// Best-first proof search for a named goal: refutation first, then the
/// priority-queue loop until proved, exhausted or out of budget.
SearchResult united_prove(const Theory& theory, const std::string& goal_name,
                          const SearchConfig& config);

struct ReplayError {
  std::size_t step_index = 0;  // 1-based
  std::string reason;
};

/// Deterministic replay; nullopt means the script proves the goal.
std::optional<ReplayError> check_script(const Theory& theory,
                                        const std::string& goal_name,
                                        const ProofScript& script,
                                        const SearchConfig& config);

/// Drops steps whose removal keeps the script replayable.
ProofScript minimize_script(const Theory& theory, const std::string& goal_name,
                            ProofScript script, const SearchConfig& config);

}  // namespace united

#endif
