#ifndef UNITED_ABDUCE_HPP
#define UNITED_ABDUCE_HPP

#include <vector>

#include "united/config.hpp"
#include "united/eval.hpp"
#include "united/kernel.hpp"

namespace united {

struct ConjectureVerdict {
  enum class Kind { Valuable, NotStrongEnough, Refuted };
  Kind kind = Kind::NotStrongEnough;
  Counterexample cex;  // Refuted only
};

/// Candidate conjectures for a stuck sequent, deterministic and de-duplicated,
/// smaller conjectures first, capped at config.max_conjectures. Heuristics:
/// rewriting the target once with a hypothesis equation in either direction,
/// generalizing a shared non-variable subterm, generalizing a constant
/// argument with a synthesized right-hand side, and dropping premises. Each
/// result is closed, with variables renamed to canonical universal names.
std::vector<Formula> generate_conjectures(const Sequent& sequent,
                                          const Theory& theory,
                                          const SearchConfig& config);

/// NotStrongEnough when the conjecture does not make the goal dischargeable,
/// Refuted with a ground witness when it is falsifiable, Valuable otherwise.
ConjectureVerdict filter_conjecture(const Theory& theory,
                                    const Sequent& sequent,
                                    const Formula& conjecture,
                                    const SearchConfig& config);

/// The two-subgoal split: the input sequent with the conjecture assumed
/// schematically, plus the conjecture as a standalone sequent.
std::vector<Sequent> insert_conjecture(const Sequent& sequent,
                                       const Formula& conjecture);

}  // namespace united

#endif
