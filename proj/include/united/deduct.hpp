#ifndef UNITED_DEDUCT_HPP
#define UNITED_DEDUCT_HPP

#include <set>
#include <string>
#include <vector>

#include "united/kernel.hpp"

namespace united {

/// Oriented rewrite rule. `schematic_vars` is the matchable set; variables of
/// the lhs outside it stand for themselves (frozen eigenvariables).
struct RewriteRule {
  enum class Origin { DefiningEquation, ProvedLemma, Hypothesis, Conjecture };
  TermPtr lhs;
  TermPtr rhs;
  std::vector<Equation> conditions;
  std::set<std::string> schematic_vars;
  Origin origin = Origin::ProvedLemma;
  std::string label;
  bool capped = false;  // per-rule application cap applies
};

struct DeductBudgets {
  int simp_steps = 2000;
  int auto_iters = 500;
  int rule_cap = 3;  // applications per capped rule per simp run
  bool implication_induction = true;
};

struct DeductOutcome {
  enum class Kind { Solved, Progress, Stuck };
  Kind kind = Kind::Stuck;
  std::vector<Sequent> residual;  // empty for Solved
  std::vector<std::string> trace;

  bool solved() const { return kind == Kind::Solved; }
};

/// Exhaustive rewriting of the target: defining equations innermost, proved
/// lemmas left-to-right, premise/hypothesis equations in both orientations
/// under a per-rule cap. Solved on a reflexive conclusion or a constructor
/// clash in a premise or hypothesis.
DeductOutcome simp(const Theory& theory, const Sequent& sequent,
                   const DeductBudgets& budgets);

/// Fixpoint of simp, constructor injectivity splitting, and closing by
/// instantiating a schematic hypothesis against the conclusion.
DeductOutcome auto_prove(const Theory& theory, const Sequent& sequent,
                         const DeductBudgets& budgets);

/// True when the sequent is dischargeable once the conjecture is assumed
/// (all conjecture variables schematic), optionally after one level of
/// structural induction on a single goal variable.
bool prove_implication(const Theory& theory, const Formula& conjecture,
                       const Sequent& sequent, const DeductBudgets& budgets);

/// True when the two terms disagree on some rigid constructor position.
bool constructor_clash(const Theory& theory, const TermPtr& a, const TermPtr& b);

}  // namespace united

#endif
