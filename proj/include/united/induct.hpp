#ifndef UNITED_INDUCT_HPP
#define UNITED_INDUCT_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "united/kernel.hpp"

namespace united {

/// One instantiation of the induct step: induction variables, variables to
/// generalize in the hypotheses, and an optional recursion-induction rule.
struct InductArgs {
  std::vector<std::string> on;
  std::vector<std::string> arbitrary;
  std::optional<std::string> rule;
  friend bool operator==(const InductArgs&, const InductArgs&) = default;
};

struct InductLimits {
  std::size_t max_arbitrary = 2;
};

class InvalidArgs : public std::runtime_error {
public:
  explicit InvalidArgs(const std::string& msg) : std::runtime_error(msg) {}
};

/// Deterministic candidate space for a sequent: structural induction on each
/// datatype variable of the target, then recursion induction for each defined
/// function occurrence whose arguments are all distinct variables; each
/// crossed with `arbitrary` subsets of the remaining variables.
std::vector<InductArgs> candidate_applications(const Sequent& sequent,
                                               const Theory& theory,
                                               const InductLimits& limits);

/// Case sequents for the given induction arguments. Throws InvalidArgs when
/// the arguments violate their invariants for this sequent.
std::vector<Sequent> apply_induction(const Sequent& sequent,
                                     const InductArgs& args,
                                     const Theory& theory);

/// Constructor case split without induction hypotheses.
std::vector<Sequent> apply_cases(const Sequent& sequent, const std::string& var,
                                 const Theory& theory);

}  // namespace united

#endif
