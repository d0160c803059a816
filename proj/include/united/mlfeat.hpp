#ifndef UNITED_MLFEAT_HPP
#define UNITED_MLFEAT_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "united/induct.hpp"
#include "united/kernel.hpp"

namespace united {

/// Assertion over a (sequent, induct-arguments) pair: boolean connectives,
/// finite quantifiers over induction variables / arbitrary variables /
/// functions in the target / occurrences of a bound variable, and atomic
/// predicates about recursion and accumulator argument positions.
struct FeatureExpr;
using FeatureExprPtr = std::shared_ptr<const FeatureExpr>;

struct FeatureExpr {
  enum class Kind {
    Not,
    And,
    Or,
    Implies,
    Some,
    All,
    IsDatatypeVar,
    OccursInConclusion,
    IsRecursive,
    AtRecArgpos,
    AtVaryingArgpos,
    UsesRule,
    RuleFunctionOccursInGoal,
    CountOnLe,
    CountArbitraryLe,
  };
  enum class Domain { InductionVar, ArbitraryVar, Function, Occurrence };

  Kind kind = Kind::UsesRule;
  std::vector<FeatureExprPtr> children;
  Domain domain = Domain::InductionVar;  // quantifiers
  std::string binder;                    // quantifier variable
  std::string of_var;                    // Occurrence domain: whose occurrences
  std::string arg0, arg1;                // atom arguments
  int bound = 0;                         // CountOnLe / CountArbitraryLe
};

struct FeatureSet {
  std::vector<FeatureExprPtr> exprs;
  std::vector<std::string> names;  // source line per feature
  std::size_t size() const { return exprs.size(); }
};

using FeatureVector = std::vector<bool>;

struct Weights {
  std::vector<double> values;
};

bool eval_feature(const FeatureExprPtr& expr, const Sequent& sequent,
                  const InductArgs& args, const Theory& theory);

FeatureVector extract(const Sequent& sequent, const InductArgs& args,
                      const FeatureSet& features, const Theory& theory);

/// Weighted sum of true features. Throws std::invalid_argument on a
/// length mismatch.
double score(const FeatureVector& v, const Weights& w);

/// Candidates sorted by score descending; ties keep the input order.
std::vector<std::pair<InductArgs, double>> rank(
    const std::vector<std::pair<InductArgs, FeatureVector>>& candidates,
    const Weights& w);

/// One assertion per line; '#' comments and blank lines are skipped.
FeatureSet parse_features(std::string_view text);
/// One real per line, aligned with the feature set.
Weights parse_weights(std::string_view text);
std::string print_features(const FeatureSet& fs);
std::string print_weights(const Weights& w);

FeatureSet default_feature_set();
Weights default_weights();

class UnknownChoice : public std::runtime_error {
public:
  explicit UnknownChoice(const std::string& msg) : std::runtime_error(msg) {}
};

struct FitExample {
  const Theory* theory = nullptr;
  Sequent root;
  InductArgs chosen;
};

/// Add-one smoothed log-odds per feature over chosen vs non-chosen
/// candidates. Throws UnknownChoice when a chosen candidate is not in the
/// enumerated space.
Weights fit_weights(const std::vector<FitExample>& corpus,
                    const FeatureSet& features, const InductLimits& limits);

/// Recursion argument positions of f: some defining equation's recursive
/// call passes a strict subterm of the pattern at that position.
std::vector<std::size_t> recursion_positions(const FunctionDef& f);
/// Accumulator positions: the call argument differs from the pattern and is
/// not a strict subterm of it.
std::vector<std::size_t> varying_positions(const FunctionDef& f);

}  // namespace united

#endif
