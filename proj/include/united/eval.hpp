#ifndef UNITED_EVAL_HPP
#define UNITED_EVAL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "united/kernel.hpp"

namespace united {

/// Outcome of reducing a ground term: a constructor normal form, or fuel
/// exhaustion before one was reached.
struct EvalResult {
  bool out_of_fuel = false;
  TermPtr value;  // set iff !out_of_fuel
};

/// Call-by-value reduction with the theory's defining equations. Each
/// equation application consumes one unit of fuel.
EvalResult eval(const Theory& theory, const TermPtr& term, std::uint64_t fuel);

/// All ground constructor terms of the type with term_size <= max_size,
/// in nondecreasing size; ties broken by constructor declaration order,
/// then left-to-right argument enumeration order.
std::vector<TermPtr> enumerate_terms(const Theory& theory, const Type& type,
                                     std::size_t max_size);

struct Counterexample {
  std::map<std::string, TermPtr> assignment;
};

/// First assignment (variables by first occurrence; nondecreasing total
/// size, lexicographic within equal size) under which all premises hold and
/// the conclusion's sides evaluate to different normal forms. Assignments
/// that run out of fuel are skipped.
std::optional<Counterexample> find_counterexample(const Theory& theory,
                                                  const Formula& f,
                                                  std::size_t max_size,
                                                  std::uint64_t fuel);

}  // namespace united

#endif
