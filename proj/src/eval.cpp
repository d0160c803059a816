#include "united/eval.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace united {

namespace {

// Reduces to constructor normal form, innermost first. Returns nullptr when
// fuel runs out.
TermPtr reduce(const Theory& theory, const TermPtr& term, std::uint64_t& fuel) {
  if (term->is_var()) return term;  // callers guarantee ground terms
  std::vector<TermPtr> args;
  args.reserve(term->args().size());
  bool changed = false;
  for (const auto& a : term->args()) {
    TermPtr v = reduce(theory, a, fuel);
    if (!v) return nullptr;
    if (v != a) changed = true;
    args.push_back(std::move(v));
  }
  TermPtr t = changed ? Term::app(term->name(), std::move(args), term->type())
                      : term;
  const FunctionDef* f = theory.function(t->name());
  if (!f) return t;  // constructor application, already normal
  for (const auto& eq : f->equations) {
    Subst subst;
    bool ok = true;
    for (std::size_t i = 0; i < eq.patterns.size() && ok; ++i) {
      std::set<std::string> vars;
      for (const auto& v : free_vars(eq.patterns[i])) vars.insert(v.name);
      auto m = match(eq.patterns[i], t->args()[i], vars);
      if (!m) {
        ok = false;
        break;
      }
      for (auto& [k, v] : *m) subst[k] = v;
    }
    if (!ok) continue;
    if (fuel == 0) return nullptr;
    --fuel;
    return reduce(theory, substitute(eq.rhs, subst), fuel);
  }
  return t;  // no equation matched; only possible for non-ground input
}

}  // namespace

EvalResult eval(const Theory& theory, const TermPtr& term, std::uint64_t fuel) {
  if (fuel == 0) return {true, nullptr};
  TermPtr v = reduce(theory, term, fuel);
  if (!v) return {true, nullptr};
  return {false, v};
}

namespace {

// Cache of terms per (type, exact size) for one enumeration request.
struct Enumerator {
  const Theory& theory;
  std::map<std::pair<std::string, std::size_t>, std::vector<TermPtr>> cache;

  const std::vector<TermPtr>& of_size(const Type& type, std::size_t size) {
    auto key = std::make_pair(type.name, size);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<TermPtr> out;
    const DatatypeDef* dt = theory.datatype(type.name);
    if (dt && size >= 1) {
      for (const auto& c : dt->constructors) {
        std::vector<std::vector<TermPtr>> tuples;
        std::vector<TermPtr> current;
        fill_tuples(c.arg_types, 0, size - 1, current, tuples);
        for (auto& tuple : tuples)
          out.push_back(Term::app(c.name, std::move(tuple), type));
      }
    }
    return cache.emplace(key, std::move(out)).first->second;
  }

  // All argument tuples with exact total size, lexicographic in the
  // enumeration order of each slot.
  void fill_tuples(const std::vector<Type>& types, std::size_t index,
                   std::size_t total, std::vector<TermPtr>& current,
                   std::vector<std::vector<TermPtr>>& out) {
    if (index == types.size()) {
      if (total == 0) out.push_back(current);
      return;
    }
    std::size_t remaining_min = 0;
    for (std::size_t i = index + 1; i < types.size(); ++i) remaining_min += 1;
    for (std::size_t s = 1; s + remaining_min <= total; ++s) {
      for (const auto& t : of_size(types[index], s)) {
        current.push_back(t);
        fill_tuples(types, index + 1, total - s, current, out);
        current.pop_back();
      }
    }
  }
};

}  // namespace

std::vector<TermPtr> enumerate_terms(const Theory& theory, const Type& type,
                                     std::size_t max_size) {
  Enumerator e{theory, {}};
  std::vector<TermPtr> out;
  for (std::size_t s = 1; s <= max_size; ++s)
    for (const auto& t : e.of_size(type, s)) out.push_back(t);
  return out;
}

namespace {

struct TermPtrHash {
  std::size_t operator()(const TermPtr& t) const { return t->hash(); }
};
struct TermPtrEq {
  bool operator()(const TermPtr& a, const TermPtr& b) const {
    return equal(a, b);
  }
};
using NormalFormCache =
    std::unordered_map<TermPtr, TermPtr, TermPtrHash, TermPtrEq>;

// reduce() with a cache of ground normal forms; the same function calls
// recur across assignments, so this turns the scan from exponential
// re-evaluation into lookups.
TermPtr reduce_cached(const Theory& theory, const TermPtr& term,
                      std::uint64_t& fuel, NormalFormCache& cache) {
  if (term->is_var()) return term;
  auto it = cache.find(term);
  if (it != cache.end()) return it->second;
  std::vector<TermPtr> args;
  args.reserve(term->args().size());
  bool changed = false;
  for (const auto& a : term->args()) {
    TermPtr v = reduce_cached(theory, a, fuel, cache);
    if (!v) return nullptr;
    if (v != a) changed = true;
    args.push_back(std::move(v));
  }
  TermPtr t = changed ? Term::app(term->name(), std::move(args), term->type())
                      : term;
  const FunctionDef* f = theory.function(t->name());
  TermPtr result = t;
  if (f) {
    for (const auto& eq : f->equations) {
      Subst subst;
      bool ok = true;
      for (std::size_t i = 0; i < eq.patterns.size() && ok; ++i) {
        std::set<std::string> vars;
        for (const auto& v : free_vars(eq.patterns[i])) vars.insert(v.name);
        auto m = match(eq.patterns[i], t->args()[i], vars);
        if (!m) {
          ok = false;
          break;
        }
        for (auto& [k, v] : *m) subst[k] = v;
      }
      if (!ok) continue;
      if (fuel == 0) return nullptr;
      --fuel;
      result = reduce_cached(theory, substitute(eq.rhs, subst), fuel, cache);
      break;
    }
  }
  if (result) cache.emplace(term, result);
  return result;
}

struct AssignmentSearch {
  const Theory& theory;
  const Formula& formula;
  std::uint64_t fuel;
  std::vector<TypedVar> vars;
  std::vector<std::vector<TermPtr>> candidates;  // per variable, enum order
  mutable NormalFormCache cache;

  // Checks one ground assignment; true = counterexample. Out-of-fuel
  // evaluations make the assignment inconclusive, never a witness.
  bool refutes(const Subst& assignment) const {
    auto value = [&](const TermPtr& t) {
      std::uint64_t budget = fuel;
      return reduce_cached(theory, substitute(t, assignment), budget, cache);
    };
    for (const auto& p : formula.premises) {
      TermPtr l = value(p.lhs), r = value(p.rhs);
      if (!l || !r) return false;
      if (!equal(l, r)) return false;  // premise fails: vacuous
    }
    TermPtr l = value(formula.conclusion.lhs);
    TermPtr r = value(formula.conclusion.rhs);
    if (!l || !r) return false;
    return !equal(l, r);
  }

  // Depth-first over exact-size tuples yields lexicographic order within a
  // total size.
  bool search_exact(std::size_t index, std::size_t total, Subst& assignment,
                    std::optional<Counterexample>& found) const {
    if (index == vars.size()) {
      if (total != 0) return false;
      if (refutes(assignment)) {
        Counterexample cex;
        for (const auto& [k, v] : assignment) cex.assignment.emplace(k, v);
        found = std::move(cex);
        return true;
      }
      return false;
    }
    std::size_t remaining_min = vars.size() - index - 1;
    for (std::size_t s = 1; s + remaining_min <= total; ++s) {
      for (const auto& t : candidates[index]) {
        if (t->size() != s) continue;
        assignment[vars[index].name] = t;
        if (search_exact(index + 1, total - s, assignment, found)) return true;
      }
      assignment.erase(vars[index].name);
    }
    return false;
  }
};

}  // namespace

std::optional<Counterexample> find_counterexample(const Theory& theory,
                                                  const Formula& f,
                                                  std::size_t max_size,
                                                  std::uint64_t fuel) {
  AssignmentSearch search{theory, f, fuel, free_vars(f), {}};
  if (search.vars.empty()) {
    Subst empty;
    if (search.refutes(empty)) return Counterexample{};
    return std::nullopt;
  }
  for (const auto& v : search.vars)
    search.candidates.push_back(enumerate_terms(theory, v.type, max_size));
  std::optional<Counterexample> found;
  std::size_t max_total = max_size * search.vars.size();
  for (std::size_t total = search.vars.size(); total <= max_total; ++total) {
    Subst assignment;
    if (search.search_exact(0, total, assignment, found)) return found;
  }
  return std::nullopt;
}

}  // namespace united
