#ifndef UNITED_TEST_HELPERS_HPP
#define UNITED_TEST_HELPERS_HPP

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "united/eval.hpp"
#include "united/kernel.hpp"
#include "united/syntax.hpp"

namespace testutil {

using namespace united;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_path(const std::string& name) {
  return std::string(TEST_DATA_DIR) + "/" + name;
}

inline Theory load_theory(const std::string& name) {
  return parse_theory(read_file(data_path(name)));
}

/// Parses a term against a theory's signature by wrapping it in a trivial
/// equation (the formula parser carries the variable typing).
inline TermPtr tparse(const Theory& theory, const std::string& text) {
  return parse_formula(text + " = " + text, theory).conclusion.lhs;
}

inline Formula fparse(const Theory& theory, const std::string& text) {
  return parse_formula(text, theory);
}

// --- independent reference interpreter (test oracle) -------------------------
//
// Deliberately written in a different style from the engine: explicit
// first-match selection with its own pattern walk, so agreement is
// meaningful.

inline bool ref_match(const TermPtr& pattern, const TermPtr& subject,
                      Subst& bindings) {
  if (pattern->is_var()) {
    auto it = bindings.find(pattern->name());
    if (it != bindings.end()) return equal(it->second, subject);
    bindings[pattern->name()] = subject;
    return true;
  }
  if (!subject->is_app() || subject->name() != pattern->name()) return false;
  for (std::size_t i = 0; i < pattern->args().size(); ++i)
    if (!ref_match(pattern->args()[i], subject->args()[i], bindings))
      return false;
  return true;
}

/// Normal form of a ground term, or nullptr when `steps` hits zero.
inline TermPtr ref_eval(const Theory& theory, const TermPtr& term,
                        long& steps) {
  if (steps < 0) return nullptr;
  if (term->is_var()) return term;
  std::vector<TermPtr> args;
  for (const auto& a : term->args()) {
    TermPtr v = ref_eval(theory, a, steps);
    if (!v) return nullptr;
    args.push_back(v);
  }
  TermPtr t = Term::app(term->name(), args, term->type());
  const FunctionDef* f = theory.function(t->name());
  if (!f) return t;
  for (const auto& eq : f->equations) {
    Subst bindings;
    bool all = true;
    for (std::size_t i = 0; i < eq.patterns.size(); ++i)
      if (!ref_match(eq.patterns[i], t->args()[i], bindings)) {
        all = false;
        break;
      }
    if (!all) continue;
    if (--steps < 0) return nullptr;
    return ref_eval(theory, substitute(eq.rhs, bindings), steps);
  }
  return t;
}

inline TermPtr ref_eval(const Theory& theory, const TermPtr& term) {
  long steps = 1000000;
  return ref_eval(theory, term, steps);
}

/// Ground truth of a formula under one assignment, by the reference
/// interpreter. Premise failure makes the formula vacuously true.
inline bool ref_holds(const Theory& theory, const Formula& f,
                      const Subst& assignment) {
  auto value = [&](const TermPtr& t) {
    return ref_eval(theory, substitute(t, assignment));
  };
  for (const auto& p : f.premises) {
    TermPtr l = value(p.lhs), r = value(p.rhs);
    REQUIRE(l);
    REQUIRE(r);
    if (!equal(l, r)) return true;
  }
  TermPtr l = value(f.conclusion.lhs), r = value(f.conclusion.rhs);
  REQUIRE(l);
  REQUIRE(r);
  return equal(l, r);
}

/// Exhaustively tests a formula over assignments with each term bounded by
/// max_size; returns false as soon as one assignment falsifies it.
inline bool ref_true_up_to(const Theory& theory, const Formula& f,
                           std::size_t max_size) {
  std::vector<TypedVar> vars = free_vars(f);
  std::vector<std::vector<TermPtr>> domains;
  for (const auto& v : vars)
    domains.push_back(enumerate_terms(theory, v.type, max_size));
  std::vector<std::size_t> index(vars.size(), 0);
  while (true) {
    Subst assignment;
    for (std::size_t i = 0; i < vars.size(); ++i)
      assignment[vars[i].name] = domains[i][index[i]];
    if (!ref_holds(theory, f, assignment)) return false;
    std::size_t i = 0;
    for (; i < vars.size(); ++i) {
      if (++index[i] < domains[i].size()) break;
      index[i] = 0;
    }
    if (i == vars.size()) return vars.empty() ? ref_holds(theory, f, {}) : true;
    if (vars.empty()) return ref_holds(theory, f, {});
  }
}

// --- random generators --------------------------------------------------------

struct Rng {
  std::mt19937 gen;
  explicit Rng(unsigned seed) : gen(seed) {}
  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen);
  }
  bool flip() { return below(2) == 0; }
};

/// Random ground constructor term of the type, up to a size budget.
inline TermPtr random_ground(const Theory& theory, const Type& type, Rng& rng,
                             std::size_t budget) {
  const DatatypeDef* dt = theory.datatype(type.name);
  std::vector<const Constructor*> viable;
  for (const auto& c : dt->constructors) {
    bool recursive = false;
    for (const auto& at : c.arg_types)
      if (at == type) recursive = true;
    if (budget <= 2 && recursive) continue;
    viable.push_back(&c);
  }
  if (viable.empty()) viable.push_back(&dt->constructors.front());
  const Constructor* c = viable[rng.below(viable.size())];
  std::vector<TermPtr> args;
  for (const auto& at : c->arg_types)
    args.push_back(random_ground(theory, at, rng, budget > 1 ? budget - 2 : 1));
  return Term::app(c->name, std::move(args), type);
}

/// Random well-typed term over variables and the theory's symbols.
inline TermPtr random_term(const Theory& theory, const Type& type, Rng& rng,
                           std::size_t depth,
                           std::vector<TypedVar>& scope) {
  if (depth == 0 || rng.below(4) == 0) {
    // variable of this type: reuse or invent
    std::vector<const TypedVar*> same;
    for (const auto& v : scope)
      if (v.type == type) same.push_back(&v);
    if (!same.empty() && rng.flip())
      return Term::var(same[rng.below(same.size())]->name, type);
    if (depth == 0) {
      if (!same.empty())
        return Term::var(same[rng.below(same.size())]->name, type);
      TypedVar fresh{"q" + std::to_string(scope.size()), type};
      scope.push_back(fresh);
      return Term::var(fresh.name, fresh.type);
    }
  }
  // pick a constructor or function returning this type
  struct Head {
    std::string name;
    std::vector<Type> args;
  };
  std::vector<Head> heads;
  for (const auto& d : theory.datatypes)
    if (d.name == type.name)
      for (const auto& c : d.constructors) heads.push_back({c.name, c.arg_types});
  for (const auto& f : theory.functions)
    if (f.return_type == type) heads.push_back({f.name, f.arg_types});
  if (heads.empty()) {
    TypedVar fresh{"q" + std::to_string(scope.size()), type};
    scope.push_back(fresh);
    return Term::var(fresh.name, fresh.type);
  }
  const Head& h = heads[rng.below(heads.size())];
  std::vector<TermPtr> args;
  for (const auto& at : h.args)
    args.push_back(random_term(theory, at, rng, depth - 1, scope));
  return Term::app(h.name, std::move(args), type);
}

inline Formula random_formula(const Theory& theory, Rng& rng) {
  std::vector<TypedVar> scope;
  const DatatypeDef& dt = theory.datatypes[rng.below(theory.datatypes.size())];
  Type type{dt.name};
  Formula f;
  std::size_t premises = rng.below(3) == 0 ? rng.below(2) + 1 : 0;
  for (std::size_t i = 0; i < premises; ++i) {
    const DatatypeDef& pdt =
        theory.datatypes[rng.below(theory.datatypes.size())];
    Type ptype{pdt.name};
    f.premises.push_back({random_term(theory, ptype, rng, 2, scope),
                          random_term(theory, ptype, rng, 2, scope)});
  }
  f.conclusion = {random_term(theory, type, rng, 3, scope),
                  random_term(theory, type, rng, 3, scope)};
  return f;
}

}  // namespace testutil

#endif
