#include "united/deduct.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "united/induct.hpp"
#include "united/syntax.hpp"

namespace united {

bool constructor_clash(const Theory& theory, const TermPtr& a,
                       const TermPtr& b) {
  if (!a->is_app() || !b->is_app()) return false;
  if (!theory.is_constructor(a->name()) || !theory.is_constructor(b->name()))
    return false;
  if (a->name() != b->name()) return true;
  for (std::size_t i = 0; i < a->args().size(); ++i)
    if (constructor_clash(theory, a->args()[i], b->args()[i])) return true;
  return false;
}

namespace {

std::set<std::string> formula_var_names(const Formula& f) {
  std::set<std::string> out;
  for (const auto& v : free_vars(f)) out.insert(v.name);
  return out;
}

std::set<std::string> term_var_names(const TermPtr& t) {
  std::set<std::string> out;
  for (const auto& v : free_vars(t)) out.insert(v.name);
  return out;
}

// Every rhs/condition variable must be bound by matching the lhs or stand
// for itself; otherwise the orientation is unusable.
bool orientation_ok(const TermPtr& lhs, const TermPtr& rhs,
                    const std::vector<Equation>& conditions,
                    const std::set<std::string>& schematic) {
  if (lhs->is_var()) return false;
  std::set<std::string> bound = term_var_names(lhs);
  auto covered = [&](const TermPtr& t) {
    for (const auto& v : free_vars(t))
      if (schematic.count(v.name) && !bound.count(v.name)) return false;
    return true;
  };
  if (!covered(rhs)) return false;
  for (const auto& c : conditions)
    if (!covered(c.lhs) || !covered(c.rhs)) return false;
  return true;
}

std::vector<RewriteRule> sequent_rules(const Theory& theory,
                                       const Sequent& sequent) {
  std::vector<RewriteRule> rules;
  for (const auto& lemma : theory.lemmas) {
    RewriteRule r;
    r.lhs = lemma.formula.conclusion.lhs;
    r.rhs = lemma.formula.conclusion.rhs;
    r.conditions = lemma.formula.premises;
    r.schematic_vars = formula_var_names(lemma.formula);
    r.origin = RewriteRule::Origin::ProvedLemma;
    r.label = lemma.name;
    if (orientation_ok(r.lhs, r.rhs, r.conditions, r.schematic_vars))
      rules.push_back(std::move(r));
  }
  auto both_orientations = [&](const Equation& eq,
                               const std::set<std::string>& schematic,
                               const std::vector<Equation>& conditions,
                               RewriteRule::Origin origin,
                               const std::string& label) {
    for (int dir = 0; dir < 2; ++dir) {
      RewriteRule r;
      r.lhs = dir == 0 ? eq.lhs : eq.rhs;
      r.rhs = dir == 0 ? eq.rhs : eq.lhs;
      r.conditions = conditions;
      r.schematic_vars = schematic;
      r.origin = origin;
      r.label = label + (dir == 0 ? "" : " (reversed)");
      r.capped = true;
      if (orientation_ok(r.lhs, r.rhs, r.conditions, r.schematic_vars))
        rules.push_back(std::move(r));
    }
  };
  for (std::size_t i = 0; i < sequent.target.premises.size(); ++i)
    both_orientations(sequent.target.premises[i], {}, {},
                      RewriteRule::Origin::Hypothesis,
                      "premise " + std::to_string(i + 1));
  for (std::size_t i = 0; i < sequent.hyps.size(); ++i)
    both_orientations(sequent.hyps[i].formula.conclusion,
                      sequent.hyps[i].schematic_vars,
                      sequent.hyps[i].formula.premises,
                      RewriteRule::Origin::Hypothesis,
                      "hypothesis " + std::to_string(i + 1));
  return rules;
}

struct SimpEngine {
  const Theory& theory;
  const DeductBudgets& budgets;
  std::vector<RewriteRule> rules;
  std::vector<int> uses;
  int steps_left;
  std::unordered_set<std::string> seen;
  std::vector<std::string>* trace = nullptr;

  SimpEngine(const Theory& th, const Sequent& seq, const DeductBudgets& b)
      : theory(th), budgets(b), rules(sequent_rules(th, seq)),
        uses(rules.size(), 0), steps_left(b.simp_steps) {}

  void note(const std::string& line) {
    if (trace) trace->push_back(line);
  }

  // One leftmost-innermost defining-equation rewrite; nullptr if none.
  TermPtr rewrite_def_once(const TermPtr& t) {
    if (t->is_var()) return nullptr;
    for (std::size_t i = 0; i < t->args().size(); ++i) {
      if (TermPtr r = rewrite_def_once(t->args()[i])) {
        std::vector<TermPtr> args = t->args();
        args[i] = std::move(r);
        return Term::app(t->name(), std::move(args), t->type());
      }
    }
    const FunctionDef* f = theory.function(t->name());
    if (!f) return nullptr;
    for (const auto& eq : f->equations) {
      Subst subst;
      bool ok = true;
      for (std::size_t i = 0; i < eq.patterns.size() && ok; ++i) {
        auto m = match(eq.patterns[i], t->args()[i],
                       term_var_names(eq.patterns[i]));
        if (!m) {
          ok = false;
          break;
        }
        for (auto& [k, v] : *m) subst[k] = v;
      }
      if (ok) return substitute(eq.rhs, subst);
    }
    return nullptr;
  }

  // Checks an instantiated condition with definitions and lemma rules only.
  bool condition_holds(const Equation& eq, int depth) {
    if (depth > 2) return false;
    TermPtr l = normalize_defs(eq.lhs);
    TermPtr r = normalize_defs(eq.rhs);
    if (equal(l, r)) return true;
    // one outermost lemma pass each side, then compare again
    for (int i = 0; i < 8; ++i) {
      bool changed = false;
      if (TermPtr l2 = rewrite_rules_once(l, /*uncapped_only=*/true)) {
        l = normalize_defs(l2);
        changed = true;
      }
      if (TermPtr r2 = rewrite_rules_once(r, true)) {
        r = normalize_defs(r2);
        changed = true;
      }
      if (equal(l, r)) return true;
      if (!changed) break;
    }
    return false;
  }

  TermPtr normalize_defs(TermPtr t) {
    while (steps_left > 0) {
      TermPtr r = rewrite_def_once(t);
      if (!r) break;
      --steps_left;
      t = std::move(r);
    }
    return t;
  }

  // One outermost rule rewrite on a term; respects caps and conditions.
  TermPtr rewrite_rules_once(const TermPtr& t, bool uncapped_only = false) {
    for (std::size_t ri = 0; ri < rules.size(); ++ri) {
      const RewriteRule& rule = rules[ri];
      if (uncapped_only && rule.capped) continue;
      if (rule.capped && uses[ri] >= budgets.rule_cap) continue;
      if (auto m = match(rule.lhs, t, rule.schematic_vars)) {
        bool conds_ok = true;
        for (const auto& c : rule.conditions) {
          if (!condition_holds(substitute(c, *m), 1)) {
            conds_ok = false;
            break;
          }
        }
        if (!conds_ok) continue;
        ++uses[ri];
        note("rewrite with " + rule.label + ": " + print_term(t) + " -> " +
             print_term(substitute(rule.rhs, *m)));
        return substitute(rule.rhs, *m);
      }
    }
    bool changed = false;
    std::vector<TermPtr> args;
    if (t->is_app()) {
      args = t->args();
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (TermPtr r = rewrite_rules_once(args[i], uncapped_only)) {
          args[i] = std::move(r);
          changed = true;
          break;
        }
      }
    }
    if (!changed) return nullptr;
    return Term::app(t->name(), std::move(args), t->type());
  }
};

std::string formula_key(const Formula& f) { return print_formula(f); }

bool premise_clash(const Theory& theory, const Formula& f) {
  for (const auto& p : f.premises)
    if (constructor_clash(theory, p.lhs, p.rhs)) return true;
  return false;
}

bool hypothesis_clash(const Theory& theory, const Sequent& s) {
  for (const auto& h : s.hyps)
    if (h.formula.premises.empty() &&
        constructor_clash(theory, h.formula.conclusion.lhs,
                          h.formula.conclusion.rhs))
      return true;
  return false;
}

bool solved_now(const Theory& theory, const Sequent& s, const Formula& target) {
  return equal(target.conclusion.lhs, target.conclusion.rhs) ||
         premise_clash(theory, target) || hypothesis_clash(theory, s);
}

// In-place rewrite attempt over the whole target formula; premise rules do
// not fire inside their own premise. Returns true when a step was taken.
bool simp_step(SimpEngine& engine, Formula& target) {
  // defining equations, leftmost-innermost, premises before conclusion
  auto try_defs = [&](TermPtr& side) {
    if (TermPtr r = engine.rewrite_def_once(side)) {
      --engine.steps_left;
      side = std::move(r);
      return true;
    }
    return false;
  };
  std::vector<TermPtr*> sides;
  for (auto& p : target.premises) {
    sides.push_back(&p.lhs);
    sides.push_back(&p.rhs);
  }
  sides.push_back(&target.conclusion.lhs);
  sides.push_back(&target.conclusion.rhs);
  for (TermPtr* side : sides)
    if (try_defs(*side)) return true;
  // lemma / premise / hypothesis rules, outermost
  for (std::size_t si = 0; si < sides.size(); ++si) {
    std::size_t premise_index =
        si / 2 < target.premises.size() ? si / 2 : target.premises.size();
    // mask the rules born from this premise
    std::vector<int> saved;
    if (premise_index < target.premises.size()) {
      std::string label = "premise " + std::to_string(premise_index + 1);
      for (std::size_t ri = 0; ri < engine.rules.size(); ++ri)
        if (engine.rules[ri].label.rfind(label, 0) == 0 &&
            engine.rules[ri].origin == RewriteRule::Origin::Hypothesis) {
          saved.push_back(static_cast<int>(ri));
          engine.uses[ri] += engine.budgets.rule_cap;  // temporarily exhaust
        }
    }
    TermPtr r = engine.rewrite_rules_once(*sides[si]);
    for (int ri : saved) engine.uses[ri] -= engine.budgets.rule_cap;
    if (r) {
      --engine.steps_left;
      *sides[si] = std::move(r);
      return true;
    }
  }
  return false;
}

DeductOutcome simp_with_trace(const Theory& theory, const Sequent& sequent,
                              const DeductBudgets& budgets,
                              std::vector<std::string>* trace) {
  SimpEngine engine(theory, sequent, budgets);
  engine.trace = trace;
  Formula target = sequent.target;
  engine.seen.insert(formula_key(target));

  auto finish = [&](Formula f) {
    DeductOutcome out;
    out.trace = trace ? *trace : std::vector<std::string>{};
    if (solved_now(theory, sequent, f)) {
      out.kind = DeductOutcome::Kind::Solved;
      return out;
    }
    // drop premises that simplified to reflexivity
    Formula cleaned;
    cleaned.conclusion = f.conclusion;
    for (const auto& p : f.premises)
      if (!equal(p.lhs, p.rhs)) cleaned.premises.push_back(p);
    if (equal(cleaned, sequent.target)) {
      out.kind = DeductOutcome::Kind::Stuck;
      return out;
    }
    out.kind = DeductOutcome::Kind::Progress;
    Sequent res = sequent;
    res.target = std::move(cleaned);
    out.residual.push_back(std::move(res));
    return out;
  };

  while (engine.steps_left > 0) {
    if (solved_now(theory, sequent, target)) return finish(target);
    Formula next = target;
    if (!simp_step(engine, next)) break;
    if (!engine.seen.insert(formula_key(next)).second) {
      // rewriting cycled; stop at the current form
      break;
    }
    target = std::move(next);
  }
  return finish(target);
}

}  // namespace

DeductOutcome simp(const Theory& theory, const Sequent& sequent,
                   const DeductBudgets& budgets) {
  return simp_with_trace(theory, sequent, budgets, nullptr);
}

namespace {

// A schematic hypothesis closes the goal when its conclusion matches the
// goal conclusion and its instantiated premises hold.
bool hypothesis_instantiation_closes(const Theory& theory, const Sequent& s,
                                     const DeductBudgets& budgets) {
  for (const auto& h : s.hyps) {
    Subst m;
    auto try_match = [&](const TermPtr& pat, const TermPtr& sub) {
      auto r = match(pat, sub, h.schematic_vars);
      if (!r) return false;
      for (auto& [k, v] : *r) {
        auto [it, inserted] = m.emplace(k, v);
        if (!inserted && !equal(it->second, v)) return false;
      }
      return true;
    };
    m.clear();
    if (!try_match(h.formula.conclusion.lhs, s.target.conclusion.lhs)) continue;
    if (!try_match(h.formula.conclusion.rhs, s.target.conclusion.rhs)) continue;
    bool ok = true;
    for (const auto& p : h.formula.premises) {
      SimpEngine engine(theory, s, budgets);
      if (!engine.condition_holds(substitute(p, m), 1)) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

DeductOutcome auto_prove(const Theory& theory, const Sequent& sequent,
                         const DeductBudgets& budgets) {
  std::deque<Sequent> work{sequent};
  std::vector<Sequent> residual;
  std::vector<std::string> trace;
  bool changed = false;
  int iters = budgets.auto_iters;

  while (!work.empty()) {
    if (iters-- <= 0) {
      for (auto& s : work) residual.push_back(std::move(s));
      break;
    }
    Sequent s = std::move(work.front());
    work.pop_front();

    DeductOutcome simped = simp_with_trace(theory, s, budgets, nullptr);
    if (simped.kind == DeductOutcome::Kind::Solved) {
      changed = true;
      continue;
    }
    if (simped.kind == DeductOutcome::Kind::Progress) {
      changed = true;
      s = std::move(simped.residual.front());
    }

    const TermPtr& l = s.target.conclusion.lhs;
    const TermPtr& r = s.target.conclusion.rhs;
    if (l->is_app() && r->is_app() && l->name() == r->name() &&
        theory.is_constructor(l->name()) && !l->args().empty()) {
      // injectivity: one sub-sequent per argument pair, left to right
      for (std::size_t i = l->args().size(); i-- > 0;) {
        Sequent child = s;
        child.target.conclusion = {l->args()[i], r->args()[i]};
        work.push_front(std::move(child));
      }
      changed = true;
      continue;
    }

    if (hypothesis_instantiation_closes(theory, s, budgets)) {
      changed = true;
      continue;
    }

    residual.push_back(std::move(s));
  }

  DeductOutcome out;
  out.trace = std::move(trace);
  if (residual.empty()) {
    out.kind = DeductOutcome::Kind::Solved;
  } else if (changed) {
    out.kind = DeductOutcome::Kind::Progress;
    out.residual = std::move(residual);
  } else {
    out.kind = DeductOutcome::Kind::Stuck;
    out.residual = std::move(residual);
  }
  return out;
}

bool prove_implication(const Theory& theory, const Formula& conjecture,
                       const Sequent& sequent, const DeductBudgets& budgets) {
  std::set<std::string> used;
  for (const auto& v : sequent.fixed_vars) used.insert(v.name);
  for (const auto& h : sequent.hyps) {
    for (const auto& v : free_vars(h.formula)) used.insert(v.name);
    used.insert(h.schematic_vars.begin(), h.schematic_vars.end());
  }
  for (const auto& v : free_vars(sequent.target)) used.insert(v.name);

  Subst rename;
  std::set<std::string> schematic;
  for (const auto& v : free_vars(conjecture)) {
    std::string fresh = fresh_name(v.name, used);
    rename.emplace(v.name, Term::var(fresh, v.type));
    schematic.insert(fresh);
  }
  Sequent assumed = sequent;
  assumed.hyps.push_back(
      Hypothesis{substitute(conjecture, rename), std::move(schematic)});

  if (auto_prove(theory, assumed, budgets).solved()) return true;
  if (!budgets.implication_induction) return false;

  // one level of structural induction on a single goal variable
  for (const auto& v : free_vars(assumed.target)) {
    if (!theory.datatype(v.type.name)) continue;
    std::vector<Sequent> cases;
    try {
      cases = apply_induction(assumed, InductArgs{{v.name}, {}, std::nullopt},
                              theory);
    } catch (const InvalidArgs&) {
      continue;
    }
    bool all = !cases.empty();
    for (const auto& c : cases)
      if (!auto_prove(theory, c, budgets).solved()) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

}  // namespace united
