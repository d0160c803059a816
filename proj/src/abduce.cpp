#include "united/abduce.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "united/deduct.hpp"
#include "united/syntax.hpp"

namespace united {

namespace {

// Canonical universal names: first letter of the type name, then with
// numeric suffixes, assigned in first-occurrence order. Makes alpha-variants
// syntactically equal so de-duplication works.
Formula canonicalize(const Formula& f) {
  std::vector<TypedVar> vars = free_vars(f);
  Subst rename;
  std::set<std::string> taken;
  for (const auto& v : vars) {
    std::string base(1, v.type.name.empty() ? 'v' : v.type.name[0]);
    std::string name = base;
    for (int i = 1; taken.count(name); ++i) name = base + std::to_string(i);
    taken.insert(name);
    rename.emplace(v.name, Term::var(name, v.type));
  }
  return substitute(f, rename);
}

std::size_t conjecture_size(const Formula& f) {
  return f.conclusion.lhs->size() + f.conclusion.rhs->size();
}

// Replaces the subterm at `path` within `t`.
TermPtr replace_at(const TermPtr& t, const std::vector<std::size_t>& path,
                   std::size_t depth, const TermPtr& replacement) {
  if (depth == path.size()) return replacement;
  std::vector<TermPtr> args = t->args();
  args[path[depth]] =
      replace_at(args[path[depth]], path, depth + 1, replacement);
  return Term::app(t->name(), std::move(args), t->type());
}

Formula replace_at(const Formula& f, const TermPos& pos,
                   const TermPtr& replacement) {
  Formula out = f;
  auto& eq = pos.equation < out.premises.size() ? out.premises[pos.equation]
                                                : out.conclusion;
  TermPtr& side = pos.side == 0 ? eq.lhs : eq.rhs;
  side = replace_at(side, pos.path, 0, replacement);
  return out;
}

// Replaces every occurrence of `what` in `t`.
TermPtr replace_subterm(const TermPtr& t, const TermPtr& what,
                        const TermPtr& replacement) {
  if (equal(t, what)) return replacement;
  if (t->is_var()) return t;
  std::vector<TermPtr> args;
  args.reserve(t->args().size());
  for (const auto& a : t->args())
    args.push_back(replace_subterm(a, what, replacement));
  return Term::app(t->name(), std::move(args), t->type());
}

Formula replace_subterm(const Formula& f, const TermPtr& what,
                        const TermPtr& replacement) {
  Formula out;
  for (const auto& p : f.premises)
    out.premises.push_back({replace_subterm(p.lhs, what, replacement),
                            replace_subterm(p.rhs, what, replacement)});
  out.conclusion = {replace_subterm(f.conclusion.lhs, what, replacement),
                    replace_subterm(f.conclusion.rhs, what, replacement)};
  return out;
}

void collect_subterms(const TermPtr& t, std::vector<TermPtr>& out) {
  if (t->is_app()) {
    if (std::none_of(out.begin(), out.end(),
                     [&](const TermPtr& s) { return equal(s, t); }))
      out.push_back(t);
    for (const auto& a : t->args()) collect_subterms(a, out);
  }
}

// One-application rewrite variants of the target with a hypothesis equation.
std::vector<Formula> hypothesis_variants(const Sequent& sequent) {
  std::vector<Formula> out;
  for (const auto& h : sequent.hyps) {
    if (!h.formula.premises.empty()) continue;
    const Equation& eq = h.formula.conclusion;
    for (int dir = 0; dir < 2; ++dir) {
      const TermPtr& from = dir == 0 ? eq.lhs : eq.rhs;
      const TermPtr& to = dir == 0 ? eq.rhs : eq.lhs;
      // every position where `from` matches, one variant per position
      std::function<void(const TermPtr&, TermPos&)> walk =
          [&](const TermPtr& t, TermPos& pos) {
            if (auto m = match(from, t, h.schematic_vars)) {
              TermPtr replaced = substitute(to, *m);
              // the replacement must not invent unbound schematic variables
              bool closed = true;
              for (const auto& v : free_vars(replaced))
                if (h.schematic_vars.count(v.name) && !m->count(v.name))
                  closed = false;
              if (closed)
                out.push_back(replace_at(sequent.target, pos, replaced));
            }
            for (std::size_t i = 0; i < t->args().size(); ++i) {
              pos.path.push_back(i);
              walk(t->args()[i], pos);
              pos.path.pop_back();
            }
          };
      const Formula& f = sequent.target;
      for (std::size_t e = 0; e < f.premises.size(); ++e)
        for (int side = 0; side < 2; ++side) {
          TermPos pos{e, side, {}};
          walk(side == 0 ? f.premises[e].lhs : f.premises[e].rhs, pos);
        }
      for (int side = 0; side < 2; ++side) {
        TermPos pos{f.premises.size(), side, {}};
        walk(side == 0 ? f.conclusion.lhs : f.conclusion.rhs, pos);
      }
    }
  }
  return out;
}

struct FreshVars {
  std::set<std::string> used;

  explicit FreshVars(const Formula& f) {
    for (const auto& v : free_vars(f)) used.insert(v.name);
  }
  TermPtr make(const Type& type) {
    std::string base(1, type.name.empty() ? 'v' : type.name[0]);
    std::string name = base;
    for (int i = 1; !used.insert(name).second; ++i)
      name = base + std::to_string(i);
    return Term::var(name, type);
  }
};

// Common-subterm generalization: each non-variable subterm shared by both
// conclusion sides, replaced everywhere by one fresh variable.
void general_common_subterms(const Formula& f, std::vector<Formula>& out) {
  std::vector<TermPtr> lhs_subs;
  collect_subterms(f.conclusion.lhs, lhs_subs);
  for (const auto& s : lhs_subs) {
    if (!contains_subterm(f.conclusion.rhs, s)) continue;
    FreshVars fresh(f);
    out.push_back(replace_subterm(f, s, fresh.make(s->type())));
  }
}

// Constant-argument generalization: a ground non-recursive-constructor
// argument of a defined-function application on the lhs becomes a variable,
// with synthesized right-hand sides.
void general_constant_args(const Formula& f, const Theory& theory,
                           std::vector<Formula>& out) {
  std::function<void(const TermPtr&, TermPos&)> walk = [&](const TermPtr& t,
                                                           TermPos& pos) {
    if (t->is_app() && theory.function(t->name())) {
      for (std::size_t i = 0; i < t->args().size(); ++i) {
        const TermPtr& arg = t->args()[i];
        if (!arg->is_app() || !free_vars(arg).empty()) continue;
        if (!theory.is_constructor(arg->name()) ||
            theory.is_recursive_constructor(arg->name()))
          continue;
        FreshVars fresh(f);
        TermPtr y = fresh.make(arg->type());
        TermPos arg_pos = pos;
        arg_pos.path.push_back(i);
        Formula general = replace_at(f, arg_pos, y);
        const TermPtr& rhs = f.conclusion.rhs;
        out.push_back(general);
        for (const auto& g : theory.functions) {
          if (g.arg_types.size() != 2) continue;
          if (g.return_type != rhs->type()) continue;
          if (g.arg_types[0] == rhs->type() && g.arg_types[1] == y->type()) {
            Formula with = general;
            with.conclusion.rhs =
                Term::app(g.name, {rhs, y}, g.return_type);
            out.push_back(std::move(with));
          }
          if (g.arg_types[0] == y->type() && g.arg_types[1] == rhs->type()) {
            Formula with = general;
            with.conclusion.rhs =
                Term::app(g.name, {y, rhs}, g.return_type);
            out.push_back(std::move(with));
          }
        }
      }
    }
    for (std::size_t i = 0; i < t->args().size(); ++i) {
      pos.path.push_back(i);
      walk(t->args()[i], pos);
      pos.path.pop_back();
    }
  };
  TermPos pos{f.premises.size(), 0, {}};
  walk(f.conclusion.lhs, pos);
}

}  // namespace

std::vector<Formula> generate_conjectures(const Sequent& sequent,
                                          const Theory& theory,
                                          const SearchConfig& config) {
  if (config.max_conjectures == 0) return {};

  std::vector<Formula> variants{sequent.target};
  for (auto& v : hypothesis_variants(sequent)) variants.push_back(std::move(v));

  std::vector<Formula> raw;
  for (const auto& v : variants) {
    general_common_subterms(v, raw);
    general_constant_args(v, theory, raw);
    if (!v.premises.empty())
      raw.push_back(Formula{{}, v.conclusion});
  }

  Formula target_canonical = canonicalize(sequent.target);
  std::string target_key = print_formula(target_canonical);

  std::vector<Formula> candidates;
  std::set<std::string> seen;
  for (const auto& c : raw) {
    Formula closed = canonicalize(c);
    // many-variable conjectures are rarely reusable and make refutation
    // checks blow up; generation stops at four
    if (free_vars(closed).size() > 4) continue;
    std::string key = print_formula(closed);
    if (key == target_key) continue;
    if (seen.insert(key).second) candidates.push_back(std::move(closed));
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Formula& a, const Formula& b) {
                     return conjecture_size(a) < conjecture_size(b);
                   });
  if (candidates.size() > config.max_conjectures)
    candidates.resize(config.max_conjectures);
  return candidates;
}

ConjectureVerdict filter_conjecture(const Theory& theory,
                                    const Sequent& sequent,
                                    const Formula& conjecture,
                                    const SearchConfig& config) {
  if (!prove_implication(theory, conjecture, sequent, config.deduct))
    return {ConjectureVerdict::Kind::NotStrongEnough, {}};
  if (auto cex = find_counterexample(theory, conjecture, config.refute_size,
                                     config.eval_fuel))
    return {ConjectureVerdict::Kind::Refuted, *cex};
  return {ConjectureVerdict::Kind::Valuable, {}};
}

std::vector<Sequent> insert_conjecture(const Sequent& sequent,
                                       const Formula& conjecture) {
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

  return {std::move(assumed), root_sequent(conjecture)};
}

}  // namespace united
