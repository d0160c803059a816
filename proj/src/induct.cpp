#include "united/induct.hpp"

#include <algorithm>

namespace united {

namespace {

std::vector<TypedVar> datatype_vars(const Sequent& sequent,
                                    const Theory& theory) {
  std::vector<TypedVar> out;
  for (const auto& v : free_vars(sequent.target))
    if (theory.datatype(v.type.name)) out.push_back(v);
  return out;
}

// Subsets of `pool` up to max_size: smaller first, lexicographic by index
// within one size.
std::vector<std::vector<std::string>> arbitrary_subsets(
    const std::vector<TypedVar>& pool, std::size_t max_size) {
  std::vector<std::vector<std::string>> out{{}};
  std::vector<std::vector<std::size_t>> current{{}};
  for (std::size_t size = 1; size <= std::min(max_size, pool.size()); ++size) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& prefix : current) {
      std::size_t start = prefix.empty() ? 0 : prefix.back() + 1;
      for (std::size_t i = start; i < pool.size(); ++i) {
        auto ext = prefix;
        ext.push_back(i);
        next.push_back(ext);
      }
    }
    for (const auto& idxs : next) {
      std::vector<std::string> subset;
      for (std::size_t i : idxs) subset.push_back(pool[i].name);
      out.push_back(std::move(subset));
    }
    current = std::move(next);
  }
  return out;
}

void collect_rule_occurrences(
    const TermPtr& t, const Theory& theory,
    std::vector<std::pair<std::string, std::vector<std::string>>>& out) {
  if (t->is_app() && theory.function(t->name())) {
    bool all_vars = !t->args().empty();
    std::set<std::string> seen;
    std::vector<std::string> names;
    for (const auto& a : t->args()) {
      if (!a->is_var() || !seen.insert(a->name()).second) {
        all_vars = false;
        break;
      }
      names.push_back(a->name());
    }
    if (all_vars) {
      auto occ = std::make_pair(t->name(), names);
      if (std::find(out.begin(), out.end(), occ) == out.end())
        out.push_back(std::move(occ));
    }
  }
  for (const auto& a : t->args()) collect_rule_occurrences(a, theory, out);
}

}  // namespace

std::vector<InductArgs> candidate_applications(const Sequent& sequent,
                                               const Theory& theory,
                                               const InductLimits& limits) {
  std::vector<InductArgs> out;
  std::vector<TypedVar> vars = datatype_vars(sequent, theory);

  for (const auto& v : vars) {
    std::vector<TypedVar> others;
    for (const auto& o : vars)
      if (o.name != v.name) others.push_back(o);
    for (auto& subset : arbitrary_subsets(others, limits.max_arbitrary))
      out.push_back(InductArgs{{v.name}, std::move(subset), std::nullopt});
  }

  std::vector<std::pair<std::string, std::vector<std::string>>> occs;
  const Formula& f = sequent.target;
  for (const auto& p : f.premises) {
    collect_rule_occurrences(p.lhs, theory, occs);
    collect_rule_occurrences(p.rhs, theory, occs);
  }
  collect_rule_occurrences(f.conclusion.lhs, theory, occs);
  collect_rule_occurrences(f.conclusion.rhs, theory, occs);

  for (const auto& [fname, on_vars] : occs) {
    std::vector<TypedVar> others;
    for (const auto& o : vars)
      if (std::find(on_vars.begin(), on_vars.end(), o.name) == on_vars.end())
        others.push_back(o);
    for (auto& subset : arbitrary_subsets(others, limits.max_arbitrary))
      out.push_back(InductArgs{on_vars, std::move(subset), fname});
  }
  return out;
}

namespace {

std::set<std::string> sequent_names(const Sequent& s) {
  std::set<std::string> used;
  for (const auto& v : s.fixed_vars) used.insert(v.name);
  for (const auto& h : s.hyps) {
    for (const auto& v : free_vars(h.formula)) used.insert(v.name);
    used.insert(h.schematic_vars.begin(), h.schematic_vars.end());
  }
  for (const auto& v : free_vars(s.target)) used.insert(v.name);
  return used;
}

// fixedVars recomputed from what actually occurs outside schematic parts.
void refresh_fixed_vars(Sequent& s) {
  std::vector<TypedVar> fixed;
  std::set<std::string> seen;
  auto add = [&](const TypedVar& v) {
    if (seen.insert(v.name).second) fixed.push_back(v);
  };
  for (const auto& v : free_vars(s.target)) add(v);
  for (const auto& h : s.hyps)
    for (const auto& v : free_vars(h.formula))
      if (!h.schematic_vars.count(v.name)) add(v);
  s.fixed_vars = std::move(fixed);
}

std::string var_base_name(const std::string& on_var, const Type& var_type,
                          const Type& arg_type) {
  if (arg_type == var_type) return on_var;
  return std::string(1, arg_type.name.empty() ? 'v' : arg_type.name[0]);
}

void validate_common(const Sequent& sequent, const InductArgs& args,
                     const Theory& theory) {
  if (args.on.empty()) throw InvalidArgs("no induction variables");
  std::set<std::string> on_set(args.on.begin(), args.on.end());
  if (on_set.size() != args.on.size())
    throw InvalidArgs("duplicate induction variables");
  for (const auto& a : args.arbitrary)
    if (on_set.count(a))
      throw InvalidArgs("variable '" + a + "' both inducted and arbitrary");
  std::map<std::string, Type> target_vars;
  for (const auto& v : free_vars(sequent.target))
    target_vars.emplace(v.name, v.type);
  for (const auto& v : args.on) {
    auto it = target_vars.find(v);
    if (it == target_vars.end())
      throw InvalidArgs("variable '" + v + "' is not free in the target");
    if (!theory.datatype(it->second.name))
      throw InvalidArgs("variable '" + v + "' has no datatype type");
  }
  for (const auto& v : args.arbitrary)
    if (!target_vars.count(v))
      throw InvalidArgs("arbitrary variable '" + v +
                        "' is not free in the target");
}

struct CaseBuilder {
  const Sequent& sequent;
  const std::vector<std::string>& arbitrary;
  std::set<std::string> base_used;

  explicit CaseBuilder(const Sequent& s, const std::vector<std::string>& arb)
      : sequent(s), arbitrary(arb), base_used(sequent_names(s)) {}

  // Builds one case from the target substitution plus induction hypotheses
  // given as `on`-substitutions.
  Sequent build(const Subst& case_subst, const std::vector<Subst>& ih_substs,
                std::set<std::string>& used) {
    std::map<std::string, Type> arb_types;
    for (const auto& v : free_vars(sequent.target))
      if (std::find(arbitrary.begin(), arbitrary.end(), v.name) !=
          arbitrary.end())
        arb_types.emplace(v.name, v.type);

    Subst target_subst = case_subst;
    for (const auto& a : arbitrary)
      target_subst[a] = Term::var(fresh_name(a, used), arb_types.at(a));

    Sequent out = sequent;
    out.target = substitute(sequent.target, target_subst);
    for (const auto& ih : ih_substs) {
      Subst full = ih;
      std::set<std::string> schematic;
      for (const auto& a : arbitrary) {
        std::string fresh = fresh_name(a, used);
        full[a] = Term::var(fresh, arb_types.at(a));
        schematic.insert(fresh);
      }
      out.hyps.push_back(
          Hypothesis{substitute(sequent.target, full), std::move(schematic)});
    }
    refresh_fixed_vars(out);
    return out;
  }
};

void collect_calls(const TermPtr& t, const std::string& fname,
                   std::vector<TermPtr>& out) {
  if (t->is_app() && t->name() == fname) out.push_back(t);
  for (const auto& a : t->args()) collect_calls(a, fname, out);
}

}  // namespace

std::vector<Sequent> apply_induction(const Sequent& sequent,
                                     const InductArgs& args,
                                     const Theory& theory) {
  validate_common(sequent, args, theory);
  std::vector<Sequent> out;

  if (!args.rule) {
    if (args.on.size() != 1)
      throw InvalidArgs("structural induction takes one variable");
    const std::string& x = args.on.front();
    Type t;
    for (const auto& v : free_vars(sequent.target))
      if (v.name == x) t = v.type;
    const DatatypeDef* dt = theory.datatype(t.name);

    CaseBuilder builder(sequent, args.arbitrary);
    for (const auto& ctor : dt->constructors) {
      std::set<std::string> used = builder.base_used;
      std::vector<TermPtr> ctor_args;
      std::vector<Subst> ihs;
      for (const auto& at : ctor.arg_types) {
        std::string name = fresh_name(var_base_name(x, t, at), used);
        ctor_args.push_back(Term::var(name, at));
        if (at == t) ihs.push_back(Subst{{x, ctor_args.back()}});
      }
      Subst case_subst{{x, Term::app(ctor.name, ctor_args, t)}};
      out.push_back(builder.build(case_subst, ihs, used));
    }
    return out;
  }

  const FunctionDef* f = theory.function(*args.rule);
  if (!f) throw InvalidArgs("unknown rule function '" + *args.rule + "'");
  if (args.on.size() != f->arg_types.size())
    throw InvalidArgs("rule '" + *args.rule + "' needs " +
                      std::to_string(f->arg_types.size()) +
                      " induction variables");

  CaseBuilder builder(sequent, args.arbitrary);
  for (const auto& eq : f->equations) {
    std::set<std::string> used = builder.base_used;
    // freshen the equation's pattern variables
    Subst freshen;
    for (const auto& p : eq.patterns)
      for (const auto& v : free_vars(p))
        if (!freshen.count(v.name))
          freshen.emplace(v.name,
                          Term::var(fresh_name(v.name, used), v.type));
    Subst case_subst;
    for (std::size_t i = 0; i < args.on.size(); ++i)
      case_subst[args.on[i]] = substitute(eq.patterns[i], freshen);

    std::vector<TermPtr> calls;
    collect_calls(substitute(eq.rhs, freshen), f->name, calls);
    std::vector<Subst> ihs;
    for (const auto& call : calls) {
      Subst ih;
      for (std::size_t i = 0; i < args.on.size(); ++i)
        ih[args.on[i]] = call->args()[i];
      ihs.push_back(std::move(ih));
    }
    out.push_back(builder.build(case_subst, ihs, used));
  }
  return out;
}

std::vector<Sequent> apply_cases(const Sequent& sequent, const std::string& var,
                                 const Theory& theory) {
  InductArgs args{{var}, {}, std::nullopt};
  validate_common(sequent, args, theory);
  Type t;
  for (const auto& v : free_vars(sequent.target))
    if (v.name == var) t = v.type;
  const DatatypeDef* dt = theory.datatype(t.name);

  std::vector<Sequent> out;
  CaseBuilder builder(sequent, {});
  for (const auto& ctor : dt->constructors) {
    std::set<std::string> used = builder.base_used;
    std::vector<TermPtr> ctor_args;
    for (const auto& at : ctor.arg_types)
      ctor_args.push_back(
          Term::var(fresh_name(var_base_name(var, t, at), used), at));
    Subst case_subst{{var, Term::app(ctor.name, ctor_args, t)}};
    out.push_back(builder.build(case_subst, {}, used));
  }
  return out;
}

}  // namespace united
