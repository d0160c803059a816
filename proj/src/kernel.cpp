#include "united/kernel.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace united {

namespace {

std::size_t combine_hash(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Term::Term(Kind kind, std::string name, std::vector<TermPtr> args, Type type)
    : kind_(kind),
      name_(std::move(name)),
      args_(std::move(args)),
      type_(std::move(type)) {
  size_ = 1;
  hash_ = std::hash<std::string>{}(name_);
  hash_ = combine_hash(hash_, kind_ == Kind::Var ? 0x5u : 0xAu);
  for (const auto& a : args_) {
    size_ += a->size();
    hash_ = combine_hash(hash_, a->hash());
  }
}

TermPtr Term::var(std::string name, Type type) {
  return TermPtr(new Term(Kind::Var, std::move(name), {}, std::move(type)));
}

TermPtr Term::app(std::string symbol, std::vector<TermPtr> args, Type type) {
  return TermPtr(
      new Term(Kind::App, std::move(symbol), std::move(args), std::move(type)));
}

bool operator==(const Term& a, const Term& b) {
  if (&a == &b) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.name() != b.name() ||
      a.args().size() != b.args().size())
    return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!equal(a.args()[i], b.args()[i])) return false;
  return true;
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

std::size_t term_size(const TermPtr& t) { return t->size(); }

bool equal(const Equation& a, const Equation& b) {
  return equal(a.lhs, b.lhs) && equal(a.rhs, b.rhs);
}

bool equal(const Formula& a, const Formula& b) {
  if (a.premises.size() != b.premises.size()) return false;
  for (std::size_t i = 0; i < a.premises.size(); ++i)
    if (!equal(a.premises[i], b.premises[i])) return false;
  return equal(a.conclusion, b.conclusion);
}

const DatatypeDef* Theory::datatype(std::string_view name) const {
  for (const auto& d : datatypes)
    if (d.name == name) return &d;
  return nullptr;
}

const FunctionDef* Theory::function(std::string_view name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

const Constructor* Theory::constructor(std::string_view name,
                                       const DatatypeDef** owner) const {
  for (const auto& d : datatypes)
    for (const auto& c : d.constructors)
      if (c.name == name) {
        if (owner) *owner = &d;
        return &c;
      }
  return nullptr;
}

bool Theory::is_constructor(std::string_view name) const {
  return constructor(name) != nullptr;
}

const NamedFormula* Theory::goal(std::string_view name) const {
  for (const auto& g : goals)
    if (g.name == name) return &g;
  return nullptr;
}

bool Theory::is_recursive_constructor(std::string_view ctor_name) const {
  const DatatypeDef* owner = nullptr;
  const Constructor* c = constructor(ctor_name, &owner);
  if (!c) return false;
  for (const auto& t : c->arg_types)
    if (t.name == owner->name) return true;
  return false;
}

namespace {

void collect_free_vars(const TermPtr& t, std::vector<TypedVar>& out,
                       std::set<std::string>& seen) {
  if (t->is_var()) {
    if (seen.insert(t->name()).second) out.push_back({t->name(), t->type()});
    return;
  }
  for (const auto& a : t->args()) collect_free_vars(a, out, seen);
}

// --- term well-formedness used by check_theory ----------------------------

struct TypeCheck {
  const Theory& theory;
  std::vector<Diagnostic>& diags;
  std::string where;

  void fail(const std::string& msg) { diags.push_back({where, msg}); }

  // Returns false on the first structural error (further checks would cascade).
  bool check_term(const TermPtr& t, std::map<std::string, Type>& var_types) {
    if (t->is_var()) {
      if (!theory.datatype(t->type().name)) {
        fail("variable '" + t->name() + "' has undeclared type '" +
             t->type().name + "'");
        return false;
      }
      auto [it, inserted] = var_types.emplace(t->name(), t->type());
      if (!inserted && it->second != t->type()) {
        fail("variable '" + t->name() + "' used at both type '" +
             it->second.name + "' and '" + t->type().name + "'");
        return false;
      }
      return true;
    }
    const std::vector<Type>* arg_types = nullptr;
    Type result;
    if (const Constructor* c = theory.constructor(t->name())) {
      const DatatypeDef* owner = nullptr;
      theory.constructor(t->name(), &owner);
      arg_types = &c->arg_types;
      result = Type{owner->name};
    } else if (const FunctionDef* f = theory.function(t->name())) {
      arg_types = &f->arg_types;
      result = f->return_type;
    } else {
      fail("unknown symbol '" + t->name() + "'");
      return false;
    }
    if (t->args().size() != arg_types->size()) {
      fail("arity mismatch: '" + t->name() + "' expects " +
           std::to_string(arg_types->size()) + " arguments, got " +
           std::to_string(t->args().size()));
      return false;
    }
    if (t->type() != result) {
      fail("term '" + t->name() + "' annotated with type '" + t->type().name +
           "' but declared to return '" + result.name + "'");
      return false;
    }
    bool ok = true;
    for (std::size_t i = 0; i < t->args().size(); ++i) {
      if (t->args()[i]->type() != (*arg_types)[i]) {
        fail("argument " + std::to_string(i + 1) + " of '" + t->name() +
             "' has type '" + t->args()[i]->type().name + "', expected '" +
             (*arg_types)[i].name + "'");
        ok = false;
      }
      if (!check_term(t->args()[i], var_types)) ok = false;
    }
    return ok;
  }

  bool check_formula(const Formula& f) {
    std::map<std::string, Type> var_types;
    bool ok = true;
    auto check_eq = [&](const Equation& eq) {
      if (!check_term(eq.lhs, var_types)) ok = false;
      if (!check_term(eq.rhs, var_types)) ok = false;
      if (ok && eq.lhs->type() != eq.rhs->type()) {
        fail("equation sides have different types: '" + eq.lhs->type().name +
             "' vs '" + eq.rhs->type().name + "'");
        ok = false;
      }
    };
    for (const auto& p : f.premises) check_eq(p);
    check_eq(f.conclusion);
    return ok;
  }
};

bool is_constructor_pattern(const Theory& theory, const TermPtr& p) {
  if (p->is_var()) return true;
  if (!theory.is_constructor(p->name())) return false;
  return std::all_of(p->args().begin(), p->args().end(), [&](const TermPtr& a) {
    return is_constructor_pattern(theory, a);
  });
}

bool left_linear(const TermPtr& p, std::set<std::string>& seen) {
  if (p->is_var()) return seen.insert(p->name()).second;
  for (const auto& a : p->args())
    if (!left_linear(a, seen)) return false;
  return true;
}

// Two linear constructor patterns overlap iff they are simultaneously
// instantiable, i.e. they agree on every rigid position.
bool patterns_compatible(const TermPtr& a, const TermPtr& b) {
  if (a->is_var() || b->is_var()) return true;
  if (a->name() != b->name() || a->args().size() != b->args().size())
    return false;
  for (std::size_t i = 0; i < a->args().size(); ++i)
    if (!patterns_compatible(a->args()[i], b->args()[i])) return false;
  return true;
}

// Pattern-matrix usefulness (specialization/default recursion). A row of
// wildcards is useful iff the matrix is non-exhaustive.
struct Exhaustiveness {
  const Theory& theory;

  std::vector<std::vector<TermPtr>> specialize(
      const std::vector<std::vector<TermPtr>>& rows, const Constructor& c,
      const Type& col_type) {
    std::vector<std::vector<TermPtr>> out;
    for (const auto& row : rows) {
      const TermPtr& head = row.front();
      std::vector<TermPtr> extended;
      if (head->is_var()) {
        for (const auto& at : c.arg_types)
          extended.push_back(Term::var("_", at));
      } else if (head->name() == c.name) {
        extended = head->args();
      } else {
        continue;
      }
      extended.insert(extended.end(), row.begin() + 1, row.end());
      out.push_back(std::move(extended));
    }
    (void)col_type;
    return out;
  }

  std::vector<std::vector<TermPtr>> default_matrix(
      const std::vector<std::vector<TermPtr>>& rows) {
    std::vector<std::vector<TermPtr>> out;
    for (const auto& row : rows)
      if (row.front()->is_var())
        out.emplace_back(row.begin() + 1, row.end());
    return out;
  }

  bool wildcard_useful(const std::vector<std::vector<TermPtr>>& rows,
                       const std::vector<Type>& col_types) {
    if (rows.empty()) return true;
    if (col_types.empty()) return false;
    const DatatypeDef* dt = theory.datatype(col_types.front().name);
    if (!dt) return false;  // undeclared type reported elsewhere
    std::set<std::string> heads;
    for (const auto& row : rows)
      if (row.front()->is_app()) heads.insert(row.front()->name());
    std::vector<Type> rest(col_types.begin() + 1, col_types.end());
    bool complete = heads.size() == dt->constructors.size();
    if (complete) {
      for (const auto& c : dt->constructors) {
        std::vector<Type> cols = c.arg_types;
        cols.insert(cols.end(), rest.begin(), rest.end());
        if (wildcard_useful(specialize(rows, c, col_types.front()), cols))
          return true;
      }
      return false;
    }
    return wildcard_useful(default_matrix(rows), rest);
  }
};

}  // namespace

std::vector<Diagnostic> check_theory(const Theory& theory) {
  std::vector<Diagnostic> diags;
  std::set<std::string> names;
  auto declare = [&](const std::string& name, const std::string& what) {
    if (!names.insert(name).second)
      diags.push_back({what + " " + name, "duplicate name '" + name + "'"});
  };

  for (const auto& d : theory.datatypes) {
    declare(d.name, "datatype");
    std::string where = "datatype " + d.name;
    if (d.constructors.empty())
      diags.push_back({where, "datatype has no constructors"});
    bool has_base = false;
    for (const auto& c : d.constructors) {
      declare(c.name, "constructor");
      bool recursive = false;
      for (const auto& at : c.arg_types) {
        if (!theory.datatype(at.name))
          diags.push_back({where, "constructor '" + c.name +
                                      "' uses undeclared type '" + at.name +
                                      "'"});
        if (at.name == d.name) recursive = true;
      }
      if (!recursive) has_base = true;
    }
    if (!d.constructors.empty() && !has_base)
      diags.push_back({where, "datatype has no non-recursive constructor"});
  }

  for (const auto& f : theory.functions) {
    declare(f.name, "fun");
    std::string where = "fun " + f.name;
    for (const auto& at : f.arg_types)
      if (!theory.datatype(at.name))
        diags.push_back({where, "undeclared argument type '" + at.name + "'"});
    if (!theory.datatype(f.return_type.name))
      diags.push_back(
          {where, "undeclared return type '" + f.return_type.name + "'"});
    if (f.equations.empty())
      diags.push_back({where, "function has no defining equations"});

    for (std::size_t ei = 0; ei < f.equations.size(); ++ei) {
      const auto& eq = f.equations[ei];
      std::string eq_where = where + ", equation " + std::to_string(ei + 1);
      if (eq.patterns.size() != f.arg_types.size()) {
        diags.push_back({eq_where, "pattern count does not match arity"});
        continue;
      }
      std::set<std::string> pattern_vars;
      bool linear = true;
      for (std::size_t i = 0; i < eq.patterns.size(); ++i) {
        const auto& p = eq.patterns[i];
        if (!is_constructor_pattern(theory, p))
          diags.push_back({eq_where,
                           "pattern contains a non-constructor symbol"});
        if (p->type() != f.arg_types[i])
          diags.push_back({eq_where, "pattern " + std::to_string(i + 1) +
                                         " has type '" + p->type().name +
                                         "', expected '" +
                                         f.arg_types[i].name + "'"});
        if (!left_linear(p, pattern_vars)) linear = false;
        TypeCheck tc{theory, diags, eq_where};
        std::map<std::string, Type> vt;
        tc.check_term(p, vt);
      }
      if (!linear)
        diags.push_back({eq_where, "patterns are not left-linear"});
      // rhs variables must come from the patterns
      std::map<std::string, Type> var_types;
      for (const auto& p : eq.patterns) {
        for (const auto& v : free_vars(p)) var_types[v.name] = v.type;
      }
      for (const auto& v : free_vars(eq.rhs))
        if (!var_types.count(v.name))
          diags.push_back({eq_where, "right-hand side variable '" + v.name +
                                         "' does not occur in the patterns"});
      TypeCheck tc{theory, diags, eq_where};
      std::map<std::string, Type> vt = var_types;
      if (tc.check_term(eq.rhs, vt) && eq.rhs->type() != f.return_type)
        diags.push_back({eq_where, "right-hand side has type '" +
                                       eq.rhs->type().name + "', expected '" +
                                       f.return_type.name + "'"});
    }

    // pairwise overlap
    for (std::size_t i = 0; i < f.equations.size(); ++i)
      for (std::size_t j = i + 1; j < f.equations.size(); ++j) {
        const auto& a = f.equations[i].patterns;
        const auto& b = f.equations[j].patterns;
        if (a.size() != b.size() || a.size() != f.arg_types.size()) continue;
        bool compatible = true;
        for (std::size_t k = 0; k < a.size() && compatible; ++k)
          compatible = patterns_compatible(a[k], b[k]);
        if (compatible)
          diags.push_back({where, "overlapping patterns in equations " +
                                      std::to_string(i + 1) + " and " +
                                      std::to_string(j + 1)});
      }

    // joint exhaustiveness
    std::vector<std::vector<TermPtr>> rows;
    for (const auto& eq : f.equations)
      if (eq.patterns.size() == f.arg_types.size()) rows.push_back(eq.patterns);
    if (!rows.empty()) {
      Exhaustiveness ex{theory};
      if (ex.wildcard_useful(rows, f.arg_types))
        diags.push_back({where, "patterns are not exhaustive"});
    }
  }

  auto check_named = [&](const NamedFormula& nf, const std::string& what) {
    declare(nf.name, what);
    TypeCheck tc{theory, diags, what + " " + nf.name};
    tc.check_formula(nf.formula);
  };
  for (const auto& l : theory.lemmas) check_named(l, "lemma");
  for (const auto& g : theory.goals) check_named(g, "goal");
  return diags;
}

namespace {

bool match_into(const TermPtr& pattern, const TermPtr& subject,
                const std::set<std::string>& solvable, Subst& out) {
  if (pattern->is_var()) {
    if (solvable.count(pattern->name())) {
      auto [it, inserted] = out.emplace(pattern->name(), subject);
      return inserted || equal(it->second, subject);
    }
    return subject->is_var() && subject->name() == pattern->name();
  }
  if (!subject->is_app() || subject->name() != pattern->name() ||
      subject->args().size() != pattern->args().size())
    return false;
  for (std::size_t i = 0; i < pattern->args().size(); ++i)
    if (!match_into(pattern->args()[i], subject->args()[i], solvable, out))
      return false;
  return true;
}

}  // namespace

std::optional<Subst> match(const TermPtr& pattern, const TermPtr& subject,
                           const std::set<std::string>& solvable) {
  Subst out;
  if (match_into(pattern, subject, solvable, out)) return out;
  return std::nullopt;
}

TermPtr substitute(const TermPtr& term, const Subst& subst) {
  if (term->is_var()) {
    auto it = subst.find(term->name());
    return it == subst.end() ? term : it->second;
  }
  bool changed = false;
  std::vector<TermPtr> args;
  args.reserve(term->args().size());
  for (const auto& a : term->args()) {
    args.push_back(substitute(a, subst));
    if (args.back() != a) changed = true;
  }
  if (!changed) return term;
  return Term::app(term->name(), std::move(args), term->type());
}

Equation substitute(const Equation& eq, const Subst& subst) {
  return {substitute(eq.lhs, subst), substitute(eq.rhs, subst)};
}

Formula substitute(const Formula& f, const Subst& subst) {
  Formula out;
  out.premises.reserve(f.premises.size());
  for (const auto& p : f.premises) out.premises.push_back(substitute(p, subst));
  out.conclusion = substitute(f.conclusion, subst);
  return out;
}

std::vector<TypedVar> free_vars(const TermPtr& t) {
  std::vector<TypedVar> out;
  std::set<std::string> seen;
  collect_free_vars(t, out, seen);
  return out;
}

std::vector<TypedVar> free_vars(const Formula& f) {
  std::vector<TypedVar> out;
  std::set<std::string> seen;
  for (const auto& p : f.premises) {
    collect_free_vars(p.lhs, out, seen);
    collect_free_vars(p.rhs, out, seen);
  }
  collect_free_vars(f.conclusion.lhs, out, seen);
  collect_free_vars(f.conclusion.rhs, out, seen);
  return out;
}

bool occurs(const TermPtr& term, const std::string& var) {
  if (term->is_var()) return term->name() == var;
  for (const auto& a : term->args())
    if (occurs(a, var)) return true;
  return false;
}

bool occurs(const Formula& f, const std::string& var) {
  for (const auto& p : f.premises)
    if (occurs(p.lhs, var) || occurs(p.rhs, var)) return true;
  return occurs(f.conclusion.lhs, var) || occurs(f.conclusion.rhs, var);
}

bool contains_subterm(const TermPtr& term, const TermPtr& sub) {
  if (equal(term, sub)) return true;
  for (const auto& a : term->args())
    if (contains_subterm(a, sub)) return true;
  return false;
}

const TermPtr& equation_side(const Formula& f, std::size_t equation, int side) {
  const Equation& eq =
      equation < f.premises.size() ? f.premises[equation] : f.conclusion;
  return side == 0 ? eq.lhs : eq.rhs;
}

TermPtr subterm_at(const Formula& f, const TermPos& pos) {
  TermPtr t = equation_side(f, pos.equation, pos.side);
  for (std::size_t i : pos.path) {
    if (i >= t->args().size()) throw std::out_of_range("bad term position");
    t = t->args()[i];
  }
  return t;
}

namespace {

void collect_occurrences(const TermPtr& t, const std::string& var,
                         TermPos& pos, std::vector<TermPos>& out) {
  if (t->is_var()) {
    if (t->name() == var) out.push_back(pos);
    return;
  }
  for (std::size_t i = 0; i < t->args().size(); ++i) {
    pos.path.push_back(i);
    collect_occurrences(t->args()[i], var, pos, out);
    pos.path.pop_back();
  }
}

}  // namespace

std::vector<TermPos> var_occurrences(const Formula& f, const std::string& var) {
  std::vector<TermPos> out;
  auto scan = [&](std::size_t eq_index, int side, const TermPtr& t) {
    TermPos pos{eq_index, side, {}};
    collect_occurrences(t, var, pos, out);
  };
  for (std::size_t i = 0; i < f.premises.size(); ++i) {
    scan(i, 0, f.premises[i].lhs);
    scan(i, 1, f.premises[i].rhs);
  }
  scan(f.premises.size(), 0, f.conclusion.lhs);
  scan(f.premises.size(), 1, f.conclusion.rhs);
  return out;
}

std::size_t formula_size(const Formula& f) {
  std::size_t n = 0;
  for (const auto& p : f.premises) n += p.lhs->size() + p.rhs->size();
  return n + f.conclusion.lhs->size() + f.conclusion.rhs->size();
}

std::string fresh_name(const std::string& base, std::set<std::string>& used) {
  std::string candidate = base;
  while (!used.insert(candidate).second) candidate += '\'';
  return candidate;
}

Sequent root_sequent(const Formula& goal) {
  Sequent s;
  s.fixed_vars = free_vars(goal);
  s.target = goal;
  return s;
}

}  // namespace united
