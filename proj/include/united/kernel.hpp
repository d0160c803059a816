#ifndef UNITED_KERNEL_HPP
#define UNITED_KERNEL_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace united {

struct Type {
  std::string name;
  friend bool operator==(const Type&, const Type&) = default;
  friend auto operator<=>(const Type&, const Type&) = default;
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// First-order term: a typed variable or an application of a constructor
/// or defined function to argument terms. Immutable; share freely.
class Term {
public:
  enum class Kind { Var, App };

  static TermPtr var(std::string name, Type type);
  static TermPtr app(std::string symbol, std::vector<TermPtr> args, Type type);

  Kind kind() const { return kind_; }
  bool is_var() const { return kind_ == Kind::Var; }
  bool is_app() const { return kind_ == Kind::App; }
  /// Variable name or applied symbol.
  const std::string& name() const { return name_; }
  const std::vector<TermPtr>& args() const { return args_; }
  const Type& type() const { return type_; }
  /// Node count (Var and App nodes), >= 1. Cached at construction.
  std::size_t size() const { return size_; }
  std::size_t hash() const { return hash_; }

private:
  Term(Kind kind, std::string name, std::vector<TermPtr> args, Type type);

  Kind kind_;
  std::string name_;
  std::vector<TermPtr> args_;
  Type type_;
  std::size_t size_;
  std::size_t hash_;
};

bool equal(const TermPtr& a, const TermPtr& b);
bool operator==(const Term& a, const Term& b);
inline bool operator!=(const Term& a, const Term& b) { return !(a == b); }

std::size_t term_size(const TermPtr& t);

struct Equation {
  TermPtr lhs;
  TermPtr rhs;
};
bool equal(const Equation& a, const Equation& b);

/// Premises imply the conclusion; free variables are implicitly universal.
struct Formula {
  std::vector<Equation> premises;
  Equation conclusion;
};
bool equal(const Formula& a, const Formula& b);

struct TypedVar {
  std::string name;
  Type type;
  friend bool operator==(const TypedVar&, const TypedVar&) = default;
  friend auto operator<=>(const TypedVar&, const TypedVar&) = default;
};

/// A formula used as an assumption. Schematic variables may be instantiated
/// when the hypothesis is matched against a goal; the rest are fixed.
struct Hypothesis {
  Formula formula;
  std::set<std::string> schematic_vars;
};

/// One proof obligation: fixed eigenvariables, assumptions, and a target.
struct Sequent {
  std::vector<TypedVar> fixed_vars;
  std::vector<Hypothesis> hyps;
  Formula target;
};

struct Constructor {
  std::string name;
  std::vector<Type> arg_types;
};

struct DatatypeDef {
  std::string name;
  std::vector<Constructor> constructors;
};

struct FunctionEquation {
  std::vector<TermPtr> patterns;
  TermPtr rhs;
};

struct FunctionDef {
  std::string name;
  std::vector<Type> arg_types;
  Type return_type;
  std::vector<FunctionEquation> equations;
};

struct NamedFormula {
  std::string name;
  Formula formula;
};

struct Theory {
  std::string name;
  std::vector<DatatypeDef> datatypes;
  std::vector<FunctionDef> functions;
  std::vector<NamedFormula> lemmas;  // proved so far; used as simp rules
  std::vector<NamedFormula> goals;

  const DatatypeDef* datatype(std::string_view name) const;
  const FunctionDef* function(std::string_view name) const;
  /// Finds a constructor by name; optionally reports its datatype.
  const Constructor* constructor(std::string_view name,
                                 const DatatypeDef** owner = nullptr) const;
  bool is_constructor(std::string_view name) const;
  const NamedFormula* goal(std::string_view name) const;
  /// True when the constructor has an argument of its own datatype.
  bool is_recursive_constructor(std::string_view ctor_name) const;
};

struct Diagnostic {
  std::string where;
  std::string message;
};

/// Validates every declaration-level invariant: arities, types, pattern
/// linearity/overlap/exhaustiveness, name uniqueness, well-foundedness.
/// Empty result means the theory is well-formed.
std::vector<Diagnostic> check_theory(const Theory& theory);

using Subst = std::map<std::string, TermPtr>;

/// First-order matching. Variables of `pattern` listed in `solvable` may
/// bind to subject subterms; other variables match only themselves.
/// nullopt on head clash or conflicting bindings.
std::optional<Subst> match(const TermPtr& pattern, const TermPtr& subject,
                           const std::set<std::string>& solvable);

TermPtr substitute(const TermPtr& term, const Subst& subst);
Equation substitute(const Equation& eq, const Subst& subst);
Formula substitute(const Formula& f, const Subst& subst);

/// Free variables in first-occurrence order (premises before conclusion,
/// left side before right, depth-first within a term).
std::vector<TypedVar> free_vars(const TermPtr& t);
std::vector<TypedVar> free_vars(const Formula& f);

bool occurs(const TermPtr& term, const std::string& var);
bool occurs(const Formula& f, const std::string& var);
/// True when `sub` occurs as a subterm of `term` (including term itself).
bool contains_subterm(const TermPtr& term, const TermPtr& sub);

/// Position of a subterm inside a formula: which equation (premises first,
/// then conclusion), which side, and the argument path from the root.
struct TermPos {
  std::size_t equation = 0;  // index into premises; == premises.size() for conclusion
  int side = 0;              // 0 = lhs, 1 = rhs
  std::vector<std::size_t> path;
  friend bool operator==(const TermPos&, const TermPos&) = default;
};

const TermPtr& equation_side(const Formula& f, std::size_t equation, int side);
TermPtr subterm_at(const Formula& f, const TermPos& pos);
/// All positions where variable `var` occurs, in formula order.
std::vector<TermPos> var_occurrences(const Formula& f, const std::string& var);

std::size_t formula_size(const Formula& f);

/// A fresh name based on `base` that avoids everything in `used`;
/// the result is inserted into `used`.
std::string fresh_name(const std::string& base, std::set<std::string>& used);

/// Root sequent for proving a formula: all free variables frozen.
Sequent root_sequent(const Formula& goal);

}  // namespace united

#endif
