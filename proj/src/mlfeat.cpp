#include "united/mlfeat.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

namespace united {

namespace {

bool strict_subterm(const TermPtr& sub, const TermPtr& of) {
  return !equal(sub, of) && contains_subterm(of, sub);
}

void call_positions(const FunctionDef& f,
                    const std::function<void(const TermPtr&, std::size_t)>& on) {
  for (const auto& eq : f.equations) {
    std::vector<TermPtr> calls;
    std::function<void(const TermPtr&)> walk = [&](const TermPtr& t) {
      if (t->is_app() && t->name() == f.name) calls.push_back(t);
      for (const auto& a : t->args()) walk(a);
    };
    walk(eq.rhs);
    for (const auto& call : calls)
      for (std::size_t i = 0; i < call->args().size(); ++i) {
        (void)eq;
        on(call, i);
      }
  }
}

}  // namespace

std::vector<std::size_t> recursion_positions(const FunctionDef& f) {
  std::set<std::size_t> out;
  for (const auto& eq : f.equations) {
    std::vector<TermPtr> calls;
    std::function<void(const TermPtr&)> walk = [&](const TermPtr& t) {
      if (t->is_app() && t->name() == f.name) calls.push_back(t);
      for (const auto& a : t->args()) walk(a);
    };
    walk(eq.rhs);
    for (const auto& call : calls)
      for (std::size_t i = 0; i < call->args().size(); ++i)
        if (i < eq.patterns.size() &&
            strict_subterm(call->args()[i], eq.patterns[i]))
          out.insert(i);
  }
  return {out.begin(), out.end()};
}

std::vector<std::size_t> varying_positions(const FunctionDef& f) {
  std::set<std::size_t> out;
  for (const auto& eq : f.equations) {
    std::vector<TermPtr> calls;
    std::function<void(const TermPtr&)> walk = [&](const TermPtr& t) {
      if (t->is_app() && t->name() == f.name) calls.push_back(t);
      for (const auto& a : t->args()) walk(a);
    };
    walk(eq.rhs);
    for (const auto& call : calls)
      for (std::size_t i = 0; i < call->args().size(); ++i)
        if (i < eq.patterns.size() && !equal(call->args()[i], eq.patterns[i]) &&
            !strict_subterm(call->args()[i], eq.patterns[i]))
          out.insert(i);
  }
  return {out.begin(), out.end()};
}

namespace {

struct Binding {
  enum class Kind { Name, Position } kind;
  std::string name;  // variable or function name
  TermPos pos;
};

struct FeatureEval {
  const Sequent& sequent;
  const InductArgs& args;
  const Theory& theory;
  std::map<std::string, Binding> env;

  std::vector<std::string> functions_in_target() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    std::function<void(const TermPtr&)> walk = [&](const TermPtr& t) {
      if (t->is_app() && theory.function(t->name()) &&
          seen.insert(t->name()).second)
        out.push_back(t->name());
      for (const auto& a : t->args()) walk(a);
    };
    const Formula& f = sequent.target;
    for (const auto& p : f.premises) {
      walk(p.lhs);
      walk(p.rhs);
    }
    walk(f.conclusion.lhs);
    walk(f.conclusion.rhs);
    return out;
  }

  const Binding& lookup(const std::string& name) const {
    auto it = env.find(name);
    if (it == env.end())
      throw std::invalid_argument("unbound feature variable '" + name + "'");
    return it->second;
  }

  bool quantify(const FeatureExpr& e) {
    bool exists = e.kind == FeatureExpr::Kind::Some;
    std::vector<Binding> domain;
    switch (e.domain) {
      case FeatureExpr::Domain::InductionVar:
        for (const auto& v : args.on)
          domain.push_back({Binding::Kind::Name, v, {}});
        break;
      case FeatureExpr::Domain::ArbitraryVar:
        for (const auto& v : args.arbitrary)
          domain.push_back({Binding::Kind::Name, v, {}});
        break;
      case FeatureExpr::Domain::Function:
        for (const auto& f : functions_in_target())
          domain.push_back({Binding::Kind::Name, f, {}});
        break;
      case FeatureExpr::Domain::Occurrence: {
        const Binding& of = lookup(e.of_var);
        for (const auto& pos : var_occurrences(sequent.target, of.name))
          domain.push_back({Binding::Kind::Position, "", pos});
        break;
      }
    }
    for (const auto& b : domain) {
      auto saved = env;
      env[e.binder] = b;
      bool v = eval(*e.children.front());
      env = std::move(saved);
      if (exists && v) return true;
      if (!exists && !v) return false;
    }
    return !exists;
  }

  // The enclosing application of an occurrence: parent symbol and which
  // argument the occurrence is.
  std::optional<std::pair<std::string, std::size_t>> parent_of(
      const TermPos& pos) const {
    if (pos.path.empty()) return std::nullopt;
    TermPos parent = pos;
    std::size_t arg_index = parent.path.back();
    parent.path.pop_back();
    TermPtr p = subterm_at(sequent.target, parent);
    return std::make_pair(p->name(), arg_index);
  }

  bool eval(const FeatureExpr& e) {
    using K = FeatureExpr::Kind;
    switch (e.kind) {
      case K::Not: return !eval(*e.children[0]);
      case K::And: return eval(*e.children[0]) && eval(*e.children[1]);
      case K::Or: return eval(*e.children[0]) || eval(*e.children[1]);
      case K::Implies: return !eval(*e.children[0]) || eval(*e.children[1]);
      case K::Some:
      case K::All: return quantify(e);
      case K::IsDatatypeVar: {
        const Binding& b = lookup(e.arg0);
        for (const auto& v : free_vars(sequent.target))
          if (v.name == b.name) return theory.datatype(v.type.name) != nullptr;
        return false;
      }
      case K::OccursInConclusion: {
        const Binding& b = lookup(e.arg0);
        return occurs(sequent.target.conclusion.lhs, b.name) ||
               occurs(sequent.target.conclusion.rhs, b.name);
      }
      case K::IsRecursive: {
        const FunctionDef* f = theory.function(lookup(e.arg0).name);
        return f && !recursion_positions(*f).empty();
      }
      case K::AtRecArgpos:
      case K::AtVaryingArgpos: {
        const Binding& o = lookup(e.arg0);
        if (o.kind != Binding::Kind::Position) return false;
        auto parent = parent_of(o.pos);
        if (!parent) return false;
        const FunctionDef* f = theory.function(lookup(e.arg1).name);
        if (!f || parent->first != f->name) return false;
        auto positions = e.kind == K::AtRecArgpos ? recursion_positions(*f)
                                                  : varying_positions(*f);
        return std::find(positions.begin(), positions.end(), parent->second) !=
               positions.end();
      }
      case K::UsesRule: return args.rule.has_value();
      case K::RuleFunctionOccursInGoal: {
        if (!args.rule) return false;
        for (const auto& f : functions_in_target())
          if (f == *args.rule) return true;
        return false;
      }
      case K::CountOnLe:
        return args.on.size() <= static_cast<std::size_t>(e.bound);
      case K::CountArbitraryLe:
        return args.arbitrary.size() <= static_cast<std::size_t>(e.bound);
    }
    return false;
  }
};

}  // namespace

bool eval_feature(const FeatureExprPtr& expr, const Sequent& sequent,
                  const InductArgs& args, const Theory& theory) {
  FeatureEval ev{sequent, args, theory, {}};
  return ev.eval(*expr);
}

FeatureVector extract(const Sequent& sequent, const InductArgs& args,
                      const FeatureSet& features, const Theory& theory) {
  FeatureVector out;
  out.reserve(features.size());
  for (const auto& e : features.exprs)
    out.push_back(eval_feature(e, sequent, args, theory));
  return out;
}

double score(const FeatureVector& v, const Weights& w) {
  if (v.size() != w.values.size())
    throw std::invalid_argument("feature vector / weights length mismatch");
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i]) s += w.values[i];
  return s;
}

std::vector<std::pair<InductArgs, double>> rank(
    const std::vector<std::pair<InductArgs, FeatureVector>>& candidates,
    const Weights& w) {
  std::vector<std::pair<InductArgs, double>> out;
  out.reserve(candidates.size());
  for (const auto& [args, v] : candidates) out.emplace_back(args, score(v, w));
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

// --- feature DSL parsing -----------------------------------------------------

namespace {

struct FTok {
  std::string text;
  bool is_number = false;
  bool is_symbol = false;
};

std::vector<FTok> flex(std::string_view line) {
  std::vector<FTok> out;
  std::size_t i = 0;
  auto word_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  };
  while (i < line.size()) {
    char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < line.size() && word_char(line[j])) ++j;
      out.push_back({std::string(line.substr(i, j - i)), false, false});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j])))
        ++j;
      out.push_back({std::string(line.substr(i, j - i)), true, false});
      i = j;
      continue;
    }
    if (line.substr(i, 2) == "<=") {
      out.push_back({"<=", false, true});
      i += 2;
      continue;
    }
    out.push_back({std::string(1, c), false, true});
    ++i;
  }
  return out;
}

struct FParser {
  const std::vector<FTok>& toks;
  std::size_t pos = 0;
  const std::string& line;

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("bad feature assertion '" + line + "': " + what);
  }

  bool at(std::string_view text) const {
    return pos < toks.size() && toks[pos].text == text;
  }
  std::string next_word(const std::string& what) {
    if (pos >= toks.size() || toks[pos].is_symbol || toks[pos].is_number)
      fail("expected " + what);
    return toks[pos++].text;
  }
  void expect(std::string_view text) {
    if (!at(text)) fail("expected '" + std::string(text) + "'");
    ++pos;
  }

  FeatureExprPtr make(FeatureExpr e) {
    return std::make_shared<FeatureExpr>(std::move(e));
  }

  FeatureExprPtr parse_expr() {
    if (at("some") || at("all")) {
      FeatureExpr e;
      e.kind = at("some") ? FeatureExpr::Kind::Some : FeatureExpr::Kind::All;
      ++pos;
      std::string domain = next_word("quantifier domain");
      if (domain == "induction-var" || domain == "induction-term") {
        e.domain = FeatureExpr::Domain::InductionVar;
      } else if (domain == "arbitrary-var") {
        e.domain = FeatureExpr::Domain::ArbitraryVar;
      } else if (domain == "function") {
        e.domain = FeatureExpr::Domain::Function;
      } else if (domain == "occurrence") {
        e.domain = FeatureExpr::Domain::Occurrence;
      } else {
        fail("unknown quantifier domain '" + domain + "'");
      }
      e.binder = next_word("binder");
      if (e.domain == FeatureExpr::Domain::Occurrence) {
        expect("of");
        e.of_var = next_word("variable");
      }
      expect(".");
      e.children.push_back(parse_expr());
      return make(std::move(e));
    }
    return parse_implies();
  }

  FeatureExprPtr parse_implies() {
    FeatureExprPtr l = parse_or();
    if (at("implies")) {
      ++pos;
      FeatureExpr e;
      e.kind = FeatureExpr::Kind::Implies;
      e.children = {l, parse_implies()};
      return make(std::move(e));
    }
    return l;
  }

  FeatureExprPtr parse_or() {
    FeatureExprPtr l = parse_and();
    while (at("or")) {
      ++pos;
      FeatureExpr e;
      e.kind = FeatureExpr::Kind::Or;
      e.children = {l, parse_and()};
      l = make(std::move(e));
    }
    return l;
  }

  FeatureExprPtr parse_and() {
    FeatureExprPtr l = parse_unary();
    while (at("and")) {
      ++pos;
      FeatureExpr e;
      e.kind = FeatureExpr::Kind::And;
      e.children = {l, parse_unary()};
      l = make(std::move(e));
    }
    return l;
  }

  FeatureExprPtr parse_unary() {
    if (at("not")) {
      ++pos;
      FeatureExpr e;
      e.kind = FeatureExpr::Kind::Not;
      e.children = {parse_unary()};
      return make(std::move(e));
    }
    if (at("(")) {
      ++pos;
      FeatureExprPtr e = parse_expr();
      expect(")");
      return e;
    }
    return parse_atom();
  }

  FeatureExprPtr parse_atom() {
    std::string head = next_word("predicate");
    FeatureExpr e;
    if (head == "uses_rule") {
      e.kind = FeatureExpr::Kind::UsesRule;
    } else if (head == "rule_function_occurs_in_goal") {
      e.kind = FeatureExpr::Kind::RuleFunctionOccursInGoal;
    } else if (head == "count_on" || head == "count_arbitrary") {
      e.kind = head == "count_on" ? FeatureExpr::Kind::CountOnLe
                                  : FeatureExpr::Kind::CountArbitraryLe;
      expect("<=");
      if (pos >= toks.size() || !toks[pos].is_number) fail("expected number");
      e.bound = std::stoi(toks[pos++].text);
    } else if (head == "is_datatype_var" || head == "occurs_in_conclusion" ||
               head == "is_recursive") {
      e.kind = head == "is_datatype_var" ? FeatureExpr::Kind::IsDatatypeVar
               : head == "occurs_in_conclusion"
                   ? FeatureExpr::Kind::OccursInConclusion
                   : FeatureExpr::Kind::IsRecursive;
      expect("(");
      e.arg0 = next_word("argument");
      expect(")");
    } else if (head == "at_rec_argpos" || head == "at_varying_argpos") {
      e.kind = head == "at_rec_argpos" ? FeatureExpr::Kind::AtRecArgpos
                                       : FeatureExpr::Kind::AtVaryingArgpos;
      expect("(");
      e.arg0 = next_word("occurrence argument");
      expect(",");
      e.arg1 = next_word("function argument");
      expect(")");
    } else {
      fail("unknown predicate '" + head + "'");
    }
    return make(std::move(e));
  }
};

}  // namespace

FeatureSet parse_features(std::string_view text) {
  FeatureSet out;
  std::string line;
  std::istringstream in{std::string(text)};
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string trimmed = line;
    while (!trimmed.empty() &&
           std::isspace(static_cast<unsigned char>(trimmed.back())))
      trimmed.pop_back();
    std::size_t lead = 0;
    while (lead < trimmed.size() &&
           std::isspace(static_cast<unsigned char>(trimmed[lead])))
      ++lead;
    trimmed.erase(0, lead);
    if (trimmed.empty()) continue;
    auto toks = flex(trimmed);
    FParser p{toks, 0, trimmed};
    FeatureExprPtr e = p.parse_expr();
    if (p.pos != toks.size()) p.fail("trailing tokens");
    out.exprs.push_back(std::move(e));
    out.names.push_back(trimmed);
  }
  return out;
}

Weights parse_weights(std::string_view text) {
  Weights out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    double v;
    if (ls >> v) {
      out.values.push_back(v);
      double extra;
      while (ls >> extra) out.values.push_back(extra);
    }
  }
  return out;
}

std::string print_features(const FeatureSet& fs) {
  std::string out;
  for (const auto& n : fs.names) out += n + "\n";
  return out;
}

std::string print_weights(const Weights& w) {
  std::ostringstream out;
  for (double v : w.values) out << v << "\n";
  return out.str();
}

namespace {

constexpr const char* kDefaultFeatures = R"(# induction heuristics, one assertion per line
all induction-var v . is_datatype_var(v)
some induction-var v . some occurrence o of v . some function f . at_rec_argpos(o, f)
all induction-var v . some occurrence o of v . some function f . at_rec_argpos(o, f)
some arbitrary-var v . some occurrence o of v . some function f . at_varying_argpos(o, f)
all induction-var v . occurs_in_conclusion(v)
count_on <= 1
count_arbitrary <= 2
some induction-var v . all occurrence o of v . all function f . not at_rec_argpos(o, f)
some arbitrary-var v . all occurrence o of v . all function f . not at_varying_argpos(o, f)
uses_rule and rule_function_occurs_in_goal
)";

constexpr const char* kDefaultWeights = R"(0.5
2.0
1.0
2.5
0.5
0.5
0.25
-2.0
-1.5
0.5
)";

}  // namespace

FeatureSet default_feature_set() { return parse_features(kDefaultFeatures); }

Weights default_weights() { return parse_weights(kDefaultWeights); }

Weights fit_weights(const std::vector<FitExample>& corpus,
                    const FeatureSet& features, const InductLimits& limits) {
  std::size_t n = features.size();
  std::vector<double> pos_true(n, 0), neg_true(n, 0);
  double pos_total = 0, neg_total = 0;

  for (const auto& ex : corpus) {
    auto candidates = candidate_applications(ex.root, *ex.theory, limits);
    bool found = false;
    for (const auto& c : candidates) {
      FeatureVector v = extract(ex.root, c, features, *ex.theory);
      bool chosen = c == ex.chosen;
      found = found || chosen;
      (chosen ? pos_total : neg_total) += 1;
      for (std::size_t i = 0; i < n; ++i)
        if (v[i]) (chosen ? pos_true[i] : neg_true[i]) += 1;
    }
    if (!found)
      throw UnknownChoice("chosen induction arguments for goal in '" +
                          ex.theory->name +
                          "' are not in the candidate space");
  }

  Weights w;
  w.values.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    w.values[i] = std::log((pos_true[i] + 1) / (pos_total + 2)) -
                  std::log((neg_true[i] + 1) / (neg_total + 2));
  return w;
}

}  // namespace united
