#include "united/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

namespace united {

ParseError::ParseError(SourcePos p, std::string exp, std::string fnd)
    : std::runtime_error("parse error at " + std::to_string(p.line) + ":" +
                         std::to_string(p.column) + ": expected " + exp +
                         ", found " + (fnd.empty() ? "end of input" : fnd)),
      pos(p),
      expected(std::move(exp)),
      found(std::move(fnd)) {}

namespace {

enum class Tok {
  Ident,
  Number,
  String,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Pipe,
  Equals,
  DoubleColon,
  Arrow,
  LongArrow,  // ==>
  Colon,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::String: return "string";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Pipe: return "'|'";
    case Tok::Equals: return "'='";
    case Tok::DoubleColon: return "'::'";
    case Tok::Arrow: return "'->'";
    case Tok::LongArrow: return "'==>'";
    case Tok::Colon: return "':'";
    case Tok::End: return "end of input";
  }
  return "?";
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    SourcePos pos{line, col};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      out.push_back({Tok::Number, std::string(text.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') ++j;
      if (j >= text.size() || text[j] != '"')
        throw ParseError(pos, "closing '\"'", "end of line");
      out.push_back({Tok::String, std::string(text.substr(i + 1, j - i - 1)), pos});
      advance(j - i + 1);
      continue;
    }
    auto two = text.substr(i, 2);
    auto three = text.substr(i, 3);
    if (three == "==>") {
      out.push_back({Tok::LongArrow, "==>", pos});
      advance(3);
      continue;
    }
    if (two == "::") {
      out.push_back({Tok::DoubleColon, "::", pos});
      advance(2);
      continue;
    }
    if (two == "->") {
      out.push_back({Tok::Arrow, "->", pos});
      advance(2);
      continue;
    }
    Tok kind;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '[': kind = Tok::LBracket; break;
      case ']': kind = Tok::RBracket; break;
      case ',': kind = Tok::Comma; break;
      case '|': kind = Tok::Pipe; break;
      case '=': kind = Tok::Equals; break;
      case ':': kind = Tok::Colon; break;
      default:
        throw ParseError(pos, "token", std::string(1, c));
    }
    out.push_back({kind, std::string(1, c), pos});
    advance(1);
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

// --- raw (untyped) term trees ----------------------------------------------

struct Raw {
  std::string name;
  SourcePos pos;
  std::vector<Raw> args;
};

class Tokens {
public:
  explicit Tokens(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_ident(std::string_view text) const {
    return at(Tok::Ident) && peek().text == text;
  }
  Token next() {
    Token t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  Token expect(Tok kind, const std::string& what) {
    if (!at(kind)) throw ParseError(peek().pos, what, found_text());
    return next();
  }
  std::string expect_ident(const std::string& what) {
    return expect(Tok::Ident, what).text;
  }
  void expect_keyword(std::string_view kw) {
    if (!at_ident(kw))
      throw ParseError(peek().pos, "'" + std::string(kw) + "'", found_text());
    next();
  }
  std::string found_text() const {
    return at(Tok::End) ? "end of input" : "'" + peek().text + "'";
  }
  SourcePos pos() const { return peek().pos; }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

const std::vector<std::string> kItemKeywords = {"theory", "datatype", "fun",
                                                "goal"};

bool is_item_keyword(const std::string& s) {
  return std::find(kItemKeywords.begin(), kItemKeywords.end(), s) !=
         kItemKeywords.end();
}

// --- theory parsing ----------------------------------------------------------

class TheoryParser {
public:
  TheoryParser(Tokens toks) : ts(std::move(toks)) {}

  Theory parse() {
    ts.expect_keyword("theory");
    theory.name = name_ident("theory name");
    while (!ts.at(Tok::End)) {
      if (ts.at_ident("datatype")) {
        parse_datatype();
      } else if (ts.at_ident("fun")) {
        parse_fun();
      } else if (ts.at_ident("goal")) {
        parse_goal();
      } else {
        throw ParseError(ts.pos(), "'datatype', 'fun' or 'goal'",
                         ts.found_text());
      }
    }
    finish();
    return theory;
  }

  Formula parse_standalone_formula(const Theory& base) {
    theory = base;
    Formula f = parse_formula();
    if (!ts.at(Tok::End))
      throw ParseError(ts.pos(), "end of formula", ts.found_text());
    return f;
  }

private:
  Tokens ts;
  Theory theory;
  std::map<std::string, SourcePos> item_pos;

  std::string name_ident(const std::string& what) {
    SourcePos pos = ts.pos();
    std::string name = ts.expect_ident(what);
    if (is_item_keyword(name))
      throw ParseError(pos, what, "reserved word '" + name + "'");
    return name;
  }

  void parse_datatype() {
    ts.next();
    SourcePos pos = ts.pos();
    DatatypeDef d;
    d.name = name_ident("datatype name");
    item_pos.emplace(d.name, pos);
    ts.expect(Tok::Equals, "'='");
    while (true) {
      Constructor c;
      c.name = name_ident("constructor name");
      // items begin with a keyword, so a plain identifier here can only be
      // a constructor argument type
      while (ts.at(Tok::Ident) && !is_item_keyword(ts.peek().text))
        c.arg_types.push_back(Type{ts.next().text});
      d.constructors.push_back(std::move(c));
      if (ts.at(Tok::Pipe)) {
        ts.next();
        continue;
      }
      break;
    }
    theory.datatypes.push_back(std::move(d));
  }

  void parse_fun() {
    ts.next();
    SourcePos pos = ts.pos();
    FunctionDef f;
    f.name = name_ident("function name");
    item_pos.emplace(f.name, pos);
    ts.expect(Tok::DoubleColon, "'::'");
    std::vector<Type> types;
    types.push_back(Type{ts.expect_ident("type")});
    while (ts.at(Tok::Arrow)) {
      ts.next();
      types.push_back(Type{ts.expect_ident("type")});
    }
    if (types.size() < 2)
      throw ParseError(ts.pos(), "'->'", ts.found_text());
    f.return_type = types.back();
    types.pop_back();
    f.arg_types = std::move(types);
    // the signature is in scope for the function's own equations
    theory.functions.push_back(f);
    FunctionDef& decl = theory.functions.back();

    bool any = false;
    while (ts.at_ident(decl.name)) {
      SourcePos eq_pos = ts.pos();
      ts.next();
      FunctionEquation eq;
      std::map<std::string, Type> env;
      for (std::size_t i = 0; i < decl.arg_types.size(); ++i)
        eq.patterns.push_back(parse_pattern(decl.arg_types[i], env, eq_pos));
      ts.expect(Tok::Equals, "'='");
      Raw raw = parse_raw_term();
      eq.rhs = resolve_required(raw, decl.return_type, env);
      decl.equations.push_back(std::move(eq));
      any = true;
    }
    if (!any)
      throw ParseError(ts.pos(), "defining equation for '" + decl.name + "'",
                       ts.found_text());
  }

  TermPtr parse_pattern(const Type& expected, std::map<std::string, Type>& env,
                        SourcePos eq_pos) {
    (void)eq_pos;
    if (ts.at(Tok::LParen)) {
      ts.next();
      TermPtr p = parse_ctor_pattern(expected, env);
      ts.expect(Tok::RParen, "')'");
      return p;
    }
    if (!ts.at(Tok::Ident))
      throw ParseError(ts.pos(), "pattern", ts.found_text());
    return parse_ctor_pattern(expected, env);
  }

  TermPtr parse_ctor_pattern(const Type& expected,
                             std::map<std::string, Type>& env) {
    SourcePos pos = ts.pos();
    std::string name = ts.expect_ident("pattern");
    const DatatypeDef* owner = nullptr;
    if (const Constructor* c = theory.constructor(name, &owner)) {
      if (Type{owner->name} != expected)
        throw ParseError(pos, "pattern of type '" + expected.name + "'",
                         "constructor '" + name + "' of '" + owner->name + "'");
      std::vector<TermPtr> args;
      for (const auto& at : c->arg_types) args.push_back(parse_pattern(at, env, pos));
      return Term::app(name, std::move(args), expected);
    }
    auto [it, inserted] = env.emplace(name, expected);
    if (!inserted && it->second != expected)
      throw ParseError(pos, "variable of one type",
                       "'" + name + "' at types '" + it->second.name +
                           "' and '" + expected.name + "'");
    return Term::var(name, expected);
  }

  void parse_goal() {
    ts.next();
    SourcePos pos = ts.pos();
    NamedFormula g;
    g.name = name_ident("goal name");
    item_pos.emplace(g.name, pos);
    ts.expect(Tok::Colon, "':'");
    g.formula = parse_formula();
    theory.goals.push_back(std::move(g));
  }

  Formula parse_formula() {
    std::vector<std::pair<Raw, Raw>> raw_eqs;
    while (true) {
      Raw lhs = parse_raw_term();
      ts.expect(Tok::Equals, "'='");
      Raw rhs = parse_raw_term();
      raw_eqs.emplace_back(std::move(lhs), std::move(rhs));
      if (ts.at(Tok::LongArrow)) {
        ts.next();
        continue;
      }
      break;
    }
    return resolve_formula(raw_eqs);
  }

  // Application of a declared symbol consumes exactly its declared arity in
  // argument atoms; bare identifiers are variables or nullary symbols.
  Raw parse_raw_term() {
    SourcePos pos = ts.pos();
    std::string head = ts.expect_ident("term");
    if (is_item_keyword(head))
      throw ParseError(pos, "term", "reserved word '" + head + "'");
    Raw r{head, pos, {}};
    std::size_t arity = symbol_arity(head);
    for (std::size_t i = 0; i < arity; ++i) r.args.push_back(parse_atom());
    return r;
  }

  Raw parse_atom() {
    if (ts.at(Tok::LParen)) {
      ts.next();
      Raw r = parse_raw_term();
      ts.expect(Tok::RParen, "')'");
      return r;
    }
    if (!ts.at(Tok::Ident))
      throw ParseError(ts.pos(), "term", ts.found_text());
    SourcePos pos = ts.pos();
    std::string head = ts.next().text;
    if (is_item_keyword(head))
      throw ParseError(pos, "term", "reserved word '" + head + "'");
    Raw r{head, pos, {}};
    // a declared non-nullary symbol needs parentheses in argument position
    return r;
  }

  std::size_t symbol_arity(const std::string& name) const {
    if (const Constructor* c = theory.constructor(name)) return c->arg_types.size();
    if (const FunctionDef* f = theory.function(name)) return f->arg_types.size();
    return 0;
  }

  // Resolves a raw tree against the signature; returns nullptr only for a
  // bare variable whose type cannot be determined yet.
  TermPtr resolve(const Raw& raw, const std::optional<Type>& expected,
                  std::map<std::string, Type>& env) {
    const DatatypeDef* owner = nullptr;
    if (const Constructor* c = theory.constructor(raw.name, &owner)) {
      return resolve_app(raw, c->arg_types, Type{owner->name}, expected, env);
    }
    if (const FunctionDef* f = theory.function(raw.name)) {
      return resolve_app(raw, f->arg_types, f->return_type, expected, env);
    }
    if (!raw.args.empty())
      throw ParseError(raw.pos, "declared symbol",
                       "'" + raw.name + "' applied to arguments");
    auto it = env.find(raw.name);
    if (it != env.end()) {
      if (expected && it->second != *expected)
        throw ParseError(raw.pos,
                         "term of type '" + expected->name + "'",
                         "variable '" + raw.name + "' of type '" +
                             it->second.name + "'");
      return Term::var(raw.name, it->second);
    }
    if (expected) {
      env.emplace(raw.name, *expected);
      return Term::var(raw.name, *expected);
    }
    return nullptr;
  }

  TermPtr resolve_app(const Raw& raw, const std::vector<Type>& arg_types,
                      const Type& result, const std::optional<Type>& expected,
                      std::map<std::string, Type>& env) {
    if (expected && result != *expected)
      throw ParseError(raw.pos, "term of type '" + expected->name + "'",
                       "'" + raw.name + "' of type '" + result.name + "'");
    if (raw.args.size() != arg_types.size())
      throw ParseError(raw.pos,
                       std::to_string(arg_types.size()) + " arguments to '" +
                           raw.name + "'",
                       std::to_string(raw.args.size()) + " arguments");
    std::vector<TermPtr> args;
    for (std::size_t i = 0; i < raw.args.size(); ++i)
      args.push_back(resolve_required(raw.args[i], arg_types[i], env));
    return Term::app(raw.name, std::move(args), result);
  }

  TermPtr resolve_required(const Raw& raw, const Type& expected,
                           std::map<std::string, Type>& env) {
    TermPtr t = resolve(raw, expected, env);
    if (!t)
      throw ParseError(raw.pos, "typed term", "'" + raw.name + "'");
    return t;
  }

  Formula resolve_formula(const std::vector<std::pair<Raw, Raw>>& raw_eqs) {
    std::map<std::string, Type> env;
    std::vector<std::optional<Equation>> resolved(raw_eqs.size());
    // Bare-variable sides may need a later equation to fix their type, so
    // iterate until no progress.
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t i = 0; i < raw_eqs.size(); ++i) {
        if (resolved[i]) continue;
        TermPtr l = resolve(raw_eqs[i].first, std::nullopt, env);
        TermPtr r = resolve(raw_eqs[i].second,
                            l ? std::optional<Type>(l->type()) : std::nullopt,
                            env);
        if (!l && r) l = resolve(raw_eqs[i].first, r->type(), env);
        if (l && r) {
          if (l->type() != r->type())
            throw ParseError(raw_eqs[i].second.pos,
                             "term of type '" + l->type().name + "'",
                             "term of type '" + r->type().name + "'");
          resolved[i] = Equation{l, r};
          progress = true;
        }
      }
    }
    for (std::size_t i = 0; i < raw_eqs.size(); ++i)
      if (!resolved[i])
        throw ParseError(raw_eqs[i].first.pos,
                         "a type for variable '" + raw_eqs[i].first.name + "'",
                         "no constraining occurrence");
    Formula f;
    for (std::size_t i = 0; i + 1 < raw_eqs.size(); ++i)
      f.premises.push_back(*resolved[i]);
    f.conclusion = *resolved.back();
    return f;
  }

  void finish() {
    auto diags = check_theory(theory);
    if (!diags.empty()) {
      const Diagnostic& d = diags.front();
      SourcePos pos{1, 1};
      for (const auto& [name, p] : item_pos)
        if (d.where.find(name) != std::string::npos) pos = p;
      throw ParseError(pos, "well-formed theory",
                       d.where + ": " + d.message);
    }
  }
};

}  // namespace

Theory parse_theory(std::string_view text) {
  TheoryParser p(Tokens(lex(text)));
  return p.parse();
}

Formula parse_formula(std::string_view text, const Theory& theory) {
  TheoryParser p(Tokens(lex(text)));
  return p.parse_standalone_formula(theory);
}

// --- strategies --------------------------------------------------------------

namespace {

Strategy parse_strategy_expr(Tokens& ts) {
  SourcePos pos = ts.pos();
  std::string head = ts.expect_ident("strategy");
  Strategy s;
  if (head == "Auto") {
    s.kind = Strategy::Kind::Auto;
  } else if (head == "Simp") {
    s.kind = Strategy::Kind::Simp;
  } else if (head == "IsSolved") {
    s.kind = Strategy::Kind::IsSolved;
  } else if (head == "Dynamic") {
    ts.expect(Tok::LParen, "'('");
    std::string what = ts.expect_ident("'Induct' or 'Conjecture'");
    if (what == "Induct") {
      s.kind = Strategy::Kind::DynamicInduct;
    } else if (what == "Conjecture") {
      s.kind = Strategy::Kind::DynamicConjecture;
    } else {
      throw ParseError(pos, "'Induct' or 'Conjecture'", "'" + what + "'");
    }
    ts.expect(Tok::RParen, "')'");
  } else if (head == "Thens" || head == "Ors") {
    s.kind = head == "Thens" ? Strategy::Kind::Thens : Strategy::Kind::Ors;
    ts.expect(Tok::LBracket, "'['");
    while (true) {
      s.children.push_back(parse_strategy_expr(ts));
      if (ts.at(Tok::Comma)) {
        ts.next();
        continue;
      }
      break;
    }
    ts.expect(Tok::RBracket, "']'");
  } else if (head == "Repeat") {
    s.kind = Strategy::Kind::Repeat;
    ts.expect(Tok::LParen, "'('");
    s.children.push_back(parse_strategy_expr(ts));
    ts.expect(Tok::Comma, "','");
    Token n = ts.expect(Tok::Number, "iteration count");
    s.max_iter = std::stoi(n.text);
    if (s.max_iter < 1)
      throw ParseError(n.pos, "iteration count >= 1", n.text);
    ts.expect(Tok::RParen, "')'");
  } else if (auto named = lookup_named_strategy(head)) {
    s = *named;
  } else {
    throw ParseError(pos, "strategy", "'" + head + "'");
  }
  return s;
}

}  // namespace

Strategy parse_strategy(std::string_view text) {
  Tokens ts(lex(text));
  Strategy s = parse_strategy_expr(ts);
  if (!ts.at(Tok::End))
    throw ParseError(ts.pos(), "end of strategy", ts.found_text());
  return s;
}

// --- proof scripts -----------------------------------------------------------

namespace {

// Script lines are significant: each step sits on its own line.
std::vector<std::pair<int, std::string>> script_lines(std::string_view text) {
  std::vector<std::pair<int, std::string>> out;
  int line = 1;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      std::string s(text.substr(start, i - start));
      if (auto hash = s.find('#'); hash != std::string::npos) s.resize(hash);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
      std::size_t lead = 0;
      while (lead < s.size() && std::isspace(static_cast<unsigned char>(s[lead])))
        ++lead;
      s.erase(0, lead);
      if (!s.empty()) out.emplace_back(line, std::move(s));
      start = i + 1;
      ++line;
    }
  }
  return out;
}

bool marker_ahead(Tokens& ts, std::string_view word) {
  return ts.at_ident(word) && ts.peek(1).kind == Tok::Colon;
}

ProofStep parse_step_line(int line, const std::string& text,
                          const Theory& theory) {
  Tokens ts(lex(text));
  SourcePos pos{line, 1};
  std::string head = ts.expect_ident("proof step");
  ProofStep step;
  if (head == "auto") {
    step.kind = ProofStep::Kind::Auto;
  } else if (head == "simp") {
    step.kind = ProofStep::Kind::Simp;
  } else if (head == "qed") {
    step.kind = ProofStep::Kind::Qed;
  } else if (head == "cases") {
    step.kind = ProofStep::Kind::Cases;
    step.var = ts.expect_ident("variable");
  } else if (head == "induct") {
    step.kind = ProofStep::Kind::Induct;
    while (ts.at(Tok::Ident) && !marker_ahead(ts, "arbitrary") &&
           !marker_ahead(ts, "rule"))
      step.induct.on.push_back(ts.next().text);
    if (step.induct.on.empty())
      throw ParseError(pos, "induction variable", ts.found_text());
    if (marker_ahead(ts, "arbitrary")) {
      ts.next();
      ts.next();
      while (ts.at(Tok::Ident) && !marker_ahead(ts, "rule"))
        step.induct.arbitrary.push_back(ts.next().text);
    }
    if (marker_ahead(ts, "rule")) {
      ts.next();
      ts.next();
      step.induct.rule = ts.expect_ident("rule function");
    }
  } else if (head == "conjecture") {
    step.kind = ProofStep::Kind::Conjecture;
    Token f = ts.expect(Tok::String, "quoted formula");
    step.conjecture = parse_formula(f.text, theory);
  } else {
    throw ParseError(pos, "proof step", "'" + head + "'");
  }
  if (!ts.at(Tok::End))
    throw ParseError(ts.pos(), "end of step", ts.found_text());
  return step;
}

}  // namespace

NamedScript parse_script(std::string_view text, const Theory& theory) {
  auto lines = script_lines(text);
  if (lines.empty()) throw ParseError({1, 1}, "'proof <goal>'", "end of input");
  NamedScript out;
  {
    Tokens ts(lex(lines.front().second));
    ts.expect_keyword("proof");
    out.goal = ts.expect_ident("goal name");
    if (!ts.at(Tok::End))
      throw ParseError(ts.pos(), "end of line", ts.found_text());
  }
  for (std::size_t i = 1; i < lines.size(); ++i)
    out.script.push_back(
        parse_step_line(lines[i].first, lines[i].second, theory));
  if (out.script.empty() || out.script.back().kind != ProofStep::Kind::Qed)
    throw ParseError({lines.back().first, 1}, "'qed' as the final step",
                     "script end");
  return out;
}

// --- printing ----------------------------------------------------------------

namespace {

void print_term_into(const TermPtr& t, std::string& out, bool atom_position) {
  if (t->is_var() || t->args().empty()) {
    out += t->name();
    return;
  }
  if (atom_position) out += '(';
  out += t->name();
  for (const auto& a : t->args()) {
    out += ' ';
    print_term_into(a, out, true);
  }
  if (atom_position) out += ')';
}

}  // namespace

std::string print_term(const TermPtr& t) {
  std::string out;
  print_term_into(t, out, false);
  return out;
}

std::string print_equation(const Equation& eq) {
  return print_term(eq.lhs) + " = " + print_term(eq.rhs);
}

std::string print_formula(const Formula& f) {
  std::string out;
  for (const auto& p : f.premises) out += print_equation(p) + " ==> ";
  out += print_equation(f.conclusion);
  return out;
}

std::string print_theory(const Theory& theory) {
  std::ostringstream out;
  out << "theory " << theory.name << "\n";
  for (const auto& d : theory.datatypes) {
    out << "\ndatatype " << d.name << " =";
    for (std::size_t i = 0; i < d.constructors.size(); ++i) {
      if (i) out << " |";
      out << ' ' << d.constructors[i].name;
      for (const auto& at : d.constructors[i].arg_types) out << ' ' << at.name;
    }
    out << "\n";
  }
  for (const auto& f : theory.functions) {
    out << "\nfun " << f.name << " ::";
    for (const auto& at : f.arg_types) out << ' ' << at.name << " ->";
    out << ' ' << f.return_type.name << "\n";
    for (const auto& eq : f.equations) {
      out << f.name;
      for (const auto& p : eq.patterns) {
        std::string s;
        print_term_into(p, s, true);
        out << ' ' << s;
      }
      out << " = " << print_term(eq.rhs) << "\n";
    }
  }
  for (const auto& g : theory.goals)
    out << "\ngoal " << g.name << ": " << print_formula(g.formula) << "\n";
  return out.str();
}

std::string print_strategy(const Strategy& s) {
  switch (s.kind) {
    case Strategy::Kind::Auto: return "Auto";
    case Strategy::Kind::Simp: return "Simp";
    case Strategy::Kind::IsSolved: return "IsSolved";
    case Strategy::Kind::DynamicInduct: return "Dynamic(Induct)";
    case Strategy::Kind::DynamicConjecture: return "Dynamic(Conjecture)";
    case Strategy::Kind::Thens:
    case Strategy::Kind::Ors: {
      std::string out = s.kind == Strategy::Kind::Thens ? "Thens [" : "Ors [";
      for (std::size_t i = 0; i < s.children.size(); ++i) {
        if (i) out += ", ";
        out += print_strategy(s.children[i]);
      }
      return out + "]";
    }
    case Strategy::Kind::Repeat:
      return "Repeat(" + print_strategy(s.children.front()) + ", " +
             std::to_string(s.max_iter) + ")";
  }
  return "";
}

std::string print_step(const ProofStep& step) {
  switch (step.kind) {
    case ProofStep::Kind::Auto: return "auto";
    case ProofStep::Kind::Simp: return "simp";
    case ProofStep::Kind::Qed: return "qed";
    case ProofStep::Kind::Cases: return "cases " + step.var;
    case ProofStep::Kind::Conjecture:
      return "conjecture \"" + print_formula(step.conjecture) + "\"";
    case ProofStep::Kind::Induct: {
      std::string out = "induct";
      for (const auto& v : step.induct.on) out += ' ' + v;
      if (!step.induct.arbitrary.empty()) {
        out += " arbitrary:";
        for (const auto& v : step.induct.arbitrary) out += ' ' + v;
      }
      if (step.induct.rule) out += " rule: " + *step.induct.rule;
      return out;
    }
  }
  return "";
}

std::string print_script(const NamedScript& script) {
  std::string out = "proof " + script.goal + "\n";
  for (const auto& s : script.script) out += print_step(s) + "\n";
  return out;
}

std::string print_sequent(const Sequent& s) {
  std::string out;
  for (const auto& h : s.hyps) {
    out += "[";
    bool first = true;
    Formula marked = h.formula;
    out += print_formula(marked);
    if (!h.schematic_vars.empty()) {
      out += " (schematic:";
      for (const auto& v : h.schematic_vars) out += ' ' + v;
      out += ")";
    }
    out += "] ";
    (void)first;
  }
  out += "|- " + print_formula(s.target);
  return out;
}

bool equal(const ProofStep& a, const ProofStep& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ProofStep::Kind::Induct: return a.induct == b.induct;
    case ProofStep::Kind::Cases: return a.var == b.var;
    case ProofStep::Kind::Conjecture: return equal(a.conjecture, b.conjecture);
    default: return true;
  }
}

bool equal(const ProofScript& a, const ProofScript& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equal(a[i], b[i])) return false;
  return true;
}

ProofStep step_auto() { return ProofStep{ProofStep::Kind::Auto, {}, "", {}}; }
ProofStep step_simp() { return ProofStep{ProofStep::Kind::Simp, {}, "", {}}; }
ProofStep step_qed() { return ProofStep{ProofStep::Kind::Qed, {}, "", {}}; }
ProofStep step_induct(InductArgs args) {
  return ProofStep{ProofStep::Kind::Induct, std::move(args), "", {}};
}
ProofStep step_cases(std::string var) {
  return ProofStep{ProofStep::Kind::Cases, {}, std::move(var), {}};
}
ProofStep step_conjecture(Formula f) {
  return ProofStep{ProofStep::Kind::Conjecture, {}, "", std::move(f)};
}

}  // namespace united
