#ifndef UNITED_SYNTAX_HPP
#define UNITED_SYNTAX_HPP

#include <stdexcept>
#include <string>
#include <string_view>

#include "united/kernel.hpp"
#include "united/psl.hpp"

namespace united {

struct SourcePos {
  int line = 1;
  int column = 1;
  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

class ParseError : public std::runtime_error {
public:
  ParseError(SourcePos pos, std::string expected, std::string found);

  SourcePos pos;
  std::string expected;
  std::string found;
};

/// Parses a theory file. The result always satisfies check_theory; any
/// violation is reported as a ParseError at the offending item.
Theory parse_theory(std::string_view text);

/// Parses a standalone formula against an existing theory's signature.
Formula parse_formula(std::string_view text, const Theory& theory);

Strategy parse_strategy(std::string_view text);

struct NamedScript {
  std::string goal;
  ProofScript script;
};

/// Proof script file: `proof <goal>` followed by one step per line.
NamedScript parse_script(std::string_view text, const Theory& theory);

std::string print_term(const TermPtr& t);
std::string print_equation(const Equation& eq);
std::string print_formula(const Formula& f);
std::string print_theory(const Theory& theory);
std::string print_strategy(const Strategy& s);
std::string print_step(const ProofStep& step);
std::string print_script(const NamedScript& script);
std::string print_sequent(const Sequent& s);  // debug/trace form

}  // namespace united

#endif
