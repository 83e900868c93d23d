#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "causal/expr.hpp"
#include "causal/stream.hpp"

namespace causal::dsl {

// Surface syntax for scalar causal stream programs:
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '.') factor)*        '*' Cauchy, '.' Hadamard
//   factor := 'inv' '(' expr ')'
//           | 'map' '(' prim ')' '(' expr ')'
//           | 'rec' '(' prim ',' init ')' '(' expr ')'
//           | '[' number ']' | 'X' | ident
//           | number factor                          scalar multiple
//           | '(' expr ')' | '(' expr ',' expr ')'   grouping / pairing
//   prim   := ident ('(' number (',' number)* ')')?
//   init   := number | '(' number (',' number)* ')'
//   number := '-'? digits ('.' digits)? (('e' | 'E') ('+' | '-')? digits)?
//
// Each distinct identifier is a scalar input stream; inputs are numbered by
// first appearance and zipped into one input of that dimension (dimension 1
// when the program has no inputs). a - b means a + (-1) b.

struct Location {
  std::size_t line = 1;
  std::size_t column = 1;
};

class ParseError : public std::runtime_error {
 public:
  enum class Kind { kSyntax, kUnknownPrimitive, kArity, kDimension };

  ParseError(Kind kind, const std::string& message, Location where);

  Kind kind() const noexcept { return kind_; }
  Location where() const noexcept { return where_; }

 private:
  Kind kind_;
  Location where_;
};

struct Program {
  std::string source;
  CausalExpr expr;
  std::vector<std::string> inputs;
  /// Source location of selected nodes (Inverse leaves), keyed by CausalExpr::id().
  std::map<const void*, Location> locations;
};

Program parse(std::string_view source);

/// Renders an expression built from the DSL's forms back to source text, using
/// `inputs` to name input components. parse(print(e, inputs)).expr == e for
/// every expression parse can produce. Throws std::invalid_argument for IR
/// shapes the DSL cannot express (e.g. Parallel).
std::string print(const CausalExpr& e, std::span<const std::string> inputs);

/// A finitely described scalar stream: `prefix` followed by `tail` forever.
///   "(1, 2, 3; 0)"  prefix then constant tail
///   "(1, 2, 3)"     implicit zero tail
///   zeros | ones | X | const r
struct StreamSpec {
  std::vector<double> prefix;
  double tail = 0.0;

  Stream to_stream() const;
};

/// Throws std::invalid_argument on malformed specs.
StreamSpec parse_stream_spec(std::string_view text);

/// Splits "name=spec".
std::pair<std::string, StreamSpec> parse_binding(std::string_view text);

/// Formats a double with the shortest representation that round-trips.
std::string format_number(double x);

}  // namespace causal::dsl
