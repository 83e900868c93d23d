#include <doctest.h>

#include <random>

#include "causal/calculus.hpp"
#include "causal/corpus.hpp"
#include "causal/diff_fn.hpp"
#include "causal/dsl.hpp"
#include "causal/elman.hpp"
#include "support/oracles.hpp"
#include "support/random_expr.hpp"

using namespace causal;
using causal::testing::scalars;

namespace {

dsl::ParseError parse_error(const std::string& src) {
  try {
    dsl::parse(src);
  } catch (const dsl::ParseError& e) {
    return e;
  }
  FAIL("no parse error for: " << src);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("precedence") {
  const dsl::Program p = dsl::parse("[1] + X * s");
  CHECK(p.inputs == std::vector<std::string>{"s"});
  CHECK(p.expr == build::sum(CausalExpr::constant(1.0), build::cauchy(CausalExpr::x(), CausalExpr::input(1))));

  const dsl::Program q = dsl::parse("a . b * c + a");
  const CausalExpr a = CausalExpr::proj(0, 1, 3), b = CausalExpr::proj(1, 2, 3), c = CausalExpr::proj(2, 3, 3);
  CHECK(q.inputs == std::vector<std::string>{"a", "b", "c"});
  CHECK(q.expr == build::sum(build::cauchy(build::hadamard(a, b), c), a));
}

TEST_CASE("basic forms") {
  CHECK(dsl::parse("inv(s)").expr == build::inverse(CausalExpr::input(1)));
  CHECK(dsl::parse("2 s").expr == build::scale(2.0, CausalExpr::input(1)));
  CHECK(dsl::parse("-0.5 s").expr == build::scale(-0.5, CausalExpr::input(1)));
  CHECK(dsl::parse("s - t").expr ==
        build::sum(CausalExpr::proj(0, 1, 2), build::scale(-1.0, CausalExpr::proj(1, 2, 2))));
  CHECK(dsl::parse("((s))").expr == CausalExpr::input(1));
  CHECK(dsl::parse("[2.5]").expr == CausalExpr::constant(2.5));
  CHECK(dsl::parse("[2.5]").expr.in_dim() == 1);
  CHECK(dsl::parse("rec(mul2, 1)(s)").expr == build::rec(prim::mul2(), Vec{1}, CausalExpr::input(1)));
  CHECK(dsl::parse("map(mul2)((s, t))").expr ==
        build::map(prim::mul2(), build::pair(CausalExpr::proj(0, 1, 2), CausalExpr::proj(1, 2, 2))));
}

TEST_CASE("elman chain") {
  const dsl::Program p = dsl::parse("map(elman2(1, -0.1))(rec(elman1(1, 1, 0.1), 0)(s))");
  const Stream in = random_stream(1, 5);
  CHECK(slice(eval_expr(p.expr, in), 0, 16) == slice(eval_expr(elman_expr(ElmanParams{}), in), 0, 16));
  const dsl::Program q = dsl::parse("map(sigmoid)(rec(elman1(1,1,0.1), 0)(s))");
  CHECK(q.expr == build::map(prim::sigmoid(), build::rec(prim::elman_cell(1, 1, 0.1, prim::sigmoid()), Vec{0},
                                                          CausalExpr::input(1))));
  CHECK(dsl::parse(dsl::print(q.expr, q.inputs)).expr == q.expr);
}

TEST_CASE("whitespace and locations") {
  const dsl::Program p = dsl::parse("s +\n  inv(t)");
  REQUIRE(p.locations.size() == 1);
  const dsl::Location loc = p.locations.begin()->second;
  CHECK(loc.line == 2);
  CHECK(loc.column == 3);
}

TEST_CASE("parse errors") {
  {
    const dsl::ParseError e = parse_error("s +\n  )");
    CHECK(e.kind() == dsl::ParseError::Kind::kSyntax);
    CHECK(e.where().line == 2);
    CHECK(e.where().column == 3);
    CHECK(std::string(e.what()).rfind("line 2, column 3: ", 0) == 0);
  }
  CHECK(parse_error("s *").kind() == dsl::ParseError::Kind::kSyntax);
  CHECK(parse_error("rec(mul2, 1)(s").kind() == dsl::ParseError::Kind::kSyntax);
  CHECK(parse_error("s $ t").kind() == dsl::ParseError::Kind::kSyntax);
  CHECK(parse_error("").kind() == dsl::ParseError::Kind::kSyntax);
  {
    const dsl::ParseError e = parse_error("map(softplus)(s)");
    CHECK(e.kind() == dsl::ParseError::Kind::kUnknownPrimitive);
    CHECK(e.where().column == 5);
  }
  CHECK(parse_error("map(affine(1))(s)").kind() == dsl::ParseError::Kind::kArity);
  CHECK(parse_error("map(sigmoid(2))(s)").kind() == dsl::ParseError::Kind::kArity);
  CHECK(parse_error("map(mul2)(s)").kind() == dsl::ParseError::Kind::kDimension);
}

TEST_CASE("printing") {
  const std::vector<std::string> names{"s", "t"};
  const CausalExpr s = CausalExpr::proj(0, 1, 2), t = CausalExpr::proj(1, 2, 2);
  CHECK(dsl::print(build::sum(s, build::scale(-2.0, t)), names) == "s + -2 t");
  CHECK(dsl::print(build::sum(s, build::scale(-1.0, build::scale(2.0, t))), names) == "s - 2 t");
  CHECK(dsl::print(build::cauchy(s, build::sum(s, t)), names) == "s * (s + t)");
  CHECK(dsl::print(build::inverse(s), names) == "inv(s)");
  CHECK_THROWS_AS(dsl::print(CausalExpr::parallel(CausalExpr::input(1), CausalExpr::input(1)), names),
                  std::invalid_argument);
}

TEST_CASE("print/parse round trip on random trees") {
  std::mt19937_64 rng(2024);
  const std::vector<std::string> names{"a", "b", "c"};
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + i % 3;
    const CausalExpr e = testing::random_dsl_expr(rng, n, static_cast<int>(n) + i % 3);
    const std::vector<std::string> inputs(names.begin(), names.begin() + static_cast<long>(n));
    const std::string text = dsl::print(e, inputs);
    CAPTURE(text);
    const dsl::Program p = dsl::parse(text);
    CHECK(p.inputs == inputs);
    CHECK(p.expr == e);
    CHECK(dsl::print(p.expr, p.inputs) == text);
  }
}

TEST_CASE("stream specs") {
  CHECK(scalars(dsl::parse_stream_spec("(1, 2, 3; 0)").to_stream(), 4) == std::vector<double>{1, 2, 3, 0, 0});
  CHECK(scalars(dsl::parse_stream_spec("(1, 2)").to_stream(), 3) == std::vector<double>{1, 2, 0, 0});
  CHECK(scalars(dsl::parse_stream_spec("(1; 1)").to_stream(), 3) == std::vector<double>{1, 1, 1, 1});
  CHECK(scalars(dsl::parse_stream_spec("( ; 4)").to_stream(), 1) == std::vector<double>{4, 4});
  CHECK(scalars(dsl::parse_stream_spec("zeros").to_stream(), 2) == std::vector<double>{0, 0, 0});
  CHECK(scalars(dsl::parse_stream_spec("ones").to_stream(), 2) == std::vector<double>{1, 1, 1});
  CHECK(scalars(dsl::parse_stream_spec("X").to_stream(), 2) == std::vector<double>{0, 1, 0});
  CHECK(scalars(dsl::parse_stream_spec("const 2.5").to_stream(), 2) == std::vector<double>{2.5, 0, 0});
  CHECK(scalars(dsl::parse_stream_spec("const(-1)").to_stream(), 1) == std::vector<double>{-1, 0});

  for (const char* bad : {"", "(1, 2", "(1;)", "(a)", "twos", "const", "(1; 2; 3)"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(dsl::parse_stream_spec(bad), std::invalid_argument);
  }

  const auto [name, spec] = dsl::parse_binding("s=(1,2,3,4;0)");
  CHECK(name == "s");
  CHECK(spec.prefix == std::vector<double>{1, 2, 3, 4});
  CHECK(spec.tail == 0.0);
  CHECK_THROWS_AS(dsl::parse_binding("(1,2)"), std::invalid_argument);
  CHECK_THROWS_AS(dsl::parse_binding("=ones"), std::invalid_argument);
}

TEST_CASE("number formatting round-trips") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, double(i % 20) - 10);
    CHECK(std::stod(dsl::format_number(x)) == x);
  }
  CHECK(dsl::format_number(0.1) == "0.1");
  CHECK(dsl::format_number(-2.0) == "-2");
}
