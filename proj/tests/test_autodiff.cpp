#include <doctest.h>

#include <random>

#include "causal/autodiff.hpp"
#include "causal/calculus.hpp"
#include "causal/corpus.hpp"
#include "causal/diff_fn.hpp"
#include "causal/errors.hpp"
#include "causal/jacobian.hpp"
#include "support/oracles.hpp"
#include "support/random_expr.hpp"
#include "support/rule_checks.hpp"

using namespace causal;
using causal::testing::max_abs_diff;
using causal::testing::prefix;
using causal::testing::scalars;

namespace {

Stream naturals() {
  return Stream::from_index(1, [](std::uint64_t k) { return Vec{double(k + 1)}; });
}

}  // namespace

TEST_CASE("derivatives of the basic operations") {
  const Stream s = random_stream(1, 1), t = random_stream(1, 2);
  const Stream ds = random_stream(1, 3), dt = random_stream(1, 4);
  const Stream pt = zip(s, t), dpt = zip(ds, dt);

  CHECK(slice(jvp_expr(CausalExpr::pointwise_sum(), pt, dpt), 0, 16) == slice(pointwise_add(ds, dt), 0, 16));
  CHECK(slice(jvp_expr(CausalExpr::cauchy(), pt, dpt), 0, 16) ==
        slice(pointwise_add(cauchy(ds, t), cauchy(s, dt)), 0, 16));
  CHECK(slice(jvp_expr(CausalExpr::hadamard(), pt, dpt), 0, 16) ==
        slice(pointwise_add(hadamard(ds, t), hadamard(s, dt)), 0, 16));
  CHECK(slice(jvp_expr(CausalExpr::constant(3.0), s, ds), 0, 16) == slice(zero_stream(1), 0, 16));
  CHECK(slice(jvp_expr(CausalExpr::x(), s, ds), 0, 16) == slice(zero_stream(1), 0, 16));
  CHECK(slice(jvp_expr(CausalExpr::scalar_mul(2.5), s, ds), 0, 16) == slice(scalar_mul(2.5, ds), 0, 16));
  CHECK(slice(jvp_expr(CausalExpr::proj(1, 2, 2), pt, dpt), 0, 16) == slice(dt, 0, 16));

  const auto sq = scalars(jvp_expr(CausalExpr::map(prim::square()), s, ds), 16);
  for (std::uint64_t k = 0; k <= 16; ++k) CHECK(sq[k] == doctest::Approx(2 * s.scalar(k) * ds.scalar(k)));
}

TEST_CASE("running product tangent") {
  const Stream s = eventually({Vec{1}, Vec{2}, Vec{3}, Vec{4}}, Vec{0});
  const Stream ds = eventually({Vec{1}, Vec{0}, Vec{0}, Vec{0}}, Vec{0});
  const TangentPair r = rec_jvp(prim::mul2(), Vec{1}, s, ds);
  CHECK(scalars(r.primal, 3) == std::vector<double>{1, 2, 6, 24});
  CHECK(scalars(r.tangent, 3) == std::vector<double>{1, 2, 6, 24});

  // Against the explicit sum over differentiated factors.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Stream a = random_stream(1, 2 * seed), da = random_stream(1, 2 * seed + 1);
    const auto got = scalars(rec_jvp(prim::mul2(), Vec{1}, a, da).tangent, 12);
    const auto expected = testing::product_tangent(scalars(a, 12), scalars(da, 12));
    for (std::size_t k = 0; k < got.size(); ++k) CHECK(got[k] == doctest::Approx(expected[k]).epsilon(1e-12));
  }
}

TEST_CASE("recurrence rule agrees with finite differences") {
  std::mt19937_64 rng(5);
  const std::vector<std::pair<DiffFn, Vec>> cells{{prim::mul2(), {1.0}},
                                                  {prim::add2(), {0.0}},
                                                  {prim::elman_cell(1, 1, 0.1, prim::sigmoid()), {0.0}},
                                                  {prim::elman_cell(0.4, -0.9, 0.3, prim::tanh()), {0.5}}};
  for (const auto& [cell, init] : cells) {
    CAPTURE(cell.name());
    const CausalExpr e = CausalExpr::rec(cell, init);
    const Stream s = random_stream(1, rng()), ds = random_stream(1, rng());
    const TriJacobian fd = fd_jacobian(e, s, 8);
    const Word expected = apply_tri(fd, prefix(ds, 8));
    const Word got = prefix(rec_jvp(cell, init, s, ds).tangent, 8);
    for (std::size_t k = 0; k <= 8; ++k) CHECK(std::abs(got[k][0] - expected[k][0]) <= 1e-5);
  }
}

TEST_CASE("jvp_with_primal returns the evaluation") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const CausalExpr e = testing::random_scalar_expr(rng, 2, 3);
    const Stream s = random_stream(2, rng()), ds = random_stream(2, rng());
    const TangentPair tp = jvp_with_primal(e, s, ds);
    CHECK(slice(tp.primal, 0, 8) == slice(eval_expr(e, s), 0, 8));
    CHECK(slice(tp.tangent, 0, 8) == slice(jvp_expr(e, s, ds), 0, 8));
  }
}

TEST_CASE("tangent linearity") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    const CausalExpr e = testing::random_scalar_expr(rng, 2, 3);
    const Stream s = random_stream(2, rng());
    const Stream d1 = random_stream(2, rng()), d2 = random_stream(2, rng());
    const double a = 0.75, b = -1.25;
    const Stream lhs = jvp_expr(e, s, pointwise_add(scalar_mul(a, d1), scalar_mul(b, d2)));
    const Stream rhs = pointwise_add(scalar_mul(a, jvp_expr(e, s, d1)), scalar_mul(b, jvp_expr(e, s, d2)));
    CHECK(max_abs_diff(prefix(lhs, 8), prefix(rhs, 8)) <= 1e-10);
  }
}

TEST_CASE("rule identities") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    CHECK(testing::chain_rule_error(rng, 8) <= 1e-10);
    CHECK(testing::parallel_rule_error(rng, 16) <= 1e-12);
    CHECK(testing::sum_rule_error(rng, 16) <= 1e-12);
    CHECK(testing::product_rule_error(rng, 16, false) <= 1e-12);
    CHECK(testing::product_rule_error(rng, 16, true) <= 1e-12);
    CHECK(testing::reciprocal_rule_error(rng, 16) <= 1e-9);
    CHECK(testing::quotient_rule_error(rng, 16) <= 1e-9);
  }
}

TEST_CASE("tangents are causal") {
  std::uint64_t seen = 0;
  const Stream s = Stream::from_index(1, [&](std::uint64_t k) {
    seen = std::max(seen, k);
    return Vec{0.5 + 0.1 * double(k)};
  });
  const CausalExpr e = build::quotient(CausalExpr::rec(prim::mul2(), Vec{1}), build::sum(CausalExpr::constant(1), CausalExpr::input(1)));
  jvp_expr(e, s, ones_stream()).at(6);
  CHECK(seen == 6);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(jvp_expr(CausalExpr::input(1), ones_stream(), zip(ones_stream(), ones_stream())), DimensionError);
  CHECK_THROWS_AS(jvp_expr(CausalExpr::cauchy(), ones_stream(), ones_stream()), DimensionError);
  CHECK_THROWS_AS(jvp_expr(CausalExpr::inverse(), x_stream(), ones_stream()).at(0), DomainError);
  CHECK_THROWS_AS(rec_jvp(prim::mul2(), Vec{1}, zip(ones_stream(), ones_stream()), zip(ones_stream(), ones_stream())),
                  DimensionError);
}

TEST_CASE("primitive call counts") {
  for (std::uint64_t k : {10u, 100u}) {
    const Stream s = random_stream(1, k), ds = random_stream(1, k + 1);
    const PrimCounts rec = count_prim_evals([&] {
      const TangentPair r = rec_jvp(prim::mul2(), Vec{1}, s, ds);
      r.tangent.at(k);
      r.primal.at(k);
    });
    CHECK(rec.eval == k + 1);
    CHECK(rec.jvp == k + 1);

    const PrimCounts map = count_prim_evals([&] { eval_expr(CausalExpr::map(prim::sigmoid()), s).at(k); });
    CHECK(map.eval == k + 1);
    CHECK(map.jvp == 0);

    const PrimCounts jac =
        count_prim_evals([&] { truncated_jacobian(CausalExpr::rec(prim::mul2(), Vec{1}), s, k); });
    CHECK(jac.jvp == (k + 1) * (k + 1));
  }
  const Stream nat = naturals();
  const PrimCounts once = count_prim_evals([&] {
    const Stream r = eval_expr(CausalExpr::rec(prim::mul2(), Vec{1}), nat);
    r.at(20);
    r.at(5);
    r.at(20);
  });
  CHECK(once.eval == 21);
}
