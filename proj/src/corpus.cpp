#include "causal/corpus.hpp"

#include <memory>
#include <random>

#include "causal/dsl.hpp"

namespace causal {

std::vector<CorpusEntry> builtin_corpus() {
  const std::vector<std::pair<std::string, std::string>> sources = {
      {"sum", "s + t"},
      {"difference", "s - 2 t"},
      {"cauchy", "s * t"},
      {"hadamard", "s . t"},
      {"shift", "[1] + X * s"},
      {"x_mask", "X . s"},
      {"inverse", "inv([1] + 0.25 s)"},
      {"quotient", "s * inv([2] + 0.5 t)"},
      {"running_product", "rec(mul2, 1)(s)"},
      {"elman", "map(elman2(1, -0.1))(rec(elman1(1, 1, 0.1), 0)(s))"},
      {"tanh_cell", "rec(elman1_tanh(0.5, 0.8, 0), 0)(s * s)"},
      {"map_exp", "map(exp)(0.5 s) . t"},
      {"pair_mul", "map(mul2)((s, t))"},
      {"relu", "map(relu)(s)"},
  };
  std::vector<CorpusEntry> out;
  for (const auto& [name, src] : sources) {
    out.push_back({name, src, dsl::parse(src).expr});
  }
  out.push_back({"identity2", "", CausalExpr::input(2)});
  out.push_back({"parallel", "",
                 CausalExpr::parallel(CausalExpr::map(prim::sigmoid()), CausalExpr::rec(prim::add2(), Vec{0.0}))});
  out.push_back({"parallel_cauchy", "",
                 CausalExpr::compose(CausalExpr::cauchy(),
                                     CausalExpr::parallel(CausalExpr::input(1), CausalExpr::map(prim::square())))});
  return out;
}

Stream random_stream(std::size_t dim, std::uint64_t seed, double lo, double hi) {
  // Entries are generated in index order, so one engine gives reproducible values.
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return Stream(dim, [rng, dim, lo, hi](std::uint64_t, std::span<const Vec>) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Vec v(dim);
    for (double& x : v) {
      x = dist(*rng);
    }
    return v;
  });
}

}  // namespace causal
