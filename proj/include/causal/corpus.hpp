#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causal/expr.hpp"
#include "causal/stream.hpp"

namespace causal {

/// A named expression used for whole-library checks. `source` holds the DSL
/// text when the expression has one, and is empty for IR-only entries.
struct CorpusEntry {
  std::string name;
  std::string source;
  CausalExpr expr;
};

/// Expressions covering every node kind at least twice. Arguments of every
/// inverse are kept at least 0.5 away from zero for inputs in [-2, 2].
std::vector<CorpusEntry> builtin_corpus();

/// Infinite stream with entries uniform on [lo, hi], reproducible from `seed`.
Stream random_stream(std::size_t dim, std::uint64_t seed, double lo = -2.0, double hi = 2.0);

}  // namespace causal
