#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>

#include "causal/stream.hpp"

namespace causal {

/// A causal function (R^n)^omega -> (R^m)^omega: output entry k may depend on
/// input entries 0..k only.
struct CausalFn {
  std::size_t in_dim = 1;
  std::size_t out_dim = 1;
  std::function<Stream(const Stream&)> apply;

  Stream operator()(const Stream& s) const { return apply(s); }
};

/// A family u_k : (R^n)^{k+1} -> R^m, one function per index k.
struct PointwiseFamily {
  std::size_t in_dim = 1;
  std::size_t out_dim = 1;
  std::function<Vec(std::uint64_t k, std::span<const Vec> word)> u;
};

/// Pointwise approximant U_k(f)(w) = f(w:pad)_k. The default pad is the zero stream.
Vec unroll(const CausalFn& f, std::uint64_t k, std::span<const Vec> w);
Vec unroll(const CausalFn& f, std::uint64_t k, std::span<const Vec> w, const Stream& pad);

/// Stringwise approximant T_k(f)(w) = f(w:pad)_{0:k}.
Word truncate(const CausalFn& f, std::uint64_t k, std::span<const Vec> w);
Word truncate(const CausalFn& f, std::uint64_t k, std::span<const Vec> w, const Stream& pad);

/// The causal function whose pointwise approximants are `fam`.
CausalFn from_pointwise(PointwiseFamily fam);

/// The pointwise approximants of f, packaged as a family.
PointwiseFamily pointwise_family(const CausalFn& f);

/// Uniform [lo, hi] entries.
Word random_word(std::size_t dim, std::size_t length, std::mt19937_64& rng, double lo = -2.0, double hi = 2.0);

struct CausalityWitness {
  std::size_t trial = 0;
  std::uint64_t agree_through = 0;  // inputs agree on 0..agree_through
  std::uint64_t output_index = 0;   // first output index that differs
  Vec lhs;
  Vec rhs;
};

struct CausalityReport {
  bool passed = true;
  std::size_t trials = 0;
  std::optional<CausalityWitness> witness;
};

/// Empirical causality test. Each trial draws inputs agreeing on a random
/// prefix 0..k (k < depth) and differing afterwards, then compares outputs on 0..k.
/// The first disagreement is returned as a witness.
CausalityReport check_causality(const CausalFn& f, std::uint64_t depth, std::size_t trials, std::uint64_t seed);

}  // namespace causal
