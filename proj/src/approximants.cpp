#include "causal/approximants.hpp"

#include <stdexcept>
#include <string>

#include "causal/errors.hpp"

namespace causal {

namespace {

void check_word(const CausalFn& f, std::uint64_t k, std::span<const Vec> w) {
  if (w.size() != k + 1) {
    throw std::invalid_argument("approximant at index " + std::to_string(k) + " needs a word of length " +
                                std::to_string(k + 1) + ", got " + std::to_string(w.size()));
  }
  for (const Vec& v : w) {
    if (v.size() != f.in_dim) {
      throw DimensionError("approximant word entry has dimension " + std::to_string(v.size()) + ", expected " +
                           std::to_string(f.in_dim));
    }
  }
}

}  // namespace

Vec unroll(const CausalFn& f, std::uint64_t k, std::span<const Vec> w) {
  return unroll(f, k, w, zero_stream(f.in_dim));
}

Vec unroll(const CausalFn& f, std::uint64_t k, std::span<const Vec> w, const Stream& pad) {
  check_word(f, k, w);
  return f(prepend(Word(w.begin(), w.end()), pad)).at(k);
}

Word truncate(const CausalFn& f, std::uint64_t k, std::span<const Vec> w) {
  return truncate(f, k, w, zero_stream(f.in_dim));
}

Word truncate(const CausalFn& f, std::uint64_t k, std::span<const Vec> w, const Stream& pad) {
  check_word(f, k, w);
  return slice(f(prepend(Word(w.begin(), w.end()), pad)), 0, k);
}

CausalFn from_pointwise(PointwiseFamily fam) {
  const std::size_t out_dim = fam.out_dim;
  auto u = std::move(fam.u);
  return CausalFn{fam.in_dim, out_dim, [u, out_dim](const Stream& s) {
                    return Stream::from_index(out_dim, [u, s](std::uint64_t k) {
                      const Word w = slice(s, 0, k);
                      return u(k, w);
                    });
                  }};
}

PointwiseFamily pointwise_family(const CausalFn& f) {
  return PointwiseFamily{f.in_dim, f.out_dim,
                         [f](std::uint64_t k, std::span<const Vec> w) { return unroll(f, k, w); }};
}

Word random_word(std::size_t dim, std::size_t length, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Word w(length, Vec(dim));
  for (Vec& v : w) {
    for (double& x : v) {
      x = dist(rng);
    }
  }
  return w;
}

CausalityReport check_causality(const CausalFn& f, std::uint64_t depth, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) {
    throw std::invalid_argument("check_causality needs at least one trial");
  }
  if (depth == 0) {
    throw std::invalid_argument("check_causality needs a positive depth");
  }
  std::mt19937_64 rng(seed);
  CausalityReport report;
  // Inputs are random up to 2*depth, zero afterwards; disagreement starts at k+1.
  const std::size_t len = 2 * depth + 1;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t k = std::uniform_int_distribution<std::uint64_t>(0, depth - 1)(rng);
    Word a = random_word(f.in_dim, len, rng);
    Word b = random_word(f.in_dim, len, rng);
    for (std::uint64_t i = 0; i <= k; ++i) {
      b[i] = a[i];
    }
    const Stream out_a = f(from_word(a, f.in_dim));
    const Stream out_b = f(from_word(b, f.in_dim));
    ++report.trials;
    for (std::uint64_t i = 0; i <= k; ++i) {
      Vec va = out_a.at(i);
      Vec vb = out_b.at(i);
      if (va != vb) {
        report.passed = false;
        report.witness = CausalityWitness{t, k, i, std::move(va), std::move(vb)};
        return report;
      }
    }
  }
  return report;
}

}  // namespace causal
