#include "causal/calculus.hpp"

#include <cmath>
#include <string>

#include "causal/errors.hpp"

namespace causal {

namespace {

void require_scalar(const Stream& s, const char* op) {
  if (s.dim() != 1) {
    throw DimensionError(std::string(op) + ": expected a scalar stream, got dimension " + std::to_string(s.dim()));
  }
}

}  // namespace

Stream const_stream(double r) {
  return Stream::from_index(1, [r](std::uint64_t k) { return Vec{k == 0 ? r : 0.0}; });
}

Stream x_stream() {
  return Stream::from_index(1, [](std::uint64_t k) { return Vec{k == 1 ? 1.0 : 0.0}; });
}

Stream ones_stream() { return repeat(Vec{1.0}); }

Stream cauchy(const Stream& a, const Stream& b) {
  require_scalar(a, "cauchy");
  require_scalar(b, "cauchy");
  return Stream::from_index(1, [a, b](std::uint64_t k) {
    double acc = 0.0;
    std::uint64_t i = 0;
    std::uint64_t j = k;
    for (; i < j; ++i, --j) {
      acc += a.scalar(i) * b.scalar(j) + a.scalar(j) * b.scalar(i);
    }
    if (i == j) {
      acc += a.scalar(i) * b.scalar(i);
    }
    return Vec{acc};
  });
}

Stream hadamard(const Stream& a, const Stream& b) {
  require_scalar(a, "hadamard");
  require_scalar(b, "hadamard");
  return Stream::from_index(1, [a, b](std::uint64_t k) { return Vec{a.scalar(k) * b.scalar(k)}; });
}

Stream inverse(const Stream& s) {
  require_scalar(s, "inverse");
  const double s0 = s.scalar(0);
  if (!(std::abs(s0) > kInverseHeadEpsilon)) {
    throw DomainError("inverse: head " + std::to_string(s0) + " is zero (|s_0| <= 1e-12)");
  }
  return Stream(1, [s, s0](std::uint64_t k, std::span<const Vec> prev) {
    if (k == 0) {
      return Vec{1.0 / s0};
    }
    double acc = 0.0;
    for (std::uint64_t i = 0; i < k; ++i) {
      acc += s.scalar(k - i) * prev[i][0];
    }
    return Vec{-(1.0 / s0) * acc};
  });
}

Stream quotient(const Stream& a, const Stream& b) { return cauchy(a, inverse(b)); }

CausalFn sum_fn(std::size_t n) {
  return CausalFn{2 * n, n, [n](const Stream& s) {
                    auto [a, b] = unzip(s, n);
                    return pointwise_add(a, b);
                  }};
}

CausalFn cauchy_fn() {
  return CausalFn{2, 1, [](const Stream& s) {
                    auto [a, b] = unzip(s, 1);
                    return cauchy(a, b);
                  }};
}

CausalFn hadamard_fn() {
  return CausalFn{2, 1, [](const Stream& s) {
                    auto [a, b] = unzip(s, 1);
                    return hadamard(a, b);
                  }};
}

CausalFn inverse_fn() {
  return CausalFn{1, 1, [](const Stream& s) { return inverse(s); }};
}

}  // namespace causal
