#pragma once

#include "causal/approximants.hpp"
#include "causal/stream.hpp"

namespace causal {

/// Threshold below which a stream's head counts as zero for inversion.
inline constexpr double kInverseHeadEpsilon = 1e-12;

// Stream calculus over scalar streams (dim 1). Every operation here rejects
// streams of other dimensions with DimensionError.

/// [r] = (r, 0, 0, ...).
Stream const_stream(double r);

/// X = (0, 1, 0, 0, ...).
Stream x_stream();

/// (1, 1, 1, ...), the unit of the Hadamard product.
Stream ones_stream();

/// Convolution: entry k is sum_{i<=k} a_i b_{k-i}. Terms i and k-i are paired
/// before summation, so cauchy(a, b) and cauchy(b, a) are bit-identical.
Stream cauchy(const Stream& a, const Stream& b);

/// Entrywise product.
Stream hadamard(const Stream& a, const Stream& b);

/// Multiplicative inverse under the Cauchy product. Forces the head of `s`
/// and throws DomainError when |s_0| <= kInverseHeadEpsilon. Entry k reads
/// the memoized entries 0..k-1 of the result.
Stream inverse(const Stream& s);

/// cauchy(a, inverse(b)).
Stream quotient(const Stream& a, const Stream& b);

// The same operations as causal functions on zipped inputs.

/// (R^n x R^n)^omega -> (R^n)^omega, pointwise sum of the two halves.
CausalFn sum_fn(std::size_t n = 1);
CausalFn cauchy_fn();
CausalFn hadamard_fn();
CausalFn inverse_fn();

}  // namespace causal
