#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "causal/stream.hpp"

// Straightforward reference computations, written without the library's
// stream machinery so they can be used to check it.
namespace causal::testing {

/// Entries 0..k of s.
Word prefix(const Stream& s, std::uint64_t k);

/// Component 0 of entries 0..k.
std::vector<double> scalars(const Stream& s, std::uint64_t k);

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b);
double max_abs_diff(const Word& a, const Word& b);

/// Convolution c_n = sum_{i<=n} a_i b_{n-i}, n = 0..k, left to right.
std::vector<double> naive_cauchy(const std::vector<double>& a, const std::vector<double>& b);

/// Power-series reciprocal of a, by solving the lower-triangular Toeplitz
/// system T(a) x = e_0 with a dense solver.
std::vector<double> toeplitz_inverse(const std::vector<double>& a);

/// d/dt prod_{j<=k} (s_j + t ds_j) at t = 0, for k = 0..n-1, as an explicit
/// sum over which factor is differentiated.
std::vector<double> product_tangent(const std::vector<double>& s, const std::vector<double>& ds);

/// Plain loop Elman network with sigmoid activations.
struct ElmanRef {
  double alpha, beta, gamma, delta, epsilon;
  std::vector<double> run(const std::vector<double>& input) const;
};

/// Central difference of a vector-valued function of one variable.
std::vector<double> central_difference(const std::function<std::vector<double>(double)>& f, double x, double h);

}  // namespace causal::testing
