#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "causal/expr.hpp"
#include "causal/stream.hpp"

namespace causal {

/// Depth-k truncation of the block-lower-triangular matrix of a linear causal
/// map (R^n)^omega -> (R^m)^omega. Block (i, j) is the m x n matrix relating
/// input entry j to output entry i; blocks with j > i are structurally zero.
/// Block row i, read left to right, is the Jacobian of the approximant U_i.
class TriJacobian {
 public:
  TriJacobian(std::uint64_t depth, std::size_t out_dim, std::size_t in_dim);

  static TriJacobian identity(std::uint64_t depth, std::size_t n);

  std::uint64_t depth() const noexcept { return depth_; }
  std::size_t out_dim() const noexcept { return out_dim_; }
  std::size_t in_dim() const noexcept { return in_dim_; }

  auto block(std::uint64_t i, std::uint64_t j) {
    return dense_.block(static_cast<Eigen::Index>(i * out_dim_), static_cast<Eigen::Index>(j * in_dim_),
                        static_cast<Eigen::Index>(out_dim_), static_cast<Eigen::Index>(in_dim_));
  }
  auto block(std::uint64_t i, std::uint64_t j) const {
    return dense_.block(static_cast<Eigen::Index>(i * out_dim_), static_cast<Eigen::Index>(j * in_dim_),
                        static_cast<Eigen::Index>(out_dim_), static_cast<Eigen::Index>(in_dim_));
  }

  /// Full (m(k+1)) x (n(k+1)) matrix.
  const Eigen::MatrixXd& dense() const noexcept { return dense_; }
  Eigen::MatrixXd& dense() noexcept { return dense_; }

  /// Largest magnitude among blocks above the diagonal.
  double max_above_diagonal() const;

  /// Composition: (g * f) is the Jacobian of g o f when g is taken at f's output.
  friend TriJacobian operator*(const TriJacobian& g, const TriJacobian& f);

 private:
  std::uint64_t depth_;
  std::size_t out_dim_;
  std::size_t in_dim_;
  Eigen::MatrixXd dense_;
};

/// The stream equal to the standard basis vector e_c at index j and zero elsewhere.
Stream basis_stream(std::size_t dim, std::uint64_t j, std::size_t c);

/// D e(s) truncated to depth k, one forward tangent pass per input
/// coordinate (n(k+1) passes). Throws std::logic_error if a tangent pass
/// produces a nonzero entry above the diagonal.
TriJacobian truncated_jacobian(const CausalExpr& e, const Stream& s, std::uint64_t depth);

/// Central-difference Jacobian of the truncation of e at s with step h.
/// Domain errors during a perturbation are rethrown naming the perturbation.
TriJacobian fd_jacobian(const CausalExpr& e, const Stream& s, std::uint64_t depth, double h = 1e-6);

/// Block-lower-triangular matrix-vector product. `v` must have depth+1
/// entries of dimension in_dim.
Word apply_tri(const TriJacobian& j, std::span<const Vec> v);

struct JacobianComparison {
  bool within = true;
  double max_abs_err = 0.0;
  // Worst entry by tolerance ratio |a - b| / max(abs_tol, rel_tol * max(|a|, |b|)).
  Eigen::Index worst_row = 0;
  Eigen::Index worst_col = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  std::size_t compared = 0;
  std::size_t skipped = 0;
};

/// Entrywise comparison with tolerance max(abs_tol, rel_tol * max(|a|, |b|)).
/// Block rows at or after `skip_from_row` are ignored (used for kinks).
JacobianComparison compare_jacobians(const TriJacobian& a, const TriJacobian& b, double abs_tol, double rel_tol,
                                     std::uint64_t skip_from_row = UINT64_MAX);

}  // namespace causal
