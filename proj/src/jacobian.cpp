#include "causal/jacobian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "causal/autodiff.hpp"
#include "causal/errors.hpp"

namespace causal {

TriJacobian::TriJacobian(std::uint64_t depth, std::size_t out_dim, std::size_t in_dim)
    : depth_(depth),
      out_dim_(out_dim),
      in_dim_(in_dim),
      dense_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>((depth + 1) * out_dim),
                                   static_cast<Eigen::Index>((depth + 1) * in_dim))) {}

TriJacobian TriJacobian::identity(std::uint64_t depth, std::size_t n) {
  TriJacobian j(depth, n, n);
  j.dense_.setIdentity();
  return j;
}

double TriJacobian::max_above_diagonal() const {
  double worst = 0.0;
  for (std::uint64_t i = 0; i <= depth_; ++i) {
    for (std::uint64_t j = i + 1; j <= depth_; ++j) {
      worst = std::max(worst, block(i, j).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

TriJacobian operator*(const TriJacobian& g, const TriJacobian& f) {
  if (g.depth_ != f.depth_ || g.in_dim_ != f.out_dim_) {
    throw DimensionError("TriJacobian product: shapes do not compose");
  }
  TriJacobian out(f.depth_, g.out_dim_, f.in_dim_);
  out.dense_ = g.dense_ * f.dense_;
  return out;
}

Stream basis_stream(std::size_t dim, std::uint64_t j, std::size_t c) {
  return Stream::from_index(dim, [dim, j, c](std::uint64_t k) {
    Vec v(dim, 0.0);
    if (k == j) {
      v[c] = 1.0;
    }
    return v;
  });
}

TriJacobian truncated_jacobian(const CausalExpr& e, const Stream& s, std::uint64_t depth) {
  const std::size_t n = e.in_dim();
  const std::size_t m = e.out_dim();
  TriJacobian jac(depth, m, n);
  for (std::uint64_t j = 0; j <= depth; ++j) {
    for (std::size_t c = 0; c < n; ++c) {
      const Stream t = jvp_expr(e, s, basis_stream(n, j, c));
      for (std::uint64_t i = 0; i <= depth; ++i) {
        const Vec col = t.at(i);
        for (std::size_t r = 0; r < m; ++r) {
          if (i < j && col[r] != 0.0) {
            throw std::logic_error("truncated_jacobian: nonzero block above the diagonal at (" + std::to_string(i) +
                                   ", " + std::to_string(j) + ")");
          }
          jac.block(i, j)(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
        }
      }
    }
  }
  return jac;
}

namespace {

Stream perturbed(const Stream& s, std::uint64_t j, std::size_t c, double delta) {
  return Stream::from_index(s.dim(), [s, j, c, delta](std::uint64_t k) {
    Vec v = s.at(k);
    if (k == j) {
      v[c] += delta;
    }
    return v;
  });
}

Word eval_perturbed(const CausalExpr& e, const Stream& s, std::uint64_t depth, std::uint64_t j, std::size_t c,
                    double delta) {
  try {
    return slice(eval_expr(e, perturbed(s, j, c, delta)), 0, depth);
  } catch (const DomainError& err) {
    throw DomainError("fd_jacobian: perturbation of input entry " + std::to_string(j) + " component " +
                          std::to_string(c) + " by " + (delta > 0 ? "+" : "-") + "h left the domain: " + err.what(),
                      err.node());
  }
}

}  // namespace

TriJacobian fd_jacobian(const CausalExpr& e, const Stream& s, std::uint64_t depth, double h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("fd_jacobian: step must be positive");
  }
  const std::size_t n = e.in_dim();
  const std::size_t m = e.out_dim();
  TriJacobian jac(depth, m, n);
  for (std::uint64_t j = 0; j <= depth; ++j) {
    for (std::size_t c = 0; c < n; ++c) {
      const Word plus = eval_perturbed(e, s, depth, j, c, h);
      const Word minus = eval_perturbed(e, s, depth, j, c, -h);
      for (std::uint64_t i = 0; i <= depth; ++i) {
        for (std::size_t r = 0; r < m; ++r) {
          jac.block(i, j)(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              (plus[i][r] - minus[i][r]) / (2.0 * h);
        }
      }
    }
  }
  return jac;
}

Word apply_tri(const TriJacobian& jac, std::span<const Vec> v) {
  const std::size_t n = jac.in_dim();
  if (v.size() != jac.depth() + 1) {
    throw DimensionError("apply_tri: vector has " + std::to_string(v.size()) + " entries, expected " +
                         std::to_string(jac.depth() + 1));
  }
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size() * n));
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j].size() != n) {
      throw DimensionError("apply_tri: entry " + std::to_string(j) + " has wrong dimension");
    }
    for (std::size_t c = 0; c < n; ++c) {
      x(static_cast<Eigen::Index>(j * n + c)) = v[j][c];
    }
  }
  const std::size_t m = jac.out_dim();
  Word out(v.size(), Vec(m, 0.0));
  // Only blocks on or below the diagonal contribute.
  for (std::uint64_t i = 0; i <= jac.depth(); ++i) {
    const Eigen::Index cols = static_cast<Eigen::Index>((i + 1) * n);
    const Eigen::VectorXd row = jac.dense().block(static_cast<Eigen::Index>(i * m), 0, static_cast<Eigen::Index>(m),
                                                  cols) *
                                x.head(cols);
    for (std::size_t r = 0; r < m; ++r) {
      out[i][r] = row(static_cast<Eigen::Index>(r));
    }
  }
  return out;
}

JacobianComparison compare_jacobians(const TriJacobian& a, const TriJacobian& b, double abs_tol, double rel_tol,
                                     std::uint64_t skip_from_row) {
  if (a.depth() != b.depth() || a.in_dim() != b.in_dim() || a.out_dim() != b.out_dim()) {
    throw DimensionError("compare_jacobians: shapes differ");
  }
  JacobianComparison cmp;
  double worst_ratio = -1.0;
  const Eigen::MatrixXd& x = a.dense();
  const Eigen::MatrixXd& y = b.dense();
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const bool skip = static_cast<std::uint64_t>(r) / a.out_dim() >= skip_from_row;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (skip) {
        ++cmp.skipped;
        continue;
      }
      ++cmp.compared;
      const double err = std::abs(x(r, c) - y(r, c));
      const double tol = std::max(abs_tol, rel_tol * std::max(std::abs(x(r, c)), std::abs(y(r, c))));
      const double ratio = err / tol;
      cmp.max_abs_err = std::max(cmp.max_abs_err, err);
      if (!(err <= tol)) {
        cmp.within = false;
      }
      if (ratio > worst_ratio || std::isnan(ratio)) {
        worst_ratio = std::isnan(ratio) ? INFINITY : ratio;
        cmp.worst_row = r;
        cmp.worst_col = c;
        cmp.lhs = x(r, c);
        cmp.rhs = y(r, c);
      }
    }
  }
  return cmp;
}

}  // namespace causal
