#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causal/stream.hpp"

namespace causal {

/// A differentiable map g: R^n -> R^m with its Jacobian-vector product
/// jvp(x, dx) = Jg(x) dx.
///
/// Every call through eval()/jvp() is visible to count_prim_evals. Calls made
/// from inside another primitive's eval/jvp are not counted, so composite
/// primitives count as one call.
class DiffFn {
 public:
  using EvalFn = std::function<Vec(std::span<const double> x)>;
  using JvpFn = std::function<Vec(std::span<const double> x, std::span<const double> dx)>;
  /// True when x lies within `tol` of a point where the map is not differentiable.
  using KinkFn = std::function<bool(std::span<const double> x, double tol)>;

  DiffFn(std::string name, std::vector<double> params, std::size_t in_dim, std::size_t out_dim, EvalFn eval,
         JvpFn jvp, KinkFn kink = {});

  Vec eval(std::span<const double> x) const;
  Vec jvp(std::span<const double> x, std::span<const double> dx) const;

  const std::string& name() const noexcept { return name_; }
  const std::vector<double>& params() const noexcept { return params_; }
  std::size_t in_dim() const noexcept { return in_dim_; }
  std::size_t out_dim() const noexcept { return out_dim_; }

  bool smooth() const noexcept { return !static_cast<bool>(kink_); }
  bool near_kink(std::span<const double> x, double tol) const { return kink_ && kink_(x, tol); }

  /// Scalar derivative for R -> R maps: jvp(x, 1).
  double derivative(double x) const;

  /// Same name and parameters.
  bool same_as(const DiffFn& other) const noexcept { return name_ == other.name_ && params_ == other.params_; }

 private:
  std::string name_;
  std::vector<double> params_;
  std::size_t in_dim_;
  std::size_t out_dim_;
  EvalFn eval_;
  JvpFn jvp_;
  KinkFn kink_;
};

class UnknownPrimitive : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ArityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace prim {

DiffFn identity();
DiffFn affine(double a, double b);
DiffFn sigmoid();
DiffFn tanh();
DiffFn exp();
DiffFn square();
/// max(0, x); derivative 0 is used at the kink.
DiffFn relu();
/// (x, y) -> x * y.
DiffFn mul2();
/// (x, y) -> x + y.
DiffFn add2();
/// (x, y) -> act(a x + b y + c). The hidden-state cell of an Elman network.
DiffFn elman_cell(double a, double b, double c, const DiffFn& act);
/// x -> act(d x + e). The output cell of an Elman network.
DiffFn elman_output(double d, double e, const DiffFn& act);

/// Looks up a named R -> R activation: id, sigmoid, tanh, exp, square, relu.
DiffFn activation(std::string_view name);

/// Builds a primitive from its registry name and arguments, e.g.
/// ("affine", {2, 1}) or ("elman1_tanh", {1, 1, 0.1}).
/// Throws UnknownPrimitive or ArityError.
DiffFn lookup(std::string_view name, std::span<const double> args);

/// Registry names that take no arguments or a fixed number of them, with arity.
std::vector<std::pair<std::string, std::size_t>> registry();

}  // namespace prim

/// Counts of primitive invocations during one run.
struct PrimCounts {
  std::uint64_t eval = 0;
  std::uint64_t jvp = 0;
};

/// RAII scope that counts primitive calls made by the current thread. Nested
/// scopes add their totals to the enclosing scope on exit.
class PrimCountScope {
 public:
  PrimCountScope();
  ~PrimCountScope();
  PrimCountScope(const PrimCountScope&) = delete;
  PrimCountScope& operator=(const PrimCountScope&) = delete;

  const PrimCounts& counts() const noexcept { return counts_; }

 private:
  PrimCounts counts_;
  PrimCounts* previous_;
};

/// Runs `run` and returns the primitive calls it made on this thread.
template <class F>
PrimCounts count_prim_evals(F&& run) {
  PrimCountScope scope;
  std::forward<F>(run)();
  return scope.counts();
}

/// RAII scope recording the earliest stream index at which a non-smooth
/// primitive was evaluated within `tol` of its kink (current thread only).
class KinkScope {
 public:
  explicit KinkScope(double tol = 1e-3);
  ~KinkScope();
  KinkScope(const KinkScope&) = delete;
  KinkScope& operator=(const KinkScope&) = delete;

  std::optional<std::uint64_t> first_kink() const noexcept { return first_; }

  /// Called by evaluators with the stream index of the entry being computed.
  static void note(const DiffFn& f, std::span<const double> x, std::uint64_t index);

 private:
  double tol_;
  std::optional<std::uint64_t> first_;
  KinkScope* previous_;
};

}  // namespace causal
