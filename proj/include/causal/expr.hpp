#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "causal/approximants.hpp"
#include "causal/diff_fn.hpp"
#include "causal/stream.hpp"

namespace causal {

enum class NodeKind {
  kInput,         // identity on (R^n)^omega
  kConstStream,   // [r], ignoring the input
  kXStream,       // X, ignoring the input
  kPointwiseSum,  // (R^n x R^n) -> R^n
  kScalarMul,     // r * s
  kCauchy,        // (R x R) -> R convolution
  kHadamard,      // (R x R) -> R entrywise product
  kInverse,       // R -> R Cauchy inverse
  kMap,           // entrywise primitive
  kRec,           // tau_k = g(s_k, tau_{k-1}), tau_{-1} = init
  kCompose,       // g after f
  kParallel,      // f x h on split input
  kPair,          // (f, g) on duplicated input
  kProj,          // components [lo, hi)
};

std::string_view kind_name(NodeKind kind);

/// Immutable expression tree denoting a causal function
/// (R^in_dim)^omega -> (R^out_dim)^omega. Nodes are point-free combinators;
/// applicative forms (f + g, f * g, ...) are built with the helpers in
/// `causal::build`. Copies share structure.
class CausalExpr {
 public:
  static CausalExpr input(std::size_t n);
  static CausalExpr constant(double r, std::size_t in_dim = 1);
  static CausalExpr x(std::size_t in_dim = 1);
  static CausalExpr pointwise_sum(std::size_t n = 1);
  static CausalExpr scalar_mul(double r, std::size_t n = 1);
  static CausalExpr cauchy();
  static CausalExpr hadamard();
  static CausalExpr inverse();
  static CausalExpr map(DiffFn prim);
  /// prim : R^n x R^m -> R^m with m = |init|.
  static CausalExpr rec(DiffFn prim, Vec init);
  static CausalExpr compose(CausalExpr g, CausalExpr f);
  static CausalExpr parallel(CausalExpr f, CausalExpr h);
  static CausalExpr pair(CausalExpr f, CausalExpr g);
  static CausalExpr proj(std::size_t lo, std::size_t hi, std::size_t in_dim);

  NodeKind kind() const noexcept { return node_->kind; }
  std::size_t in_dim() const noexcept { return node_->in_dim; }
  std::size_t out_dim() const noexcept { return node_->out_dim; }

  /// r of ConstStream / ScalarMul.
  double scalar() const noexcept { return node_->scalar; }
  /// Primitive of Map / Rec.
  const DiffFn& prim() const { return *node_->prim; }
  /// Initial hidden value of Rec.
  const Vec& init() const noexcept { return node_->init; }
  /// Compose(g, f): child(0) = g, child(1) = f. Parallel / Pair: left, right.
  const CausalExpr& child(std::size_t i) const { return node_->children.at(i); }
  std::size_t num_children() const noexcept { return node_->children.size(); }
  std::size_t proj_lo() const noexcept { return node_->lo; }
  std::size_t proj_hi() const noexcept { return node_->hi; }

  /// Stable identity of this node, for error locations.
  const void* id() const noexcept { return node_.get(); }

  /// Structural equality; scalars compared bit-for-bit, primitives by name and parameters.
  friend bool operator==(const CausalExpr& a, const CausalExpr& b);

 private:
  struct Node {
    NodeKind kind;
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    double scalar = 0.0;
    std::optional<DiffFn> prim;
    Vec init;
    std::vector<CausalExpr> children;
    std::size_t lo = 0;
    std::size_t hi = 0;
  };

  explicit CausalExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static CausalExpr make(Node node);

  std::shared_ptr<const Node> node_;
};

/// Applicative builders over a shared input: each takes expressions with the
/// same in_dim and combines their outputs, e.g. sum(f, g) = PointwiseSum o Pair(f, g).
namespace build {

CausalExpr sum(const CausalExpr& f, const CausalExpr& g);
CausalExpr scale(double r, const CausalExpr& f);
CausalExpr cauchy(const CausalExpr& f, const CausalExpr& g);
CausalExpr hadamard(const CausalExpr& f, const CausalExpr& g);
CausalExpr inverse(const CausalExpr& f);
/// cauchy(f, inverse(g)).
CausalExpr quotient(const CausalExpr& f, const CausalExpr& g);
CausalExpr map(const DiffFn& prim, const CausalExpr& f);
CausalExpr rec(const DiffFn& prim, const Vec& init, const CausalExpr& f);
CausalExpr pair(const CausalExpr& f, const CausalExpr& g);

}  // namespace build

/// Evaluates e at s. Throws DimensionError when s.dim() != e.in_dim(), and
/// DomainError (tagged with the failing node) when an Inverse meets a zero head.
Stream eval_expr(const CausalExpr& e, const Stream& s);

/// e as a CausalFn.
CausalFn to_causal_fn(const CausalExpr& e);

/// Debug rendering of the raw IR, e.g. "Compose(Map(sigmoid), Input(1))".
std::string to_string(const CausalExpr& e);

}  // namespace causal
