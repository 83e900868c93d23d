#include "causal/autodiff.hpp"

#include <string>

#include "causal/calculus.hpp"
#include "causal/errors.hpp"

namespace causal {

namespace {

Vec concat(const Vec& a, const Vec& b) {
  Vec out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

TangentPair jvp_node(const CausalExpr& e, const Stream& s, const Stream& ds) {
  switch (e.kind()) {
    case NodeKind::kInput:
      return {s, ds};
    case NodeKind::kConstStream:
    case NodeKind::kXStream:
      return {eval_expr(e, s), zero_stream(1)};
    case NodeKind::kPointwiseSum:
    case NodeKind::kScalarMul:
    case NodeKind::kProj:
      return {eval_expr(e, s), eval_expr(e, ds)};
    case NodeKind::kCauchy: {
      auto [a, b] = unzip(s, 1);
      auto [da, db] = unzip(ds, 1);
      return {cauchy(a, b), pointwise_add(cauchy(da, b), cauchy(a, db))};
    }
    case NodeKind::kHadamard: {
      auto [a, b] = unzip(s, 1);
      auto [da, db] = unzip(ds, 1);
      return {hadamard(a, b), pointwise_add(hadamard(da, b), hadamard(a, db))};
    }
    case NodeKind::kInverse: {
      Stream inv = eval_expr(e, s);
      return {inv, cauchy(const_stream(-1.0), cauchy(inv, cauchy(inv, ds)))};
    }
    case NodeKind::kMap: {
      const DiffFn prim = e.prim();
      Stream primal = eval_expr(e, s);
      Stream tangent =
          Stream::from_index(e.out_dim(), [prim, s, ds](std::uint64_t k) { return prim.jvp(s.at(k), ds.at(k)); });
      return {primal, tangent};
    }
    case NodeKind::kRec:
      return rec_jvp(e.prim(), e.init(), s, ds);
    case NodeKind::kCompose: {
      const TangentPair inner = jvp_with_primal(e.child(1), s, ds);
      return jvp_with_primal(e.child(0), inner.primal, inner.tangent);
    }
    case NodeKind::kParallel: {
      const std::size_t split = e.child(0).in_dim();
      auto [a, b] = unzip(s, split);
      auto [da, db] = unzip(ds, split);
      const TangentPair left = jvp_with_primal(e.child(0), a, da);
      const TangentPair right = jvp_with_primal(e.child(1), b, db);
      return {zip(left.primal, right.primal), zip(left.tangent, right.tangent)};
    }
    case NodeKind::kPair: {
      const TangentPair left = jvp_with_primal(e.child(0), s, ds);
      const TangentPair right = jvp_with_primal(e.child(1), s, ds);
      return {zip(left.primal, right.primal), zip(left.tangent, right.tangent)};
    }
  }
  throw std::logic_error("jvp_expr: unhandled node kind");
}

}  // namespace

TangentPair jvp_with_primal(const CausalExpr& e, const Stream& s, const Stream& ds) {
  if (s.dim() != e.in_dim() || ds.dim() != e.in_dim()) {
    throw DimensionError(std::string(kind_name(e.kind())) + ": point/tangent dimensions " + std::to_string(s.dim()) +
                         "/" + std::to_string(ds.dim()) + ", expected " + std::to_string(e.in_dim()));
  }
  return jvp_node(e, s, ds);
}

Stream jvp_expr(const CausalExpr& e, const Stream& s, const Stream& ds) { return jvp_with_primal(e, s, ds).tangent; }

TangentPair rec_jvp(const DiffFn& prim, const Vec& init, const Stream& s, const Stream& ds) {
  const std::size_t m = init.size();
  if (prim.out_dim() != m || prim.in_dim() != s.dim() + m || ds.dim() != s.dim()) {
    throw DimensionError("rec_jvp: primitive " + prim.name() + " does not match stream dimension " +
                         std::to_string(s.dim()) + " and state dimension " + std::to_string(m));
  }
  Stream primal(m, [prim, init, s](std::uint64_t k, std::span<const Vec> prev) {
    const Vec x = concat(s.at(k), k == 0 ? init : prev[k - 1]);
    KinkScope::note(prim, x, k);
    return prim.eval(x);
  });
  Stream tangent(m, [prim, init, s, ds, primal](std::uint64_t k, std::span<const Vec> prev) {
    const Vec x = concat(s.at(k), k == 0 ? init : primal.at(k - 1));
    const Vec dx = concat(ds.at(k), k == 0 ? Vec(init.size(), 0.0) : prev[k - 1]);
    return prim.jvp(x, dx);
  });
  return {primal, tangent};
}

}  // namespace causal
